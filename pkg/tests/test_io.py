from __future__ import annotations

import json

import numpy as np
import pytest

from generators import rand_subspace
from nilproj import catalog, io
from nilproj.errors import BadParameter, DimensionMismatch, DuplicateEntry, JacobiViolation
from nilproj.grassmann import Flag
from nilproj.linalg import Subspace
from nilproj.scalars import exact_array


def test_algebra_round_trip(entries, tmp_path):
    for entry in entries:
        doc = io.algebra_to_json(entry.algebra)
        path = tmp_path / f"{entry.name}.json"
        io.dump(doc, path)
        again = io.algebra_from_json(path)
        assert again == entry.algebra
        assert again.name == entry.algebra.name


def test_algebra_fixture_files(fixtures_dir):
    heis = io.algebra_from_json(fixtures_dir / "heisenberg.json")
    assert heis == catalog.heisenberg().algebra
    with pytest.raises(JacobiViolation):
        io.algebra_from_json(fixtures_dir / "broken-jacobi.json")


@pytest.mark.parametrize("doc,err", [
    ({"basis": []}, BadParameter),
    ({"dim": "3"}, BadParameter),
    ({"dim": 3, "brackets": {}}, BadParameter),
    ({"dim": 3, "brackets": [{"i": 3, "j": 2}]}, BadParameter),
    ({"dim": 3, "brackets": [{"i": 3, "j": 2, "out": {"1": "0.5"}}]}, BadParameter),
    ({"dim": 3, "brackets": [{"i": 3, "j": 2, "out": {"1": "1"}},
                             {"i": 3, "j": 2, "out": {"1": "1"}}]}, DuplicateEntry),
])
def test_algebra_bad_documents(doc, err):
    with pytest.raises(err):
        io.algebra_from_json(doc)


def test_unreadable_files(tmp_path):
    with pytest.raises(BadParameter):
        io.algebra_from_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(BadParameter):
        io.algebra_from_json(bad)


def test_subspace_round_trip(rng):
    for _ in range(10):
        w = rand_subspace(rng, 4)
        again = io.subspace_from_json(json.loads(json.dumps(io.subspace_to_json(w))))
        assert again == w


def test_subspace_float_mode():
    doc = {"ambient_dim": 2, "columns": [["1/2", "0.25"]]}
    w = io.subspace_from_json(doc, "float")
    assert np.allclose(w.basis.ravel(), [0.5, 0.25])
    with pytest.raises(BadParameter):
        io.subspace_from_json(doc)
    with pytest.raises(DimensionMismatch):
        io.subspace_from_json({"ambient_dim": 3, "columns": [["1", "0"]]})


def test_flag_round_trip():
    flag = Flag(exact_array([[1, 1, 0], [0, 1, 0], [0, 0, 2]]))
    assert io.flag_from_json(io.flag_to_json(flag)) == flag
    with pytest.raises(DimensionMismatch):
        io.flag_from_json({"ambient_dim": 3, "columns": [["1", "0", "0"]]})


def test_zero_subspace_round_trip():
    z = Subspace.zero(3)
    assert io.subspace_from_json(io.subspace_to_json(z)) == z
