"""JSON file formats.

Algebra::

    {"dim": 3, "basis": ["X1", "X2", "X3"],
     "brackets": [{"i": 3, "j": 2, "out": {"1": "1"}}]}

Subspace (and flag, with ``dim`` columns)::

    {"ambient_dim": 3, "columns": [["1", "0", "-1/2"], ...]}

Coefficients are rational strings ``"p/q"`` or ``"p"``; only ``i > j``
bracket entries are allowed.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import BadParameter, DimensionMismatch
from .grassmann import Flag
from .lie_core import LieAlgebra, validate_algebra
from .linalg import Subspace
from .scalars import EXACT, FLOAT, format_scalar, parse_rational


def _read(source):
    if isinstance(source, dict):
        return source
    try:
        return json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise BadParameter(f"{source}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise BadParameter(f"cannot read {source}: {exc}") from exc


def algebra_to_json(alg: LieAlgebra) -> dict:
    doc = {
        "dim": alg.dim,
        "basis": list(alg.basis_names),
        "brackets": [
            {"i": i, "j": j, "out": {str(k): str(c) for k, c in out.items()}}
            for (i, j), out in sorted(alg.brackets().items(), key=lambda kv: (-kv[0][0], -kv[0][1]))
        ],
    }
    if alg.name:
        doc["name"] = alg.name
    return doc


def algebra_from_json(doc) -> LieAlgebra:
    doc = _read(doc)
    if not isinstance(doc, dict) or "dim" not in doc:
        raise BadParameter("algebra JSON needs a 'dim' field")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise BadParameter(f"'dim' must be an integer, got {dim!r}")
    brackets = doc.get("brackets", [])
    if not isinstance(brackets, list):
        raise BadParameter("'brackets' must be a list")
    for entry in brackets:
        if not isinstance(entry, dict) or not {"i", "j", "out"} <= set(entry):
            raise BadParameter(f"malformed bracket entry {entry!r}")
    return validate_algebra(dim, brackets, name=doc.get("name"), basis_names=doc.get("basis"))


def _parse_entry(v, backend: str):
    if backend == EXACT:
        return parse_rational(v)
    if isinstance(v, str) and "/" in v:
        return float(Fraction(v))
    return float(v)


def columns_from_json(doc, backend: str = EXACT) -> tuple[int, np.ndarray]:
    doc = _read(doc)
    if not isinstance(doc, dict) or "ambient_dim" not in doc or "columns" not in doc:
        raise BadParameter("subspace JSON needs 'ambient_dim' and 'columns'")
    m = doc["ambient_dim"]
    cols = doc["columns"]
    if not isinstance(m, int) or m < 1 or not isinstance(cols, list):
        raise BadParameter("malformed subspace JSON")
    for c in cols:
        if not isinstance(c, list) or len(c) != m:
            raise DimensionMismatch(f"every column needs {m} entries")
    dtype = object if backend == EXACT else float
    mat = np.empty((m, len(cols)), dtype=dtype)
    for k, c in enumerate(cols):
        for i, v in enumerate(c):
            mat[i, k] = _parse_entry(v, backend)
    return m, mat


def subspace_from_json(doc, backend: str = EXACT) -> Subspace:
    m, mat = columns_from_json(doc, backend)
    return Subspace(mat, m, backend)


def subspace_to_json(w: Subspace) -> dict:
    return {
        "ambient_dim": w.ambient_dim,
        "columns": [[_fmt(v) for v in w.basis[:, k]] for k in range(w.dim)],
    }


def flag_from_json(doc, backend: str = EXACT) -> Flag:
    m, mat = columns_from_json(doc, backend)
    if mat.shape[1] != m:
        raise DimensionMismatch(f"a flag needs {m} columns, got {mat.shape[1]}")
    return Flag(mat)


def flag_to_json(flag: Flag) -> dict:
    return {
        "ambient_dim": flag.dim,
        "columns": [[_fmt(v) for v in flag.basis[:, k]] for k in range(flag.dim)],
    }


def _fmt(v):
    out = format_scalar(v)
    return out if isinstance(out, str) else repr(out)


def vector_to_json(v) -> list:
    return [format_scalar(x) for x in np.asarray(v).ravel()]


def dump(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


__all__ = [
    "algebra_from_json",
    "algebra_to_json",
    "columns_from_json",
    "dump",
    "flag_from_json",
    "flag_to_json",
    "subspace_from_json",
    "subspace_to_json",
    "vector_to_json",
]
