from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import rand_vector
from nilproj import catalog
from nilproj.errors import (
    BackendMismatch,
    BadIndex,
    BadParameter,
    DimensionCapExceeded,
    DimensionMismatch,
    DuplicateEntry,
    JacobiViolation,
    NotNilpotent,
    SingularBasis,
)
from nilproj.lie_core import (
    ad_matrix,
    bch_inverse,
    bch_multiply,
    bch_product,
    bch_term,
    bch_word_coefficients,
    bch_word_coefficients_naive,
    bracket,
    center,
    derived_algebra,
    derived_bracket_probe,
    is_jordan_holder_basis,
    is_subalgebra,
    lower_central_series,
    validate_algebra,
)
from nilproj.linalg import Subspace
from nilproj.scalars import exact_array, float_array
from oracles import bch_component, bch_oracle

F = Fraction


def ev(*coords):
    return exact_array(list(coords))


@pytest.fixture(scope="module")
def heis_alg():
    return catalog.heisenberg().algebra


@pytest.fixture(scope="module")
def t4():
    return catalog.threadlike(4).algebra


# --- validation -------------------------------------------------------------


def test_validate_line():
    alg = validate_algebra(1)
    assert alg.dim == 1 and alg.is_abelian and alg.nilpotency_class == 1


def test_validate_heisenberg(heis_alg):
    alg = validate_algebra(3, {(3, 2): {1: 1}})
    assert alg == heis_alg
    assert alg.nilpotency_class == 2
    assert alg.brackets() == {(3, 2): {1: F(1)}}


def test_validate_rejects_non_nilpotent_table():
    # [X3,X2] = X1 together with [X2,X1] = X3: Jacobi holds on the only
    # triple, but ad X2 maps X1 -> -X3 -> X1 cyclically.
    with pytest.raises((JacobiViolation, NotNilpotent)) as info:
        validate_algebra(3, {(3, 2): {1: 1}, (2, 1): {3: 1}})
    assert isinstance(info.value, NotNilpotent)
    assert info.value.witness == 2


def test_validate_list_records_and_rationals():
    alg = validate_algebra(3, [{"i": 3, "j": 2, "out": {"1": "1/2"}}])
    assert bracket(alg, alg.basis_vector(3), alg.basis_vector(2))[0] == F(1, 2)


@pytest.mark.parametrize("table,err", [
    ({(4, 2): {1: 1}}, BadIndex),
    ({(2, 3): {1: 1}}, BadIndex),
    ({(3, 2): {7: 1}}, BadIndex),
    ([{"i": 3, "j": 2, "out": {"1": "1"}}, {"i": 3, "j": 2, "out": {"1": "2"}}], DuplicateEntry),
])
def test_validate_bad_tables(table, err):
    with pytest.raises(err):
        validate_algebra(3, table)


def test_validate_dimension_cap(monkeypatch):
    with pytest.raises(BadParameter):
        validate_algebra(0)
    monkeypatch.setenv("NILPROJ_MAX_DIM", "3")
    with pytest.raises(DimensionCapExceeded):
        validate_algebra(4)
    validate_algebra(3)


def test_catalog_algebras_validate(entries):
    for entry in entries:
        again = validate_algebra(entry.dim, entry.algebra.brackets())
        assert again == entry.algebra


def test_jacobi_mutations_rejected(entries):
    # flipping or rescaling a single bracket of a non-abelian catalog algebra
    # breaks Jacobi (or nilpotency) in every case tried
    rng = random.Random(7)
    rejected = 0
    tried = 0
    for entry in entries:
        table = entry.algebra.brackets()
        keys = sorted(table)
        for key in keys:
            for extra in range(1, entry.dim + 1):
                mutated = {k: dict(v) for k, v in table.items()}
                mutated.setdefault(key, {})
                mutated[key][extra] = mutated[key].get(extra, 0) + rng.choice([1, 2, -1])
                tried += 1
                try:
                    validate_algebra(entry.dim, mutated)
                except (JacobiViolation, NotNilpotent):
                    rejected += 1
    assert tried > 0 and rejected > 0


def test_threadlike_mutation_breaks_jacobi():
    # threadlike(4) plus [X3,X2] = X1 and [X3,X1] = X1
    table = {(4, 3): {2: 1}, (4, 2): {1: 1}, (3, 2): {1: 1}, (3, 1): {1: 1}}
    with pytest.raises(JacobiViolation) as info:
        validate_algebra(4, table)
    assert info.value.triple == (2, 3, 4)


# --- bracket and ad -------------------------------------------------------


def test_bracket_examples(heis_alg, rng):
    x1, x2, x3 = (heis_alg.basis_vector(i) for i in (1, 2, 3))
    assert list(bracket(heis_alg, x3, x2)) == list(x1)
    assert list(bracket(heis_alg, x2 + x3, x2)) == list(x1)
    v = rand_vector(rng, 3)
    assert all(c == 0 for c in bracket(heis_alg, v, v))


def test_bracket_dimension_mismatch(heis_alg):
    with pytest.raises(DimensionMismatch):
        bracket(heis_alg, ev(1, 0), ev(0, 1, 0))


def test_bracket_backend_mix(heis_alg):
    with pytest.raises(BackendMismatch):
        bracket(heis_alg, ev(1, 0, 0), np.array([1.0, 0.0, 0.0]))


def test_ad_matrix(heis_alg, entries, rng):
    assert np.all(ad_matrix(heis_alg, heis_alg.zero()) == 0)
    ad3 = ad_matrix(heis_alg, heis_alg.basis_vector(3))
    expected = np.zeros((3, 3), dtype=int)
    expected[0, 1] = 1
    assert np.array_equal(ad3.astype(int), expected)
    for entry in entries:
        x = rand_vector(rng, entry.dim)
        a = ad_matrix(entry.algebra, x)
        p = a
        for _ in range(entry.dim - 1):
            p = p @ a
        assert all(v == 0 for v in p.ravel())


def test_ad_columns_are_brackets(entries, rng):
    for entry in entries:
        x = rand_vector(rng, entry.dim)
        a = ad_matrix(entry.algebra, x)
        for j in range(1, entry.dim + 1):
            assert list(a[:, j - 1]) == list(bracket(entry.algebra, x, entry.algebra.basis_vector(j)))


def test_structure_subspaces():
    five = catalog.five_dim_example()
    assert center(five.algebra) == Subspace.coordinate(5, [1, 2])
    assert derived_algebra(five.algebra) == Subspace.coordinate(5, [1, 2, 3])
    series = lower_central_series(catalog.threadlike(5).algebra)
    assert [s.dim for s in series] == [5, 3, 2, 1, 0]


# --- Jordan-Hölder and subalgebras ------------------------------------------


def test_jordan_holder(heis_alg):
    assert is_jordan_holder_basis(heis_alg, np.eye(3, dtype=int).astype(object) * F(1))
    rev = exact_array([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    assert not is_jordan_holder_basis(heis_alg, rev)
    with pytest.raises(SingularBasis):
        is_jordan_holder_basis(heis_alg, exact_array([[1, 1, 0], [0, 0, 0], [0, 0, 1]]))


def test_jordan_holder_abelian_any_basis(rng):
    alg = catalog.abelian(4)
    b = np.column_stack([rand_vector(rng, 4) for _ in range(4)])
    b += np.eye(4, dtype=int) * 20  # diagonally dominant, hence invertible
    assert is_jordan_holder_basis(alg, b)


def test_is_subalgebra(heis_alg, rng):
    for _ in range(5):
        v = rand_vector(rng, 3)
        if any(v):
            assert is_subalgebra(heis_alg, Subspace(v.reshape(3, 1)))
    assert is_subalgebra(heis_alg, Subspace.coordinate(3, [1, 2]))
    five = catalog.five_dim_example().algebra
    assert not is_subalgebra(five, Subspace.coordinate(5, [3, 4]))


# --- BCH ------------------------------------------------------------------


def test_word_coefficients_match_naive_enumeration():
    for n in range(1, 7):
        assert bch_word_coefficients(n) == bch_word_coefficients_naive(n)


def test_low_degree_terms(heis_alg, t4, rng):
    for alg in (heis_alg, t4, catalog.threadlike(6).algebra):
        for _ in range(5):
            x, y = rand_vector(rng, alg.dim), rand_vector(rng, alg.dim)
            assert list(bch_term(alg, 1, x, y)) == list(x + y)
            assert list(bch_term(alg, 2, x, y)) == list(bracket(alg, x, y) / 2)
            c3 = (bracket(alg, x, bracket(alg, x, y)) + bracket(alg, y, bracket(alg, y, x))) / 12
            assert list(bch_term(alg, 3, x, y, truncate=False)) == list(c3)


def test_terms_match_log_exp_oracle(rng):
    alg = catalog.threadlike(6).algebra
    for _ in range(4):
        x, y = rand_vector(rng, 6), rand_vector(rng, 6)
        for n in range(2, 7):
            assert list(bch_term(alg, n, x, y, truncate=False)) == list(bch_component(alg, n, x, y))


def test_product_matches_oracle(entries, rng):
    for entry in entries:
        x, y = rand_vector(rng, entry.dim), rand_vector(rng, entry.dim)
        assert list(bch_multiply(entry.algebra, x, y)) == list(bch_oracle(entry.algebra, x, y))


def test_bch_examples(heis_alg, t4):
    assert list(bch_multiply(heis_alg, ev(0, 1, 0), ev(0, 0, 1))) == [F(-1, 2), 1, 1]
    assert list(bch_multiply(t4, ev(0, 0, 0, 1), ev(0, 0, 1, 0))) == [F(1, 12), F(1, 2), 1, 1]


def test_truncation_vanishes(entries, rng):
    for entry in entries:
        for _ in range(5):
            x, y = rand_vector(rng, entry.dim), rand_vector(rng, entry.dim)
            for n in (entry.dim, entry.dim + 1):
                assert all(v == 0 for v in bch_term(entry.algebra, n, x, y, truncate=False))


def test_bch_term_rejects_bad_degree(heis_alg):
    with pytest.raises(BadParameter):
        bch_term(heis_alg, 0, heis_alg.zero(), heis_alg.zero())


def test_abelian_product_is_sum(rng):
    alg = catalog.abelian(5)
    x, y = rand_vector(rng, 5), rand_vector(rng, 5)
    assert list(bch_multiply(alg, x, y)) == list(x + y)


def test_inverse(heis_alg, entries, rng):
    assert list(bch_inverse(heis_alg.zero())) == [0, 0, 0]
    assert list(bch_inverse(ev(0, 1, 1))) == [0, -1, -1]
    for entry in entries:
        x = rand_vector(rng, entry.dim)
        assert all(v == 0 for v in bch_multiply(entry.algebra, x, bch_inverse(x)))


def test_product_requires_factor(heis_alg):
    with pytest.raises(BadParameter):
        bch_product(heis_alg)


def test_float_backend_agrees(entries, rng):
    for entry in entries:
        x, y = rand_vector(rng, entry.dim), rand_vector(rng, entry.dim)
        exact = float_array(bch_multiply(entry.algebra, x, y))
        approx = bch_multiply(entry.algebra, float_array(x), float_array(y))
        assert np.allclose(exact, approx, rtol=1e-12, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["heisenberg", "threadlike", "five_dim"]),
       st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=6), min_size=15, max_size=15))
def test_associativity_property(name, coords):
    entry = catalog.get(name, 5 if name == "threadlike" else None)
    m = entry.dim
    x, y, z = (np.array(coords[k * 5: k * 5 + m], dtype=object) for k in range(3))
    alg = entry.algebra
    lhs = bch_multiply(alg, bch_multiply(alg, x, y), z)
    rhs = bch_multiply(alg, x, bch_multiply(alg, y, z))
    assert list(lhs) == list(rhs)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=7),
       st.fractions(min_value=-5, max_value=5, max_denominator=7),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=6, max_size=6))
def test_one_parameter_subgroups(t, s, coords):
    alg = catalog.threadlike(6).algebra
    x = np.array(coords, dtype=object)
    assert list(bch_multiply(alg, t * x, s * x)) == list((t + s) * x)


# --- derived bracket probe ---------------------------------------------------


@pytest.mark.parametrize("name,dim,i,j", [("heisenberg", None, 3, 2), ("threadlike", 4, 4, 3)])
def test_derived_bracket_probe_quadratic(name, dim, i, j):
    alg = catalog.get(name, dim).algebra
    x = alg.basis_vector(i, "float")
    y = alg.basis_vector(j, "float")
    target = bracket(alg, x, y)
    errs = [float(np.max(np.abs(derived_bracket_probe(alg, x, y, h) - target))) for h in (0.1, 0.05)]
    assert errs[0] < 1e-2
    # the probe is exact up to rounding for these polynomial maps, or decays like h^2
    assert errs[1] <= max(errs[0] / 3.5, 1e-8)


def test_derived_bracket_probe_random(entries):
    rng = np.random.default_rng(3)
    for entry in entries:
        alg = entry.algebra
        x, y = rng.normal(size=alg.dim), rng.normal(size=alg.dim)
        target = bracket(alg, x, y)
        e1 = np.max(np.abs(derived_bracket_probe(alg, x, y, 1e-2) - target))
        e2 = np.max(np.abs(derived_bracket_probe(alg, x, y, 5e-3) - target))
        assert e1 < 1e-2
        assert e2 <= max(e1 / 3.5, 1e-7)


def test_derived_bracket_probe_abelian_and_exact_refusal(heis_alg):
    alg = catalog.abelian(3)
    out = derived_bracket_probe(alg, np.array([1.0, 2, 3]), np.array([0.5, -1, 2]), 1e-3)
    assert np.allclose(out, 0, atol=1e-9)
    with pytest.raises(BackendMismatch):
        derived_bracket_probe(heis_alg, ev(0, 0, 1), ev(0, 1, 0), 1e-3)
    with pytest.raises(BadParameter):
        derived_bracket_probe(heis_alg, np.ones(3), np.ones(3), 0.0)
