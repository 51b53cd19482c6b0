"""Nonlinear oblique projections along subalgebras.

For a Jordan-Hölder basis ``(Y_1, ..., Y_m)`` and an ordered partition of
the indices into blocks, ``Phi(t) = (sum_{A_1} t_j Y_j) ... (sum_{A_k} t_j Y_j)``
has the triangular form ``Phi(t)_j = t_j + P_j(t_{j+1}, ..., t_m)`` in the
``Y`` coordinates.  ``Phi`` is therefore inverted by back-substitution from
``j = m`` down to ``1``, one group product per step, with no symbolic
polynomials involved.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BadParameter,
    CellBoundaryCrossed,
    DimensionMismatch,
    MembershipFailure,
    NotASubalgebra,
    NotJordanHolder,
    NotJordanHolderFlag,
)
from .grassmann import AdaptedBasis, Flag, JumpSet, beta_basis, jump_indices
from .lie_core import LieAlgebra, bch_multiply, bch_product, is_jordan_holder_basis, is_subalgebra
from .linalg import Subspace, ensure_backend, solve
from .probes import SmoothnessReport, observed_order
from .scalars import DEFAULT_TOL, EXACT, FLOAT, arrays_equal, backend_of, exact_from_float, zeros


def coordinates_in_basis(x: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Coefficients ``t`` with ``basis @ t == x``."""
    basis = np.asarray(basis)
    if basis.shape[0] != np.shape(x)[0]:
        raise DimensionMismatch(f"vector of length {np.shape(x)[0]} against basis {basis.shape}")
    return solve(basis, np.asarray(x))


@dataclass(frozen=True, eq=False)
class BlockFactorization:
    t: np.ndarray
    blocks: tuple[tuple[int, ...], ...]
    factors: tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class FactorizationResult:
    """``Y = e_part . h_part`` with ``t`` the coordinates in the adapted basis."""

    t: np.ndarray
    e_part: np.ndarray
    h_part: np.ndarray


def _check_blocks(blocks, m: int) -> tuple[tuple[int, ...], ...]:
    blocks = tuple(tuple(sorted(int(j) for j in b)) for b in blocks)
    flat = sorted(j for b in blocks for j in b)
    if flat != list(range(1, m + 1)):
        raise BadParameter(f"blocks {blocks} do not partition 1..{m}")
    return blocks


def block_product(alg: LieAlgebra, basis: np.ndarray, blocks, t: np.ndarray) -> np.ndarray:
    """``Phi(t)``: the product of the block sums ``sum_{j in A_r} t_j Y_j`` in block order."""
    factors = [basis[:, [j - 1 for j in b]] @ t[[j - 1 for j in b]] if b else
               zeros(alg.dim, backend_of(basis)) for b in blocks]
    return bch_product(alg, *factors)


def block_factorize(alg: LieAlgebra, basis: np.ndarray, blocks, y: np.ndarray,
                    check_basis: bool = True) -> BlockFactorization:
    """Invert ``Phi`` at ``y`` by back-substitution."""
    basis = np.asarray(basis)
    m = alg.dim
    if basis.shape != (m, m) or np.shape(y) != (m,):
        raise DimensionMismatch("basis and vector must match the algebra dimension")
    blocks = _check_blocks(blocks, m)
    if check_basis and not is_jordan_holder_basis(alg, basis):
        raise NotJordanHolder("factorization basis is not a Jordan-Hölder basis")
    target = coordinates_in_basis(y, basis)
    t = zeros(m, backend_of(basis))
    for j in range(m, 0, -1):
        # t_1..t_j are still zero here, so coordinate j of Phi(t) is P_j(t_{>j})
        offset = coordinates_in_basis(block_product(alg, basis, blocks, t), basis)[j - 1]
        t[j - 1] = target[j - 1] - offset
    factors = tuple(basis[:, [j - 1 for j in b]] @ t[[j - 1 for j in b]] if b else
                    zeros(m, backend_of(basis)) for b in blocks)
    return BlockFactorization(t, blocks, factors)


def bipartite_factorize(alg: LieAlgebra, basis, e, y: np.ndarray,
                        check_basis: bool = True) -> FactorizationResult:
    """Factor ``y = (sum_{j in e} t_j Y_j) . (sum_{i not in e} t_i Y_i)``.

    ``basis`` may be an :class:`AdaptedBasis` or a plain matrix of columns.
    """
    vectors = basis.vectors if isinstance(basis, AdaptedBasis) else np.asarray(basis)
    m = alg.dim
    e = e if isinstance(e, JumpSet) else JumpSet.of(m, e)
    res = block_factorize(alg, vectors, [e.elements, e.complement().elements], y, check_basis)
    return FactorizationResult(res.t, res.factors[0], res.factors[1])


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    pi: np.ndarray
    h_part: np.ndarray
    e: JumpSet
    beta: AdaptedBasis
    t: np.ndarray
    residual: np.ndarray  # (-pi) . x, an element of the subalgebra


def _prepare(alg: LieAlgebra, flag: Flag | None, h: Subspace, x) -> tuple[str, Flag, Subspace, np.ndarray]:
    x = np.asarray(x)
    if x.shape != (alg.dim,):
        raise DimensionMismatch(f"expected a vector of length {alg.dim}")
    backend = backend_of(x) if x.dtype.kind in "fO" else EXACT
    x = ensure_backend(x, backend)
    if flag is None:
        flag = Flag.standard(alg.dim, backend)
    elif flag.backend != backend:
        flag = flag.to_backend(backend)
    if h.ambient_dim != alg.dim:
        raise DimensionMismatch("subalgebra is not in this algebra")
    if h.backend != backend:
        h = Subspace(ensure_backend(h.basis, backend), alg.dim)
    return backend, flag, h, x


class NonlinearProjector:
    """``x -> Pi(x)`` for a fixed subalgebra and flag.

    The checks, the jump set and the adapted basis are computed once, so
    repeated projections only pay for the back-substitution.
    """

    def __init__(self, alg: LieAlgebra, h: Subspace, flag: Flag | None = None,
                 backend: str = EXACT, tol: float = DEFAULT_TOL):
        if h.ambient_dim != alg.dim:
            raise DimensionMismatch("subalgebra is not in this algebra")
        if h.backend != backend:
            h = Subspace(ensure_backend(h.basis, backend), alg.dim)
        if flag is None:
            flag = Flag.standard(alg.dim, backend)
        elif flag.backend != backend:
            flag = flag.to_backend(backend)
        if not is_subalgebra(alg, h, tol):
            raise NotASubalgebra("subspace is not closed under the bracket")
        if not is_jordan_holder_basis(alg, flag.basis, tol):
            raise NotJordanHolderFlag("flag is not a Jordan-Hölder sequence of the algebra")
        self.alg, self.h, self.flag = alg, h, flag
        self.backend, self.tol = backend, tol
        self.e = jump_indices(flag, h)
        # beta(h) is Jordan-Hölder whenever the flag is; skip the re-check.
        self.beta = beta_basis(flag, self.e, h)

    def factorize(self, x) -> ProjectionResult:
        x = np.asarray(x)
        if x.shape != (self.alg.dim,):
            raise DimensionMismatch(f"expected a vector of length {self.alg.dim}")
        x = ensure_backend(x, self.backend)
        fact = bipartite_factorize(self.alg, self.beta, self.e, x, check_basis=False)
        residual = bch_multiply(self.alg, -fact.e_part, x)
        if not self.h.contains(residual, self.tol):
            raise MembershipFailure("(-Pi) . x is not in the subalgebra")
        return ProjectionResult(fact.e_part, fact.h_part, self.e, self.beta, fact.t, residual)

    def __call__(self, x) -> np.ndarray:
        return self.factorize(x).pi


def nonlinear_factorization(alg: LieAlgebra, h: Subspace, x, flag: Flag | None = None,
                            tol: float = DEFAULT_TOL) -> ProjectionResult:
    """Full data of the factorization ``x = Pi . h_part`` with ``h_part`` in ``h``."""
    backend, flag, h, x = _prepare(alg, flag, h, x)
    return NonlinearProjector(alg, h, flag, backend, tol).factorize(x)


def nonlinear_projection(alg: LieAlgebra, h: Subspace, x, flag: Flag | None = None,
                         tol: float = DEFAULT_TOL) -> np.ndarray:
    """The unique ``Pi`` in ``g_e`` with ``x`` in ``Pi . h``."""
    return nonlinear_factorization(alg, h, x, flag, tol).pi


def projection_idempotence_check(alg: LieAlgebra, h: Subspace, x, flag: Flag | None = None,
                                 tol: float = DEFAULT_TOL) -> bool:
    p = nonlinear_projection(alg, h, x, flag, tol)
    pp = nonlinear_projection(alg, h, p, flag, tol)
    return arrays_equal(p, pp, backend_of(p), tol)


# ---------------------------------------------------------------------------
# smoothness along a family of subalgebras


def _cell_signature(flag: Flag, e: JumpSet, w: Subspace) -> float:
    """Sign of ``det[U_e | basis of w]``; it cannot vanish inside the cell of ``e``."""
    u = flag.basis[:, [j - 1 for j in e]].astype(float)
    d = np.linalg.det(np.hstack([u, w.basis.astype(float)]))
    return float(np.sign(d))


def _single_cell(family: Callable[[float], Subspace], grid: Sequence[float], flag: Flag | None,
                 dim: int, refinements: int) -> tuple[JumpSet, Flag]:
    """Jump set shared by the whole refined grid, and the flag on the float backend.

    If the family object also has an ``exact`` method, jump sets are decided
    on its exact rational surrogate points.  Raises
    :class:`CellBoundaryCrossed` when the jump set changes on any sampled
    point or when ``det[U_e | basis]`` changes sign between samples, which
    means the family left the cell between grid points.
    """
    if flag is None:
        flag = Flag.standard(dim, EXACT)
    exact = getattr(family, "exact", None)
    exact_flag = None
    if exact is not None:
        exact_flag = flag if flag.backend == EXACT else Flag(exact_from_float(flag.basis))
    flag = flag.to_backend(FLOAT) if flag.backend != FLOAT else flag

    def jumps_at(theta: float) -> JumpSet:
        if exact is not None:
            return jump_indices(exact_flag, exact(theta))
        return jump_indices(flag, family(theta))

    pts = np.linspace(grid[0], grid[-1], (len(grid) - 1) * 2 ** refinements + 1)
    e0 = jumps_at(float(pts[0]))
    sign0 = None
    for theta in pts:
        e = jumps_at(float(theta))
        if e != e0:
            raise CellBoundaryCrossed(
                f"jump set changes from {e0.as_list()} to {e.as_list()} at theta={theta:.6g}")
        sign = _cell_signature(flag, e0, family(float(theta)))
        if sign0 is None:
            sign0 = sign
        elif sign != sign0:
            raise CellBoundaryCrossed(f"family leaves the cell {e0.as_list()} near theta={theta:.6g}")
    return e0, flag


def smoothness_probe(alg: LieAlgebra, family: Callable[[float], Subspace], x,
                     grid: Sequence[float], flag: Flag | None = None,
                     refinements: int = 2, min_order: float = 1.7,
                     tol: float = DEFAULT_TOL) -> SmoothnessReport:
    """Second-difference report of ``theta -> Pi(x, family(theta))``.

    ``family(theta)`` must return a float subspace whose basis varies
    continuously in ``theta``; the grid must stay inside one cell.
    """
    x = ensure_backend(np.asarray(x), FLOAT)
    e0, flag = _single_cell(family, grid, flag, alg.dim, refinements)

    def pi_at(theta: float) -> np.ndarray:
        return nonlinear_projection(alg, family(theta), x, flag, tol)

    report = observed_order(pi_at, grid, refinements, min_order)
    report.extra["jump_set"] = e0.as_list()
    return report


def beta_continuity_probe(family: Callable[[float], Subspace], grid: Sequence[float],
                          flag: Flag | None = None, refinements: int = 2,
                          min_order: float = 1.7) -> SmoothnessReport:
    """Second-difference report of the adapted basis ``theta -> beta(family(theta))``."""
    dim = family(float(grid[0])).ambient_dim
    e0, flag = _single_cell(family, grid, flag, dim, refinements)

    def beta_at(theta: float) -> np.ndarray:
        return beta_basis(flag, e0, family(theta)).vectors

    report = observed_order(beta_at, grid, refinements, min_order)
    report.extra["jump_set"] = e0.as_list()
    return report


__all__ = [
    "BlockFactorization",
    "FactorizationResult",
    "NonlinearProjector",
    "ProjectionResult",
    "beta_continuity_probe",
    "bipartite_factorize",
    "block_factorize",
    "block_product",
    "coordinates_in_basis",
    "nonlinear_factorization",
    "nonlinear_projection",
    "projection_idempotence_check",
    "smoothness_probe",
]
