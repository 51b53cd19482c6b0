"""Complete flags, jump indices, Schubert cells and adapted bases."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import BadIndex, DimensionMismatch, NotTransversal, SingularBasis, WrongJumpSet
from .linalg import (
    Subspace,
    ensure_backend,
    is_transversal,
    oblique_projection_direct,
    oblique_projection_mp,
    rank,
    solve,
)
from .scalars import EXACT, eye


class Flag:
    """Complete flag ``F_k = span{X_1, ..., X_k}`` from an ordered basis (columns)."""

    __slots__ = ("basis", "backend", "dim")

    def __init__(self, basis):
        basis = ensure_backend(np.asarray(basis))
        m = basis.shape[0]
        if basis.shape != (m, m):
            raise DimensionMismatch(f"flag basis must be square, got {basis.shape}")
        if rank(basis) < m:
            raise SingularBasis("flag vectors do not form a basis")
        self.basis = basis
        self.dim = m
        self.backend = "exact" if basis.dtype == object else "float"

    @classmethod
    def standard(cls, m: int, backend: str = EXACT) -> "Flag":
        return cls(eye(m, backend))

    def vector(self, j: int) -> np.ndarray:
        """``X_j``, 1-based."""
        if not 1 <= j <= self.dim:
            raise BadIndex(f"flag index {j} outside 1..{self.dim}")
        return self.basis[:, j - 1]

    def subspace(self, k: int) -> Subspace:
        """``F_k``; ``F_0`` is the zero subspace."""
        if not 0 <= k <= self.dim:
            raise BadIndex(f"flag level {k} outside 0..{self.dim}")
        return Subspace(self.basis[:, :k], self.dim, self.backend)

    def span_of(self, indices: Iterable[int]) -> Subspace:
        """``U_e = span{X_j : j in e}``."""
        cols = [j - 1 for j in sorted(indices)]
        return Subspace(self.basis[:, cols], self.dim, self.backend)

    def to_backend(self, backend: str) -> "Flag":
        return Flag(ensure_backend(self.basis, backend))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Flag) or other.dim != self.dim:
            return False
        return all(self.subspace(k) == other.subspace(k) for k in range(1, self.dim + 1))

    __hash__ = None


@dataclass(frozen=True)
class JumpSet:
    """Sorted subset of ``{1, ..., m}``."""

    m: int
    elements: tuple[int, ...]

    def __post_init__(self):
        els = tuple(sorted(set(int(j) for j in self.elements)))
        if any(not 1 <= j <= self.m for j in els):
            raise BadIndex(f"jump indices {els} outside 1..{self.m}")
        object.__setattr__(self, "elements", els)

    @classmethod
    def of(cls, m: int, elements: Iterable[int]) -> "JumpSet":
        return cls(m, tuple(elements))

    def complement(self) -> "JumpSet":
        return JumpSet(self.m, tuple(j for j in range(1, self.m + 1) if j not in self.elements))

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, j) -> bool:
        return j in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def as_list(self) -> list[int]:
        return list(self.elements)


def _as_jumpset(e, m: int) -> JumpSet:
    return e if isinstance(e, JumpSet) else JumpSet.of(m, e)


def _check(flag: Flag, w: Subspace) -> None:
    if w.ambient_dim != flag.dim:
        raise DimensionMismatch(f"subspace of R^{w.ambient_dim} against a flag in R^{flag.dim}")


def jump_indices(flag: Flag, w: Subspace) -> JumpSet:
    """Indices ``j`` with ``X_j`` outside ``W + F_{j-1}``."""
    _check(flag, w)
    m = flag.dim
    acc = w.basis
    current = rank(acc) if acc.shape[1] else 0
    jumps = []
    for j in range(1, m + 1):
        acc = np.hstack([acc, flag.basis[:, j - 1: j]])
        r = rank(acc)
        if r > current:
            jumps.append(j)
        current = r
    return JumpSet.of(m, jumps)


def jump_indices_sums(flag: Flag, w: Subspace) -> JumpSet:
    """Indices where ``dim(W + F_j)`` exceeds ``dim(W + F_{j-1})``."""
    _check(flag, w)
    dims = [(w + flag.subspace(j)).dim for j in range(flag.dim + 1)]
    return JumpSet.of(flag.dim, [j for j in range(1, flag.dim + 1) if dims[j] > dims[j - 1]])


def jump_indices_dual(flag: Flag, w: Subspace) -> JumpSet:
    """Complement of the indices where ``dim(W ∩ F_i)`` grows."""
    _check(flag, w)
    dims = [w.intersect(flag.subspace(i)).dim for i in range(flag.dim + 1)]
    grows = [i for i in range(1, flag.dim + 1) if dims[i] - dims[i - 1] == 1]
    return JumpSet.of(flag.dim, grows).complement()


def schubert_cell_contains(flag: Flag, e, w: Subspace) -> bool:
    _check(flag, w)
    e = _as_jumpset(e, flag.dim)
    if len(e) != w.codim:
        return False
    return jump_indices(flag, w) == e


@dataclass(frozen=True, eq=False)
class AdaptedBasis:
    """``beta(W) = (Y_1, ..., Y_m)`` as the columns of ``vectors``."""

    vectors: np.ndarray
    e: JumpSet
    subspace: Subspace

    def vector(self, j: int) -> np.ndarray:
        return self.vectors[:, j - 1]

    def subspace_part(self) -> np.ndarray:
        """Columns ``Y_i`` for ``i`` in the complement of ``e`` (a basis of W)."""
        return self.vectors[:, [i - 1 for i in self.e.complement()]]

    def e_part(self) -> np.ndarray:
        return self.vectors[:, [j - 1 for j in self.e]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, AdaptedBasis):
            return NotImplemented
        return self.e == other.e and self.vectors.shape == other.vectors.shape and bool(
            np.all(self.vectors == other.vectors))

    __hash__ = None


def beta_basis(flag: Flag, e, w: Subspace, allow_extended: bool = False,
               method: str = "direct", gram=None) -> AdaptedBasis:
    """Adapted basis of ``w`` relative to ``flag`` and jump set ``e``.

    ``Y_j = X_j`` for ``j`` in ``e`` and ``Y_i = X_i - E X_i`` otherwise,
    where ``E`` projects onto ``U_e`` along ``w``.  ``E`` comes from the
    direct solver by default; ``method="mp"`` uses the Moore-Penrose formula
    (optionally under the inner product ``gram``).  By default ``w`` must
    lie in the Schubert cell of ``e``; ``allow_extended`` only requires
    ``U_e (+) w`` to be the whole space.
    """
    _check(flag, w)
    e = _as_jumpset(e, flag.dim)
    u_e = flag.span_of(e)
    if not is_transversal(u_e, w):
        raise NotTransversal(f"U_e for e={e.as_list()} is not complementary to the subspace")
    if not allow_extended:
        actual = jump_indices(flag, w)
        if actual != e:
            raise WrongJumpSet(f"subspace has jump set {actual.as_list()}, not {e.as_list()}")
    if method == "direct":
        proj = oblique_projection_direct(u_e, w)
    elif method == "mp":
        proj = oblique_projection_mp(u_e, w, gram)
    else:
        raise ValueError(f"unknown method {method!r}")
    vectors = flag.basis.copy()
    for i in e.complement():
        x = flag.basis[:, i - 1]
        vectors[:, i - 1] = x - proj @ x
    return AdaptedBasis(vectors, e, w)


def chi(u0: Subspace, w: Subspace) -> np.ndarray:
    """Graph coordinate ``T`` of ``w`` over ``u0^perp``.

    Coordinates are relative to the canonical bases of ``u0^perp``
    (domain) and ``u0`` (codomain), matching :func:`graph_projection`.
    """
    if not is_transversal(u0, w):
        raise NotTransversal("chi requires a complement of u0")
    b0 = u0.canonical
    b1 = u0.orthogonal_complement().canonical
    k1 = b1.shape[1]
    if k1 == 0:
        return np.zeros((u0.dim, 0), dtype=b0.dtype)
    coords = solve(np.hstack([b1, b0]), w.basis)
    a, c = coords[:k1], coords[k1:]
    return c @ solve(a, eye(k1, w.backend))


def chi_inverse(u0: Subspace, t: np.ndarray) -> Subspace:
    """``{v + T v : v in u0^perp}``."""
    b0 = u0.canonical
    b1 = u0.orthogonal_complement().canonical
    t = np.asarray(t)
    if t.shape != (b0.shape[1], b1.shape[1]):
        raise DimensionMismatch(f"T must be {b0.shape[1]}x{b1.shape[1]}, got {t.shape}")
    if b1.shape[1] == 0:
        return Subspace.zero(u0.ambient_dim, u0.backend)
    return Subspace(b1 + b0 @ t, u0.ambient_dim)


__all__ = [
    "AdaptedBasis",
    "Flag",
    "JumpSet",
    "beta_basis",
    "chi",
    "chi_inverse",
    "jump_indices",
    "jump_indices_dual",
    "jump_indices_sums",
    "schubert_cell_contains",
]
