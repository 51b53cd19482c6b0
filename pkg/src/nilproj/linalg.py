"""Finite-dimensional real linear algebra over two scalar backends.

Exact computations run Gauss-Jordan elimination on ``Fraction`` object
arrays and never use a tolerance.  Float computations use partial pivoting
or the SVD with the relative rank threshold :data:`nilproj.scalars.TAU`.

Subspaces are column-spans; the optional ``gram`` argument accepted by the
projection routines replaces the standard inner product by
``<x, y> = x^T G y`` for a symmetric positive-definite ``G``.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import BackendMismatch, BadParameter, DimensionMismatch, NotTransversal, SingularBasis
from .scalars import (
    DEFAULT_TOL,
    EXACT,
    FLOAT,
    ONE,
    TAU,
    backend_of,
    common_backend,
    eye,
    to_backend,
    zeros,
)

# Principal-angle threshold for float subspace equality.
ANGLE_TOL = 1e-8


# ---------------------------------------------------------------------------
# elimination kernels


def rref(a: np.ndarray, tol: float = TAU) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    On the float backend a pivot is accepted when it exceeds ``tol`` times
    the largest absolute entry of the input.
    """
    backend = backend_of(a)
    r = a.copy()
    rows, cols = r.shape
    pivots: list[int] = []
    if backend == FLOAT:
        thresh = tol * max(1.0, float(np.max(np.abs(r), initial=0.0)))
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        if backend == EXACT:
            cand = next((i for i in range(row, rows) if r[i, col] != 0), None)
        else:
            i = row + int(np.argmax(np.abs(r[row:, col])))
            cand = i if abs(r[i, col]) > thresh else None
        if cand is None:
            continue
        if cand != row:
            r[[row, cand]] = r[[cand, row]]
        r[row] = r[row] * (ONE / r[row, col]) if backend == EXACT else r[row] / r[row, col]
        for i in range(rows):
            if i != row and r[i, col] != 0:
                r[i] = r[i] - r[i, col] * r[row]
        if backend == FLOAT:
            r[row + 1:, col] = 0.0
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray, tol: float = TAU) -> int:
    if a.size == 0:
        return 0
    if backend_of(a) == EXACT:
        return len(rref(a)[1])
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0


def null_space(a: np.ndarray, tol: float = TAU) -> np.ndarray:
    """Basis of ``{x : a x = 0}`` as columns."""
    backend = backend_of(a)
    n = a.shape[1]
    if backend == FLOAT:
        if a.shape[0] == 0:
            return np.eye(n)
        return scipy.linalg.null_space(a, rcond=tol)
    r, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    out = zeros((n, len(free)), EXACT)
    for k, f in enumerate(free):
        out[f, k] = ONE
        for i, p in enumerate(pivots):
            out[p, k] = -r[i, f]
    return out


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a x = b`` for square invertible ``a``; ``b`` may be a matrix."""
    backend = common_backend(a, b)
    n = a.shape[0]
    if a.shape != (n, n) or b.shape[0] != n:
        raise DimensionMismatch(f"cannot solve {a.shape} system against {b.shape}")
    if backend == FLOAT:
        if rank(a) < n:
            raise SingularBasis("matrix is singular")
        return np.linalg.solve(a, b)
    vec = b.ndim == 1
    rhs = b.reshape(n, -1)
    r, pivots = rref(np.hstack([a, rhs]))
    if pivots[:n] != list(range(n)):
        raise SingularBasis("matrix is singular")
    x = r[:, n:]
    return x.ravel() if vec else x


def inverse(a: np.ndarray) -> np.ndarray:
    return solve(a, eye(a.shape[0], backend_of(a)))


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A linear subspace of ``R^m`` given by a basis matrix (columns).

    ``canonical`` is the reduced column-echelon form of the basis, which is
    unique per subspace on the exact backend.
    """

    __slots__ = ("ambient_dim", "basis", "canonical", "backend")

    def __init__(self, basis, ambient_dim: int | None = None, backend: str | None = None):
        basis = np.asarray(basis)
        if basis.ndim == 1:
            basis = basis.reshape(-1, 1) if basis.size else basis.reshape(0, 0)
        if basis.size == 0:
            m = ambient_dim if ambient_dim is not None else basis.shape[0]
            basis = zeros((m, 0), backend or backend_of_safe(basis) or EXACT)
        else:
            basis = ensure_backend(basis, backend)
        self.backend = backend_of(basis)
        self.ambient_dim = basis.shape[0]
        if ambient_dim is not None and ambient_dim != self.ambient_dim:
            raise DimensionMismatch(f"basis has {self.ambient_dim} rows, expected {ambient_dim}")
        if basis.shape[1]:
            r, pivots = rref(basis.T.copy())
            if len(pivots) < basis.shape[1]:
                raise SingularBasis("subspace basis columns are linearly dependent")
            canonical = r[: len(pivots)].T
        else:
            canonical = basis
        self.basis = basis
        self.canonical = canonical

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, backend: str | None = None) -> "Subspace":
        """Span of possibly dependent columns."""
        a = np.asarray(vectors)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        if a.size:
            a = ensure_backend(a, backend)
        m = ambient_dim if ambient_dim is not None else a.shape[0]
        if a.size == 0:
            return cls.zero(m, backend or EXACT)
        if a.shape[0] != m:
            raise DimensionMismatch(f"vectors have {a.shape[0]} rows, expected {m}")
        r, pivots = rref(a.T.copy())
        return cls(r[: len(pivots)].T.copy() if pivots else zeros((m, 0), backend_of(a)), m)

    @classmethod
    def zero(cls, m: int, backend: str = EXACT) -> "Subspace":
        return cls(zeros((m, 0), backend), m)

    @classmethod
    def full(cls, m: int, backend: str = EXACT) -> "Subspace":
        return cls(eye(m, backend), m)

    @classmethod
    def coordinate(cls, m: int, indices, backend: str = EXACT) -> "Subspace":
        """``span{e_j : j in indices}`` with 1-based indices."""
        cols = [j - 1 for j in sorted(indices)]
        return cls(eye(m, backend)[:, cols], m)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    def _check(self, other: "Subspace") -> None:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("subspaces live in different ambient spaces")
        common_backend(self.basis, other.basis)

    def contains(self, v, tol: float = DEFAULT_TOL) -> bool:
        v = np.asarray(v)
        if v.shape[0] != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {v.shape[0]} in R^{self.ambient_dim}")
        if self.backend == EXACT:
            common_backend(self.basis, v)
            if self.dim == 0:
                return all(x == 0 for x in v.ravel())
            return rank(np.column_stack([self.canonical, v])) == self.dim
        vv = v.reshape(self.ambient_dim, -1).astype(float)
        scale = max(1.0, float(np.max(np.abs(vv), initial=0.0)))
        if self.dim == 0:
            return float(np.max(np.abs(vv), initial=0.0)) <= tol * scale
        q = scipy.linalg.orth(self.basis)
        resid = vv - q @ (q.T @ vv)
        return float(np.max(np.abs(resid), initial=0.0)) <= tol * scale

    def contains_subspace(self, other: "Subspace", tol: float = DEFAULT_TOL) -> bool:
        self._check(other)
        return other.dim == 0 or self.contains(other.basis, tol)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(np.hstack([self.basis, other.basis]), self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.backend)
        ns = null_space(np.hstack([self.basis, -other.basis]))
        return Subspace.span(self.basis @ ns[: self.dim], self.ambient_dim, self.backend)

    def orthogonal_complement(self, gram=None) -> "Subspace":
        m = self.ambient_dim
        if self.dim == 0:
            return Subspace.full(m, self.backend)
        rows = self.basis.T if gram is None else self.basis.T @ gram
        return Subspace(null_space(rows), m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        if other.ambient_dim != self.ambient_dim or other.dim != self.dim:
            return False
        common_backend(self.basis, other.basis)
        if self.dim == 0:
            return True
        if self.backend == EXACT:
            return bool(np.all(self.canonical == other.canonical))
        angles = scipy.linalg.subspace_angles(self.basis, other.basis)
        return float(np.max(angles)) <= ANGLE_TOL

    def __hash__(self) -> int:
        if self.backend == FLOAT:
            raise TypeError("float subspaces are unhashable")
        return hash((self.ambient_dim, tuple(self.canonical.T.ravel())))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim}, backend={self.backend})"


def backend_of_safe(a: np.ndarray) -> str | None:
    try:
        return backend_of(a)
    except BackendMismatch:
        return None


def ensure_backend(a, backend: str | None = None) -> np.ndarray:
    """Return ``a`` on ``backend``; integer input defaults to exact."""
    a = np.asarray(a)
    current = backend_of_safe(a)
    if backend is None:
        return a if current is not None else to_backend(a, EXACT)
    return a if current == backend else to_backend(a, backend)


# ---------------------------------------------------------------------------
# Moore-Penrose inverse and projections


def adjoint(a: np.ndarray, gram=None) -> np.ndarray:
    """Adjoint of a square operator for ``<x, y> = x^T G y``."""
    if gram is None:
        return a.T.copy()
    return solve(gram, a.T @ gram)


def moore_penrose(a: np.ndarray, gram=None, tol: float = TAU) -> np.ndarray:
    """Moore-Penrose inverse.

    Exact backend: rank factorization ``A = C F`` with ``C`` the pivot
    columns of ``A`` and ``F`` the nonzero rows of its RREF, then
    ``A+ = F*(F F*)^-1 (C* C)^-1 C*``.  Float backend: SVD with singular
    values below ``tol * s_max`` discarded.

    ``gram`` (square ``A`` only) makes the adjoints in the four Penrose
    equations relative to ``<x, y> = x^T G y``.
    """
    backend = backend_of(a)
    rows, cols = a.shape
    if gram is not None:
        if rows != cols or gram.shape != (rows, rows):
            raise DimensionMismatch("gram requires a square operator of matching size")
        common_backend(a, gram)
    if backend == FLOAT:
        if gram is not None:
            lower = np.linalg.cholesky(gram)
            a_on = lower.T @ a @ np.linalg.inv(lower.T)
            return np.linalg.inv(lower.T) @ moore_penrose(a_on, tol=tol) @ lower.T
        if a.size == 0:
            return np.zeros((cols, rows))
        u, s, vt = np.linalg.svd(a, full_matrices=False)
        keep = s > tol * s[0] if s.size and s[0] > 0 else np.zeros_like(s, dtype=bool)
        inv_s = np.zeros_like(s)
        inv_s[keep] = 1.0 / s[keep]
        return (vt.T * inv_s) @ u.T
    r, pivots = rref(a)
    k = len(pivots)
    if k == 0:
        return zeros((cols, rows), EXACT)
    c = a[:, pivots]
    f = r[:k]
    if gram is None:
        c_adj, f_adj = c.T, f.T
    else:
        c_adj = c.T @ gram
        f_adj = solve(gram, f.T)
    return f_adj @ inverse(f @ f_adj) @ inverse(c_adj @ c) @ c_adj


def orthogonal_projection(w: Subspace, gram=None) -> np.ndarray:
    """``B (B^T G B)^-1 B^T G``; the zero subspace gives the zero matrix."""
    m = w.ambient_dim
    if w.dim == 0:
        return zeros((m, m), w.backend)
    b = w.basis
    if gram is None:
        return b @ inverse(b.T @ b) @ b.T
    common_backend(b, gram)
    return b @ inverse(b.T @ gram @ b) @ b.T @ gram


def is_transversal(u0: Subspace, w: Subspace) -> bool:
    """``u0 (+) w`` equals the ambient space (direct sum)."""
    u0._check(w)
    m = u0.ambient_dim
    if u0.dim + w.dim != m:
        return False
    return rank(np.hstack([u0.basis, w.basis])) == m


def _require_transversal(u0: Subspace, w: Subspace) -> None:
    if not is_transversal(u0, w):
        raise NotTransversal(
            f"subspaces of dims {u0.dim} and {w.dim} do not form a direct sum of R^{u0.ambient_dim}"
        )


def oblique_projection_mp(u0: Subspace, w: Subspace, gram=None) -> np.ndarray:
    """Projection onto ``u0`` along ``w`` via ``P0 ((1 - Pw) P0)^+ (1 - Pw)``."""
    _require_transversal(u0, w)
    m = u0.ambient_dim
    ident = eye(m, u0.backend)
    p0 = orthogonal_projection(u0, gram)
    q = ident - orthogonal_projection(w, gram)
    return p0 @ moore_penrose(q @ p0, gram) @ q


def oblique_projection_direct(u0: Subspace, w: Subspace) -> np.ndarray:
    """Projection onto ``u0`` along ``w`` by solving ``v = u + w`` per basis vector."""
    _require_transversal(u0, w)
    m = u0.ambient_dim
    coeffs = solve(np.hstack([u0.basis, w.basis]), eye(m, u0.backend))
    return u0.basis @ coeffs[: u0.dim]


def graph_projection(t: np.ndarray, u0: Subspace) -> np.ndarray:
    """Orthogonal projection onto the graph ``{v + T v : v in u0^perp}``.

    ``t`` maps coordinates relative to the canonical basis of ``u0^perp``
    to coordinates relative to the canonical basis of ``u0``.  The block
    formula is assembled in the ``(u0^perp, u0)`` decomposition, where the
    Hilbert adjoint of ``t`` is ``G1^-1 t^T G0`` for the Gram matrices of the
    two coordinate bases, then conjugated back to ambient coordinates.
    """
    m = u0.ambient_dim
    b0 = u0.canonical
    b1 = u0.orthogonal_complement().canonical
    k0, k1 = b0.shape[1], b1.shape[1]
    t = np.asarray(t).reshape(k0, k1) if np.size(t) == k0 * k1 else np.asarray(t)
    if t.shape != (k0, k1):
        raise DimensionMismatch(f"T must be {k0}x{k1}, got {t.shape}")
    backend = common_backend(t, b0) if t.size else u0.backend
    g0 = b0.T @ b0
    g1 = b1.T @ b1
    t_adj = solve(g1, t.T @ g0) if k1 and k0 else zeros((k1, k0), backend)
    i0, i1 = eye(k0, backend), eye(k1, backend)
    inv_a = inverse(i1 + t_adj @ t) if k1 else zeros((0, 0), backend)
    inv_b = inverse(i0 + t @ t_adj) if k0 else zeros((0, 0), backend)
    block = np.block([
        [inv_a, t_adj @ inv_b],
        [t @ inv_a, t @ t_adj @ inv_b],
    ]) if k0 and k1 else (eye(m, backend) if k0 == 0 else zeros((m, m), backend))
    if not (k0 and k1):
        return block
    s = np.hstack([b1, b0])
    return s @ block @ inverse(s)


__all__ = [
    "ANGLE_TOL",
    "Subspace",
    "adjoint",
    "graph_projection",
    "inverse",
    "is_transversal",
    "moore_penrose",
    "null_space",
    "oblique_projection_direct",
    "oblique_projection_mp",
    "orthogonal_projection",
    "rank",
    "rref",
    "solve",
]
