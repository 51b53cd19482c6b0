"""Nilpotent Lie algebras given by structure constants, and their BCH group law.

Basis vectors are numbered from 1 in every user-facing place (bracket
tables, witnesses, jump sets); array positions are 0-based as usual.
"""
from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Iterable, Mapping

import numpy as np

from .errors import (
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
from .linalg import Subspace, ensure_backend, rank, solve
from .scalars import EXACT, FLOAT, ONE, ZERO, backend_of, parse_rational, zeros

DEFAULT_MAX_DIM = 16


def max_dim() -> int:
    """Dimension cap; ``NILPROJ_MAX_DIM`` overrides the default of 16."""
    raw = os.environ.get("NILPROJ_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError as exc:
        raise BadParameter(f"NILPROJ_MAX_DIM must be an integer, got {raw!r}") from exc
    if value < 1:
        raise BadParameter("NILPROJ_MAX_DIM must be positive")
    return value


class LieAlgebra:
    """Finite-dimensional nilpotent Lie algebra.

    ``structure[i, j, k]`` is the coefficient of ``X_{k+1}`` in
    ``[X_{i+1}, X_{j+1}]``.  Instances are built by :func:`validate_algebra`
    and are treated as immutable.
    """

    __slots__ = ("dim", "structure", "name", "basis_names", "nilpotency_class", "_float", "_nonzero")

    def __init__(self, structure: np.ndarray, name: str | None = None,
                 basis_names: list[str] | None = None, nilpotency_class: int = 1):
        self.dim = structure.shape[0]
        self.structure = structure
        self.name = name
        self.basis_names = basis_names or [f"X{i + 1}" for i in range(self.dim)]
        self.nilpotency_class = nilpotency_class
        self._float = structure.astype(float)
        # nonzero (i, j, k, c): exact brackets skip the zero constants
        self._nonzero = [(i, j, k, structure[i, j, k]) for i, j, k in zip(*np.nonzero(structure != 0))]

    def tensor(self, backend: str) -> np.ndarray:
        return self.structure if backend == EXACT else self._float

    def basis_vector(self, i: int, backend: str = EXACT) -> np.ndarray:
        """``X_i`` with 1-based ``i``."""
        if not 1 <= i <= self.dim:
            raise BadIndex(f"basis index {i} outside 1..{self.dim}")
        v = zeros(self.dim, backend)
        v[i - 1] = ONE if backend == EXACT else 1.0
        return v

    def vector(self, coords, backend: str | None = None) -> np.ndarray:
        v = ensure_backend(np.asarray(coords), backend)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"expected {self.dim} coordinates, got shape {v.shape}")
        return v

    def zero(self, backend: str = EXACT) -> np.ndarray:
        return zeros(self.dim, backend)

    @property
    def is_abelian(self) -> bool:
        return all(c == 0 for c in self.structure.ravel())

    def brackets(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        """Nonzero ``[X_i, X_j]`` for ``i > j`` (1-based), as sparse coordinates."""
        out = {}
        for i in range(self.dim):
            for j in range(i):
                coeffs = {k + 1: c for k, c in enumerate(self.structure[i, j]) if c != 0}
                if coeffs:
                    out[(i + 1, j + 1)] = coeffs
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and bool(np.all(self.structure == other.structure))

    def __hash__(self):
        return hash((self.dim, tuple(self.structure.ravel())))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<LieAlgebra{label} dim={self.dim} class={self.nilpotency_class}>"


# ---------------------------------------------------------------------------
# construction and validation


def _normalize_table(dim: int, table) -> list[tuple[int, int, dict[int, Fraction]]]:
    if isinstance(table, Mapping):
        items = [(i, j, out) for (i, j), out in table.items()]
    else:
        items = []
        for entry in table:
            if isinstance(entry, Mapping):
                items.append((entry["i"], entry["j"], entry["out"]))
            else:
                i, j, out = entry
                items.append((i, j, out))
    seen = set()
    result = []
    for i, j, out in items:
        i, j = int(i), int(j)
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise BadIndex(f"bracket entry [{i},{j}] outside 1..{dim}")
        if i <= j:
            raise BadIndex(f"bracket entry [{i},{j}]: only i > j entries are accepted")
        if (i, j) in seen:
            raise DuplicateEntry(f"bracket [{i},{j}] given more than once")
        seen.add((i, j))
        if isinstance(out, Mapping):
            coeffs = {}
            for k, c in out.items():
                k = int(k)
                if not 1 <= k <= dim:
                    raise BadIndex(f"output index {k} of [{i},{j}] outside 1..{dim}")
                coeffs[k] = parse_rational(c)
        else:
            vec = [parse_rational(c) for c in out]
            if len(vec) != dim:
                raise DimensionMismatch(f"[{i},{j}] has {len(vec)} coordinates, expected {dim}")
            coeffs = {k + 1: c for k, c in enumerate(vec) if c != 0}
        result.append((i, j, coeffs))
    return result


def jacobi_defect(structure: np.ndarray) -> np.ndarray:
    """``J[i,j,k] = [[Xi,Xj],Xk] + [[Xj,Xk],Xi] + [[Xk,Xi],Xj]`` for all triples."""
    t = np.tensordot(structure, structure, axes=(2, 0))
    return t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)


def _ad_basis(structure: np.ndarray) -> list[np.ndarray]:
    return [structure[i].T for i in range(structure.shape[0])]


def lower_central_dims(structure: np.ndarray) -> list[int]:
    """Dimensions of g = g^1 ⊇ g^2 ⊇ ... until zero or stagnation."""
    m = structure.shape[0]
    ads = _ad_basis(structure)
    current = Subspace.full(m)
    dims = [m]
    while current.dim:
        images = np.hstack([ad @ current.basis for ad in ads])
        nxt = Subspace.span(images, m)
        if nxt.dim == current.dim:
            break
        dims.append(nxt.dim)
        current = nxt
    return dims


def validate_algebra(dim: int, table=(), name: str | None = None,
                     basis_names: list[str] | None = None, cap: int | None = None) -> LieAlgebra:
    """Build a nilpotent Lie algebra from bracket data.

    ``table`` holds only the ``i > j`` brackets, either as a mapping
    ``{(i, j): out}`` or a sequence of ``{"i", "j", "out"}`` records; ``out``
    is a sparse ``{k: coeff}`` mapping or a dense coordinate list.
    Antisymmetry is completed here.  Raises :class:`JacobiViolation` with
    the first failing basis triple, or :class:`NotNilpotent` with a basis
    vector whose adjoint power does not vanish when one exists.
    """
    if not isinstance(dim, int) or dim < 1:
        raise BadParameter(f"dimension must be a positive integer, got {dim!r}")
    limit = max_dim() if cap is None else cap
    if dim > limit:
        raise DimensionCapExceeded(f"dimension {dim} exceeds cap {limit} (set NILPROJ_MAX_DIM)")
    if basis_names is not None and len(basis_names) != dim:
        raise DimensionMismatch(f"{len(basis_names)} basis names for dimension {dim}")
    structure = zeros((dim, dim, dim), EXACT)
    for i, j, coeffs in _normalize_table(dim, table):
        for k, c in coeffs.items():
            structure[i - 1, j - 1, k - 1] = c
            structure[j - 1, i - 1, k - 1] = -c

    defect = jacobi_defect(structure)
    for i, j, k in combinations(range(dim), 3):
        if any(v != 0 for v in defect[i, j, k]):
            raise JacobiViolation((i + 1, j + 1, k + 1), defect[i, j, k])

    dims = lower_central_dims(structure)
    if dims[-1] != 0 and dim > 0:
        ads = _ad_basis(structure)
        for i, ad in enumerate(ads):
            power = np.linalg.matrix_power(ad, dim)
            if any(v != 0 for v in power.ravel()):
                raise NotNilpotent(
                    f"(ad X{i + 1})^{dim} != 0", witness=i + 1, power=power)
        raise NotNilpotent(f"lower central series stabilizes at dimension {dims[-1]}")
    return LieAlgebra(structure, name=name, basis_names=basis_names,
                      nilpotency_class=max(1, len(dims) - 1))


# ---------------------------------------------------------------------------
# bracket and adjoint


def _operands(alg: LieAlgebra, *vectors) -> str:
    for v in vectors:
        if np.shape(v) != (alg.dim,):
            raise DimensionMismatch(f"expected vectors of length {alg.dim}, got {np.shape(v)}")
    kinds = {backend_of(np.asarray(v)) for v in vectors}
    if len(kinds) > 1:
        raise BackendMismatch("exact and float operands mixed in one computation")
    return kinds.pop()


def bracket(alg: LieAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    backend = _operands(alg, x, y)
    if backend == EXACT:
        out = zeros(alg.dim, EXACT)
        for i, j, k, c in alg._nonzero:
            if x[i] and y[j]:
                out[k] += c * x[i] * y[j]
        return out
    return np.tensordot(np.tensordot(x, alg.tensor(backend), axes=(0, 0)), y, axes=(0, 0))


def ad_matrix(alg: LieAlgebra, x: np.ndarray) -> np.ndarray:
    """Matrix of ``[x, .]``; column ``j`` is ``[x, X_{j+1}]``."""
    backend = _operands(alg, x)
    if backend == EXACT:
        out = zeros((alg.dim, alg.dim), EXACT)
        for i, j, k, c in alg._nonzero:
            if x[i]:
                out[k, j] += c * x[i]
        return out
    return np.tensordot(x, alg.tensor(backend), axes=(0, 0)).T


def center(alg: LieAlgebra) -> Subspace:
    from .linalg import null_space

    stacked = np.vstack(_ad_basis(alg.structure))
    return Subspace(null_space(stacked), alg.dim)


def derived_algebra(alg: LieAlgebra, w: Subspace | None = None) -> Subspace:
    """``[w, w]``; the whole algebra when ``w`` is omitted."""
    m = alg.dim
    if w is None:
        w = Subspace.full(m)
    if w.ambient_dim != m:
        raise DimensionMismatch("subspace not in this algebra")
    cols = [bracket(alg, w.basis[:, a], w.basis[:, b])
            for a, b in combinations(range(w.dim), 2)]
    if not cols:
        return Subspace.zero(m, w.backend)
    return Subspace.span(np.column_stack(cols), m)


def lower_central_series(alg: LieAlgebra) -> list[Subspace]:
    m = alg.dim
    series = [Subspace.full(m)]
    ads = _ad_basis(alg.structure)
    while series[-1].dim:
        series.append(Subspace.span(np.hstack([ad @ series[-1].basis for ad in ads]), m))
    return series


def is_subalgebra(alg: LieAlgebra, w: Subspace, tol: float = 1e-9) -> bool:
    if w.ambient_dim != alg.dim:
        raise DimensionMismatch(f"subspace of R^{w.ambient_dim} in algebra of dim {alg.dim}")
    for a, b in combinations(range(w.dim), 2):
        if not w.contains(bracket(alg, w.basis[:, a], w.basis[:, b]), tol):
            return False
    return True


def is_jordan_holder_basis(alg: LieAlgebra, basis: np.ndarray, tol: float = 1e-9) -> bool:
    """``[g, g_k] ⊆ g_{k-1}`` for the partial spans ``g_k`` of the columns."""
    basis = np.asarray(basis)
    m = alg.dim
    if basis.shape != (m, m):
        raise DimensionMismatch(f"expected an {m}x{m} basis matrix, got {basis.shape}")
    backend = backend_of(basis)
    if rank(basis) < m:
        raise SingularBasis("basis vectors are linearly dependent")
    c = alg.tensor(backend)
    for k in range(m):
        # columns: [X_i, b_k] for every defining basis vector X_i
        if backend == EXACT:
            images = -ad_matrix(alg, basis[:, k])
        else:
            images = np.tensordot(c, basis[:, k], axes=(1, 0)).T
        coords = solve(basis, images)
        tail = coords[k:]
        if backend == EXACT:
            if any(v != 0 for v in tail.ravel()):
                return False
        elif tail.size and float(np.max(np.abs(tail))) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Baker-Campbell-Hausdorff


def _compositions(n: int):
    """All tuples ``(p1, q1, ..., pk, qk)`` with ``pi + qi > 0`` summing to ``n``."""
    if n == 0:
        yield ()
        return
    for size in range(1, n + 1):
        for p in range(size + 1):
            for rest in _compositions(n - size):
                yield (p, size - p) + rest


def _word_of(tup) -> tuple[int, ...]:
    """Letter string of ``C_{p1,q1,...}``: 0 stands for X, 1 for Y.

    Both cases of the defining formula read as the concatenation
    ``X^p1 Y^q1 ... X^pk Y^qk`` evaluated right-nested, the last letter
    being the argument of the innermost ``ad``.
    """
    word: list[int] = []
    for p, q in zip(tup[::2], tup[1::2]):
        word += [0] * p + [1] * q
    return tuple(word)


@lru_cache(maxsize=None)
def bch_word_coefficients(n: int) -> dict[tuple[int, ...], Fraction]:
    """Coefficient of each right-nested word in ``C_n``, by enumerating tuples.

    Tuples are grouped by their trailing blocks so each prefix block is
    enumerated once per remaining length; the result is the same as summing
    ``(-1)^(k-1) / (k n prod(pi! qi!))`` over every tuple individually.
    """
    if n < 1:
        raise BadParameter("BCH degree must be >= 1")
    # tails[r] maps (word, k) -> sum of prod 1/(p!q!) over decompositions of a
    # length-r suffix into k blocks.
    tails: list[dict[tuple[tuple[int, ...], int], Fraction]] = [{((), 0): ONE}]
    for r in range(1, n + 1):
        acc: dict[tuple[tuple[int, ...], int], Fraction] = {}
        for size in range(1, r + 1):
            for p in range(size + 1):
                q = size - p
                head = (0,) * p + (1,) * q
                weight = Fraction(1, factorial(p) * factorial(q))
                for (word, k), val in tails[r - size].items():
                    key = (head + word, k + 1)
                    acc[key] = acc.get(key, ZERO) + weight * val
        tails.append(acc)
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for (word, k), val in tails[n].items():
        if n >= 2 and word[-1] == word[-2]:
            continue  # [a, a] = 0 innermost
        c = Fraction((-1) ** (k - 1), k * n) * val
        coeffs[word] = coeffs.get(word, ZERO) + c
    return {w: c for w, c in coeffs.items() if c != 0}


def bch_word_coefficients_naive(n: int) -> dict[tuple[int, ...], Fraction]:
    """Tuple-by-tuple enumeration; used as a cross-check for small ``n``."""
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for tup in _compositions(n):
        k = len(tup) // 2
        denom = k * n
        for v in tup:
            denom *= factorial(v)
        word = _word_of(tup)
        coeffs[word] = coeffs.get(word, ZERO) + Fraction((-1) ** (k - 1), denom)
    return {w: c for w, c in coeffs.items()
            if c != 0 and not (n >= 2 and w[-1] == w[-2])}


def _truncation_degree(alg: LieAlgebra) -> int:
    # C_n lies in the n-th term of the lower central series; it also vanishes
    # for n >= dim once n >= 2.
    return max(1, min(alg.dim - 1, alg.nilpotency_class))


def _evaluate_words(words: Iterable[tuple[int, ...]], x, y, ad_x, ad_y, memo: dict) -> None:
    """Fill ``memo[word]`` with the right-nested value of every word.

    Suffixes are shared between words, so each distinct suffix costs one
    matrix-vector product.
    """
    letters = (x, y)
    if backend_of(x) == EXACT:
        # ad matrices of nilpotent algebras are mostly zero
        sparse = [[(k, j, a[k, j]) for k, j in zip(*np.nonzero(a != 0))] for a in (ad_x, ad_y)]

        def apply(letter, v):
            out = zeros(len(v), EXACT)
            for k, j, a in sparse[letter]:
                if v[j]:
                    out[k] += a * v[j]
            return out
    else:
        def apply(letter, v):
            return (ad_x, ad_y)[letter] @ v

    def value(word):
        v = memo.get(word)
        if v is None:
            v = letters[word[0]] if len(word) == 1 else apply(word[0], value(word[1:]))
            memo[word] = v
        return v

    for word in words:
        value(word)


def bch_term(alg: LieAlgebra, n: int, x: np.ndarray, y: np.ndarray, truncate: bool = True) -> np.ndarray:
    """Homogeneous BCH component ``C_n(x, y)``.

    With ``truncate=True`` degrees beyond the vanishing bound return zero
    immediately; ``truncate=False`` always evaluates the full word sum.
    """
    backend = _operands(alg, x, y)
    if not isinstance(n, int) or n < 1:
        raise BadParameter(f"BCH degree must be a positive integer, got {n!r}")
    if truncate and n > _truncation_degree(alg):
        return zeros(alg.dim, backend)
    coeffs = bch_word_coefficients(n)
    memo: dict = {}
    _evaluate_words(coeffs, x, y, ad_matrix(alg, x), ad_matrix(alg, y), memo)
    return _combine(coeffs, memo, alg.dim, backend)


def _combine(coeffs, memo, dim, backend) -> np.ndarray:
    total = zeros(dim, backend)
    for word, c in coeffs.items():
        total = total + (c if backend == EXACT else float(c)) * memo[word]
    return total


def bch_multiply(alg: LieAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Group product ``x . y = sum_n C_n(x, y)``, truncated at the vanishing degree."""
    backend = _operands(alg, x, y)
    top = _truncation_degree(alg)
    total = x + y
    if top < 2:
        return total
    ad_x, ad_y = ad_matrix(alg, x), ad_matrix(alg, y)
    memo: dict = {}
    for n in range(2, top + 1):
        coeffs = bch_word_coefficients(n)
        _evaluate_words(coeffs, x, y, ad_x, ad_y, memo)
        total = total + _combine(coeffs, memo, alg.dim, backend)
    return total


def bch_product(alg: LieAlgebra, *factors: np.ndarray) -> np.ndarray:
    """Left-to-right product of one or more factors."""
    if not factors:
        raise BadParameter("bch_product needs at least one factor")
    out = factors[0]
    for f in factors[1:]:
        out = bch_multiply(alg, out, f)
    return out


def bch_inverse(x: np.ndarray) -> np.ndarray:
    return -x


def derived_bracket_probe(alg: LieAlgebra, x: np.ndarray, y: np.ndarray, h: float) -> np.ndarray:
    """Central-difference estimate of the mixed partial of ``(tx).(sy).(-tx)`` at 0."""
    backend = _operands(alg, x, y)
    if backend != FLOAT:
        raise BackendMismatch("derived_bracket_probe runs on the float backend")
    if not h > 0:
        raise BadParameter("step h must be positive")

    def f(t, s):
        return bch_product(alg, t * x, s * y, -t * x)

    return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h)


__all__ = [
    "DEFAULT_MAX_DIM",
    "LieAlgebra",
    "ad_matrix",
    "bch_inverse",
    "bch_multiply",
    "bch_product",
    "bch_term",
    "bch_word_coefficients",
    "bch_word_coefficients_naive",
    "bracket",
    "center",
    "derived_algebra",
    "derived_bracket_probe",
    "is_jordan_holder_basis",
    "is_subalgebra",
    "jacobi_defect",
    "lower_central_series",
    "max_dim",
    "validate_algebra",
]
