"""Built-in example algebras with their known structural facts.

Circle points ``z = (cos t, sin t)`` are kept exact as rational pairs from
the tangent half-angle map ``u -> ((1 - u^2)/(1 + u^2), 2u/(1 + u^2))``;
a plain float ``t`` selects the float backend instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from .errors import BadParameter
from .grassmann import Flag, jump_indices
from .lie_core import (
    LieAlgebra,
    center,
    derived_algebra,
    is_jordan_holder_basis,
    is_subalgebra,
    validate_algebra,
)
from .linalg import Subspace
from .scalars import EXACT, FLOAT, parse_rational

CirclePoint = tuple[Fraction, Fraction]
Point = Union[float, CirclePoint]


def circle_point(u) -> CirclePoint:
    """Rational point on the unit circle; ``u = 0`` gives ``z = 1``."""
    u = parse_rational(u)
    d = 1 + u * u
    return ((1 - u * u) / d, 2 * u / d)


def nearest_circle_point(theta: float, max_denominator: int = 10**6) -> CirclePoint:
    """Rational circle point close to angle ``theta``."""
    theta = math.remainder(theta, 2 * math.pi)
    if abs(abs(theta) - math.pi) < 1e-12:
        return (Fraction(-1), Fraction(0))
    u = Fraction(math.tan(theta / 2)).limit_denominator(max_denominator)
    return circle_point(u)


def abelian(n: int) -> LieAlgebra:
    if not isinstance(n, int) or n < 1:
        raise BadParameter(f"abelian algebra needs n >= 1, got {n!r}")
    return validate_algebra(n, {}, name=f"abelian({n})")


def _threadlike_algebra(m: int) -> LieAlgebra:
    if not isinstance(m, int) or m < 3:
        raise BadParameter(f"threadlike algebra needs m >= 3, got {m!r}")
    table = {(m, j): {j - 1: 1} for j in range(2, m)}
    return validate_algebra(m, table, name=f"threadlike({m})")


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """An algebra with its default flag and the facts asserted about it.

    ``hz_derived`` maps a circle point to the expected ``[h_z, h_z]``;
    it is ``None`` when the ``h_z`` family is not defined for the entry.
    """

    name: str
    algebra: LieAlgebra
    flag: Flag
    center: Subspace
    derived: Subspace
    hz_derived: Callable[[CirclePoint], Subspace] | None = None
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def facts(self) -> list[tuple[str, bool]]:
        """Evaluate every asserted fact through the public operations."""
        alg = self.algebra
        out = [
            ("jordan_holder_flag", is_jordan_holder_basis(alg, self.flag.basis)),
            ("center", center(alg) == self.center),
            ("derived", derived_algebra(alg) == self.derived),
        ]
        if self.hz_derived is not None:
            m = alg.dim
            for u in (0, Fraction(1, 2), 1, -3):
                z = circle_point(u)
                h = hz_subalgebra(self, z)
                expected_jump = [m] if z[1] == 0 else [m - 1]
                out.append((f"hz_subalgebra[u={u}]", is_subalgebra(alg, h)))
                out.append((f"hz_jump[u={u}]", jump_indices(self.flag, h).as_list() == expected_jump))
                out.append((f"hz_derived[u={u}]", derived_algebra(alg, h) == self.hz_derived(z)))
        return out


def abelian_entry(n: int) -> CatalogEntry:
    alg = abelian(n)
    flag = Flag.standard(n)
    hz = (lambda z: Subspace.zero(n)) if n == 2 else None
    return CatalogEntry(alg.name, alg, flag, Subspace.full(n), Subspace.zero(n), hz, {"n": n})


def threadlike(m: int) -> CatalogEntry:
    """``[X_m, X_j] = X_{j-1}`` for ``j = 2..m-1``, all other brackets zero."""
    alg = _threadlike_algebra(m)
    flag = Flag.standard(m)

    def hz_derived(z: CirclePoint) -> Subspace:
        # s = 0 means h_z = F_{m-1}, which is abelian
        return Subspace.zero(m) if z[1] == 0 else flag.subspace(m - 3)

    return CatalogEntry(alg.name, alg, flag, flag.subspace(1), flag.subspace(m - 2),
                        hz_derived, {"m": m})


def heisenberg() -> CatalogEntry:
    entry = threadlike(3)
    return CatalogEntry("heisenberg", entry.algebra, entry.flag, entry.center,
                        entry.derived, entry.hz_derived, {})


def five_dim_example() -> CatalogEntry:
    """``[X5, X4] = X3, [X5, X3] = X2, [X4, X3] = X1``."""
    alg = validate_algebra(5, {(5, 4): {3: 1}, (5, 3): {2: 1}, (4, 3): {1: 1}}, name="five_dim")
    flag = Flag.standard(5)

    def hz_derived(z: CirclePoint) -> Subspace:
        c, s = z
        return Subspace.span(np.array([[c], [s], [0], [0], [0]], dtype=object), 5)

    return CatalogEntry("five_dim", alg, flag, flag.subspace(2), flag.subspace(3), hz_derived)


def _hz_hypothesis(entry: CatalogEntry) -> None:
    m = entry.dim
    if m < 2:
        raise BadParameter("h_z needs dim >= 2")
    derived = derived_algebra(entry.algebra)
    if derived.codim != 2 or derived != entry.flag.subspace(m - 2):
        raise BadParameter(f"{entry.name}: h_z needs [g,g] = F_(m-2) of codimension 2")


def hz_basis(entry: CatalogEntry, point: Point) -> np.ndarray:
    m = entry.dim
    if isinstance(point, tuple):
        c, s = (parse_rational(v) for v in point)
        if c * c + s * s != 1:
            raise BadParameter(f"({c}, {s}) is not on the unit circle")
        basis = entry.flag.basis.copy()
    else:
        theta = float(point)
        c, s = math.cos(theta), math.sin(theta)
        basis = entry.flag.basis.astype(float)
    cols = basis[:, : m - 2]
    last = c * basis[:, m - 2] + s * basis[:, m - 1]
    return np.column_stack([cols, last]) if m > 2 else last.reshape(m, 1)


def hz_subalgebra(entry: CatalogEntry, point: Point) -> Subspace:
    """``h_z = span(F_{m-2} ∪ {cos t X_{m-1} + sin t X_m})``."""
    _hz_hypothesis(entry)
    h = Subspace(hz_basis(entry, point), entry.dim)
    if not is_subalgebra(entry.algebra, h):
        raise BadParameter(f"{entry.name}: h_z is not a subalgebra")
    return h


class HzFamily:
    """``theta -> h_z`` on the float backend, with exact rational surrogates."""

    def __init__(self, entry: CatalogEntry):
        _hz_hypothesis(entry)
        self.entry = entry

    def __call__(self, theta: float) -> Subspace:
        return Subspace(hz_basis(self.entry, float(theta)), self.entry.dim, FLOAT)

    def exact(self, theta: float) -> Subspace:
        return Subspace(hz_basis(self.entry, nearest_circle_point(theta)), self.entry.dim, EXACT)


def constant_family(h: Subspace) -> Callable[[float], Subspace]:
    hf = Subspace(h.basis.astype(float), h.ambient_dim, FLOAT)
    return lambda theta: hf


CATALOG_NAMES = ("abelian", "heisenberg", "threadlike", "five_dim")


def get(name: str, dim: int | None = None) -> CatalogEntry:
    if name == "abelian":
        return abelian_entry(dim if dim is not None else 4)
    if name == "heisenberg":
        return heisenberg()
    if name == "threadlike":
        return threadlike(dim if dim is not None else 4)
    if name in ("five_dim", "five-dim", "five_dim_example"):
        return five_dim_example()
    raise BadParameter(f"unknown catalog entry {name!r}; choose from {', '.join(CATALOG_NAMES)}")


def default_entries() -> list[CatalogEntry]:
    """The algebras used throughout the property suites."""
    return [abelian_entry(4)] + [threadlike(m) for m in range(3, 7)] + [five_dim_example()]


__all__ = [
    "CATALOG_NAMES",
    "CatalogEntry",
    "HzFamily",
    "abelian",
    "abelian_entry",
    "circle_point",
    "constant_family",
    "default_entries",
    "five_dim_example",
    "get",
    "heisenberg",
    "hz_basis",
    "hz_subalgebra",
    "nearest_circle_point",
    "threadlike",
]
