"""Scalar backends.

Every array handled by the library is either *exact* (``dtype=object``
holding :class:`fractions.Fraction`) or *float* (``float64``).  The two are
never combined inside one computation.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable

import numpy as np

from .errors import BackendMismatch, BadParameter

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

# Relative rank tolerance (singular values / pivots below TAU * scale are zero).
TAU = 1e-10
# Default tolerance for float-backend membership and identity checks.
DEFAULT_TOL = 1e-9

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int/Fraction into a reduced Fraction.

    Floats are refused; use the float backend for those.
    """
    if isinstance(text, bool):
        raise BadParameter(f"not a rational: {text!r}")
    if isinstance(text, Rational):
        return Fraction(text)
    if isinstance(text, str):
        s = text.strip()
        if "." in s or "e" in s.lower():
            raise BadParameter(f"not a rational string: {text!r}")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise BadParameter(f"not a rational string: {text!r}") from exc
    raise BadParameter(f"not a rational: {text!r}")


def format_scalar(x):
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def exact_array(data) -> np.ndarray:
    a = np.asarray(data, dtype=object)
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        if isinstance(v, (float, np.floating)):
            raise BackendMismatch("float entry in exact array")
        out[idx] = parse_rational(int(v) if isinstance(v, np.integer) else v)
    return out


def exact_from_float(data) -> np.ndarray:
    """Lossless conversion: every binary float is a rational."""
    a = np.asarray(data)
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = Fraction(v) if isinstance(v, (float, np.floating)) else parse_rational(v)
    return out


def float_array(data) -> np.ndarray:
    a = np.asarray(data)
    if a.dtype == object:
        return np.array([float(v) for v in a.ravel()], dtype=float).reshape(a.shape)
    return a.astype(float)


def backend_of(a: np.ndarray) -> str:
    if a.dtype == object:
        return EXACT
    if a.dtype.kind == "f":
        return FLOAT
    raise BackendMismatch(f"unsupported dtype {a.dtype}; convert with exact_array or float_array")


def common_backend(*arrays: np.ndarray) -> str:
    kinds = {backend_of(a) for a in arrays}
    if len(kinds) != 1:
        raise BackendMismatch("exact and float operands mixed in one computation")
    return kinds.pop()


def to_backend(data, backend: str) -> np.ndarray:
    if backend == EXACT:
        return exact_array(data)
    if backend == FLOAT:
        return float_array(data)
    raise BadParameter(f"unknown backend {backend!r}")


def zeros(shape, backend: str) -> np.ndarray:
    if backend == EXACT:
        return np.full(shape, ZERO, dtype=object)
    return np.zeros(shape)


def eye(n: int, backend: str) -> np.ndarray:
    out = zeros((n, n), backend)
    for i in range(n):
        out[i, i] = ONE if backend == EXACT else 1.0
    return out


def is_zero(a, backend: str, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    if backend == EXACT:
        return all(v == 0 for v in a.ravel())
    return a.size == 0 or float(np.max(np.abs(a))) <= tol


def arrays_equal(a, b, backend: str, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    if backend == EXACT:
        return bool(np.all(a == b))
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
    return bool(np.all(np.abs(a - b) <= tol * scale))


def format_array(a: np.ndarray) -> list:
    return [format_scalar(v) for v in np.asarray(a).ravel()] if np.ndim(a) == 1 else [
        format_array(row) for row in a
    ]


def parse_vector_text(text: str) -> list[Fraction]:
    """``"1,-1/2,0"`` -> list of Fractions."""
    parts = [p for p in text.split(",")]
    if any(not p.strip() for p in parts):
        raise BadParameter(f"malformed vector {text!r}")
    return [parse_rational(p) for p in parts]


def scalar(x, backend: str):
    return parse_rational(x) if backend == EXACT else float(x)


def as_rationals(values: Iterable) -> list[Fraction]:
    return [parse_rational(v) for v in values]
