"""Scalar-field helpers shared by every module.

Exact rationals (:class:`fractions.Fraction`) are the default field.  Complex
doubles are used where ``q`` sits on the unit circle.  A handful of routines
fall back to sympy algebraic numbers when an exact power ``q**a`` is
irrational (e.g. ``a = 7/2``); those values are polynomials in a radical and
are compared with :func:`is_zero`, which expands them.

The determinant here is division-free so it works over any commutative ring
whose elements support ``+``, ``-`` and ``*``: Fractions, complex numbers,
sympy expressions, numpy arrays (elementwise) and truncated power series.
"""

from __future__ import annotations

import cmath
import math
import numbers
from fractions import Fraction
from typing import Any, Iterable, Sequence

import sympy

Scalar = Any

__all__ = [
    "Scalar",
    "TruncationError",
    "DomainError",
    "parse_scalar",
    "encode_scalar",
    "is_exact",
    "is_zero",
    "det",
    "vandermonde",
    "product",
    "qpow",
    "exp_scalar",
    "to_complex",
]


class TruncationError(ValueError):
    """A truncated object was asked for data beyond its truncation order."""


class DomainError(ValueError):
    """A parameter lies outside the domain of a formula (pole, root of unity, ...)."""


def parse_scalar(value) -> Scalar:
    """Decode a JSON scalar: ``"num/den"`` strings, ints, ``[re, im]`` pairs or floats."""
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, float):
        return value
    if isinstance(value, Fraction):
        return value
    raise TypeError(f"cannot parse scalar from {value!r}")


def encode_scalar(value: Scalar):
    """Inverse of :func:`parse_scalar`; exact values become ``"num/den"`` strings."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Fraction)):
        f = Fraction(value)
        return f"{f.numerator}/{f.denominator}"
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float):
        return value
    if isinstance(value, sympy.Basic):
        value = sympy.nsimplify(sympy.expand(value))
        if value.is_Rational:
            return f"{value.p}/{value.q}"
        return str(value)
    raise TypeError(f"cannot encode scalar {value!r}")


def is_exact(value: Scalar) -> bool:
    return isinstance(value, (int, Fraction, sympy.Basic)) and not isinstance(value, bool)


def is_zero(value: Scalar, tol: float = 0.0) -> bool:
    """Exact zero test for exact fields, ``abs(value) <= tol`` otherwise."""
    if isinstance(value, (int, Fraction)):
        return value == 0
    if isinstance(value, sympy.Basic):
        return sympy.expand(value) == 0
    return abs(value) <= tol


def _is_literal_zero(value) -> bool:
    # only skip entries that are unambiguously zero scalars
    return isinstance(value, (int, Fraction)) and value == 0


def det(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    """Division-free determinant by row expansion memoized on used-column sets.

    Cost is ``O(n 2^n)`` ring multiplications, fine for the ``n <= 12``
    matrices that appear in Jacobi-Trudi and coefficient determinants.
    """
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    states: dict[int, Scalar] = {0: Fraction(1)}
    for i in range(n):
        row = matrix[i]
        if len(row) != n:
            raise ValueError("matrix is not square")
        nxt: dict[int, Scalar] = {}
        for mask, val in states.items():
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                entry = row[j]
                if _is_literal_zero(entry):
                    continue
                # parity of inversions introduced by placing column j after the used ones
                higher = bin(mask >> (j + 1)).count("1")
                term = val * entry
                if higher % 2:
                    term = -term
                key = mask | bit
                if key in nxt:
                    nxt[key] = nxt[key] + term
                else:
                    nxt[key] = term
        states = nxt
        if not states:
            return Fraction(0)
    return states.get((1 << n) - 1, Fraction(0))


def product(values: Iterable[Scalar], start: Scalar = None) -> Scalar:
    result = Fraction(1) if start is None else start
    for v in values:
        result = result * v
    return result


def vandermonde(xs: Sequence[Scalar]) -> Scalar:
    """``prod_{i<j} (x_i - x_j)``; equals ``det(x_i^{n-j})``.  Empty product is 1."""
    result = Fraction(1)
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            result = result * (xs[i] - xs[j])
    return result


def qpow(q: Scalar, a: Scalar) -> Scalar:
    """Exact ``q**a`` when possible.

    Integer exponents stay in the field of ``q``.  Rational non-integer
    exponents of rational ``q`` go through sympy, which returns a Rational
    when the root is exact and an algebraic number otherwise.
    """
    if isinstance(a, numbers.Integral) or (isinstance(a, Fraction) and a.denominator == 1):
        k = int(a)
        if k < 0 and is_zero(q):
            raise DomainError("zero to a negative power")
        return q ** k
    if isinstance(q, (int, Fraction)) and isinstance(a, Fraction):
        val = sympy.Rational(q.numerator, q.denominator) ** sympy.Rational(a.numerator, a.denominator)
        if val.is_Rational:
            return Fraction(int(val.p), int(val.q))
        return val
    if isinstance(q, complex) or isinstance(a, (complex, float)):
        return complex(q) ** complex(a)
    return q ** a


def exp_scalar(value: Scalar) -> Scalar:
    """``exp`` that is exact at 0, defers to ``.exp()`` on series, else numeric."""
    if hasattr(value, "exp") and not isinstance(value, (numbers.Number, sympy.Basic)):
        return value.exp()
    if isinstance(value, (int, Fraction)) and value == 0:
        return Fraction(1)
    if isinstance(value, complex):
        return cmath.exp(value)
    if isinstance(value, sympy.Basic):
        return sympy.exp(value)
    return math.exp(float(value))


def to_complex(value: Scalar) -> complex:
    if isinstance(value, sympy.Basic):
        return complex(sympy.N(value, 30))
    return complex(value)
