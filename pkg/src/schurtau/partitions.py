"""Integer partitions and the scalar statistics attached to them.

A :class:`Partition` is an immutable tuple of positive parts in
non-increasing order; trailing zeros are stripped on construction so
``Partition((3, 3, 1, 0)) == Partition((3, 3, 1))``.  Boxes use 1-based
``(row, column)`` coordinates, so the content of box ``(i, j)`` is ``j - i``.
"""

from __future__ import annotations

from fractions import Fraction
from math import prod
from typing import Callable, Iterator, NamedTuple, Sequence

from .scalars import Scalar, qpow

__all__ = [
    "Partition",
    "FrobeniusCoords",
    "conjugate",
    "hook_lengths",
    "hook_product",
    "hook_polynomial",
    "n_stat",
    "rising_factorial",
    "pochhammer",
    "q_pochhammer_m",
    "q_pochhammer",
    "to_h",
    "from_h",
    "frobenius",
    "from_frobenius",
    "enumerate_partitions",
    "partitions_of",
    "content_product",
    "LengthError",
]


class LengthError(ValueError):
    """A partition has more parts than the ambient size allows."""


class Partition(tuple):
    """Non-increasing tuple of positive integers."""

    def __new__(cls, parts: Sequence[int] = ()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be non-increasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts must be non-negative: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """1-based part accessor; parts beyond the length are 0."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def conjugate(self) -> "Partition":
        if not self:
            return self
        return Partition([sum(1 for p in self if p > j) for j in range(self[0])])

    def boxes(self) -> Iterator[tuple[int, int]]:
        for i, p in enumerate(self, start=1):
            for j in range(1, p + 1):
                yield i, j

    def corners(self) -> list["Partition"]:
        """Partitions obtained by removing one corner box."""
        out = []
        for i in range(len(self)):
            nxt = self[i + 1] if i + 1 < len(self) else 0
            if self[i] > nxt:
                parts = list(self)
                parts[i] -= 1
                out.append(Partition(parts))
        return out

    def to_json(self) -> list[int]:
        return list(self)

    @classmethod
    def from_json(cls, data) -> "Partition":
        return cls(data)

    def __repr__(self) -> str:
        return f"Partition({tuple(self)})"


ZERO = Partition()


class FrobeniusCoords(NamedTuple):
    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def to_json(self) -> dict:
        return {"alpha": list(self.alpha), "beta": list(self.beta)}

    @classmethod
    def from_json(cls, data) -> "FrobeniusCoords":
        return cls(tuple(data["alpha"]), tuple(data["beta"]))


def conjugate(lam: Partition) -> Partition:
    return Partition(lam).conjugate()


def hook_lengths(lam: Partition) -> list[int]:
    lam = Partition(lam)
    conj = lam.conjugate()
    return [lam[i - 1] - j + conj[j - 1] - i + 1 for i, j in lam.boxes()]


def hook_product(lam: Partition) -> int:
    return prod(hook_lengths(lam))


def hook_polynomial(lam: Partition, q: Scalar) -> Scalar:
    result = Fraction(1)
    for h in hook_lengths(lam):
        factor = 1 - q ** h
        if factor == 0:
            return factor
        result = result * factor
    return result


def n_stat(lam: Partition) -> int:
    return sum(i * p for i, p in enumerate(lam))


def pochhammer(a: Scalar, m: int) -> Scalar:
    """Rising factorial ``(a)_m = a (a+1) ... (a+m-1)``; ``(a)_0 = 1``."""
    if m < 0:
        raise ValueError("negative Pochhammer index")
    result = Fraction(1)
    for k in range(m):
        result = result * (a + k)
    return result


def rising_factorial(a: Scalar, lam: Partition) -> Scalar:
    """Generalized Pochhammer ``(a)_lam = prod_i (a - i + 1)_{lam_i}``."""
    result = Fraction(1)
    for i, p in enumerate(lam, start=1):
        result = result * pochhammer(a - i + 1, p)
        if result == 0:
            break
    return result


def q_pochhammer_m(u: Scalar, q: Scalar, m: int) -> Scalar:
    """``(u; q)_m = (1 - u)(1 - u q) ... (1 - u q^{m-1})``."""
    if m < 0:
        raise ValueError("negative q-Pochhammer index")
    result = Fraction(1)
    qk = Fraction(1)
    for _ in range(m):
        result = result * (1 - u * qk)
        qk = qk * q
    return result


def q_pochhammer(a: Scalar, q: Scalar, lam: Partition) -> Scalar:
    """``(q^a; q)_lam = prod_i (q^{a-i+1}; q)_{lam_i}``.

    ``q^a`` is computed with :func:`~schurtau.scalars.qpow`, which stays exact
    for integer ``a`` and promotes to an algebraic number otherwise.
    """
    qa = qpow(q, a)
    result = Fraction(1)
    for i, p in enumerate(lam, start=1):
        result = result * q_pochhammer_m(qa * qpow(q, 1 - i), q, p)
    return result


def to_h(lam: Partition, n: int) -> tuple[int, ...]:
    lam = Partition(lam)
    if len(lam) > n:
        raise LengthError(f"length {len(lam)} exceeds n={n}")
    return tuple(lam.part(i) - i + n for i in range(1, n + 1))


def from_h(h: Sequence[int]) -> Partition:
    n = len(h)
    for a, b in zip(h, h[1:]):
        if a <= b:
            raise ValueError(f"h must be strictly decreasing: {tuple(h)}")
    if n and h[-1] < 0:
        raise ValueError("h entries must be non-negative")
    return Partition([h[i - 1] + i - n for i in range(1, n + 1)])


def frobenius(lam: Partition) -> FrobeniusCoords:
    lam = Partition(lam)
    conj = lam.conjugate()
    k = sum(1 for i, p in enumerate(lam, start=1) if p >= i)
    return FrobeniusCoords(
        tuple(lam[i] - i - 1 for i in range(k)),
        tuple(conj[i] - i - 1 for i in range(k)),
    )


def from_frobenius(coords: FrobeniusCoords | tuple) -> Partition:
    alpha, beta = tuple(coords[0]), tuple(coords[1])
    k = len(alpha)
    if len(beta) != k:
        raise ValueError("alpha and beta must have the same length")
    for seq in (alpha, beta):
        if any(a <= b for a, b in zip(seq, seq[1:])) or (seq and seq[-1] < 0):
            raise ValueError("Frobenius coordinates must be strictly decreasing and non-negative")
    if k == 0:
        return ZERO
    rows = [alpha[i] + i + 1 for i in range(k)]
    # below the Durfee square only the first k columns reach; column j has length beta_j + j
    cols = [beta[j] + j + 1 for j in range(k)]
    for r in range(k + 1, cols[0] + 1):
        rows.append(sum(1 for c in cols if c >= r))
    try:
        lam = Partition(rows)
    except ValueError as exc:
        raise ValueError("inconsistent Frobenius coordinates") from exc
    if frobenius(lam) != FrobeniusCoords(alpha, beta):
        raise ValueError("inconsistent Frobenius coordinates")
    return lam


def partitions_of(d: int, max_length: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of ``d`` with at most ``max_length`` parts, lexicographically descending."""
    if max_part is None:
        max_part = d

    def rec(remaining: int, bound: int, slots: int, prefix: list[int]):
        if remaining == 0:
            yield Partition(prefix)
            return
        if slots == 0:
            return
        for first in range(min(bound, remaining), 0, -1):
            yield from rec(remaining - first, first, slots - 1, prefix + [first])

    yield from rec(d, max_part, max_length, [])


def enumerate_partitions(max_weight: int, max_length: int) -> Iterator[Partition]:
    """Every partition with ``|lam| <= max_weight`` and ``l(lam) <= max_length``.

    Order: weight ascending, then lexicographically descending parts.  Reports
    rely on this order being stable.
    """
    if max_weight < 0 or max_length < 0:
        raise ValueError("bounds must be non-negative")
    for d in range(max_weight + 1):
        yield from partitions_of(d, max_length)


def content_product(r: Callable[[int], Scalar], x: int, lam: Partition) -> Scalar:
    """``r_lam(x) = prod over boxes (i, j) of r(x + j - i)``; 1 for the empty partition."""
    result = Fraction(1)
    for i, j in Partition(lam).boxes():
        factor = r(x + j - i)
        if factor == 0:
            return factor * result
        result = result * factor
    return result
