"""Bi-moment tables ``g_km`` and the ways to build them.

Sources: closed Gaussian form, 1-D axial quadrature, 2-D polar quadrature,
discrete pair-weight sums, or a caller-supplied table (taken verbatim).

For the Gaussian the factor ``pi`` is kept symbolic: ``pi_factor=True``
means every entry carries one hidden factor of ``pi``, so determinants of
size ``n`` pick up ``pi**n`` and coefficient ratios stay rational.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import integrate

from .scalars import Scalar, encode_scalar, exp_scalar, is_exact, is_zero, parse_scalar
from .series import GradedSeries

__all__ = [
    "MomentTable",
    "PiScalar",
    "XiSequence",
    "QuadratureSpec",
    "QuadratureError",
    "NonConvergenceWarning",
    "PairWeight",
    "gaussian_moments",
    "axial_moments",
    "general_moments",
    "table_moments",
    "xi_from_diagonal",
    "diagonal_from_xi",
    "xi_from_r",
    "deform_moments",
    "discrete_moments",
    "finite_pair_weight",
    "geometric_pair_weight",
    "geometric_moments_closed",
]


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not meet its tolerance or produced a non-finite value."""


class NonConvergenceWarning(UserWarning):
    """A truncated lattice sum still changes by more than the declared tolerance."""


@dataclass(frozen=True)
class PiScalar:
    """``coeff * pi**power`` with an exact ``coeff``."""

    coeff: Scalar
    power: int

    def __float__(self) -> float:
        return float(self.coeff) * math.pi ** self.power

    def __complex__(self) -> complex:
        return complex(self.coeff) * math.pi ** self.power

    def ratio(self, other: "PiScalar") -> Scalar:
        if self.power != other.power:
            raise ValueError("ratio of PiScalars with different pi powers is not rational")
        return self.coeff / other.coeff


def _is_number(x) -> bool:
    return not isinstance(x, GradedSeries)


@dataclass(frozen=True)
class MomentTable:
    entries: tuple
    diagonal: bool = False
    pi_factor: bool = False
    source: str = "table"

    def __init__(self, entries, diagonal: bool = False, pi_factor: bool = False, source: str = "table"):
        rows = tuple(tuple(r) for r in entries)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("moment table must be a non-empty square matrix")
        for r in rows:
            for v in r:
                if _is_number(v) and not is_exact(v) and not cmath.isfinite(complex(v)):
                    raise ValueError("moment table entries must be finite")
        if diagonal:
            for k, r in enumerate(rows):
                for m, v in enumerate(r):
                    if k != m and not (_is_number(v) and is_zero(v)):
                        raise ValueError("diagonal table has a nonzero off-diagonal entry")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "diagonal", bool(diagonal))
        object.__setattr__(self, "pi_factor", bool(pi_factor))
        object.__setattr__(self, "source", source)

    @property
    def K(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, km) -> Scalar:
        k, m = km
        if not (0 <= k <= self.K and 0 <= m <= self.K):
            raise IndexError(f"moment g_{k},{m} outside table of size K={self.K}")
        return self.entries[k][m]

    def value(self, k: int, m: int) -> Scalar:
        """Entry with the pi unit reified (float) when present."""
        v = self[k, m]
        return v * math.pi if self.pi_factor else v

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "diagonal": self.diagonal,
            "pi_factor": self.pi_factor,
            "entries": [[encode_scalar(v) for v in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MomentTable":
        try:
            entries = [[parse_scalar(v) for v in r] for r in data["entries"]]
            table = cls(entries, diagonal=bool(data.get("diagonal", False)),
                        pi_factor=bool(data.get("pi_factor", False)), source="table")
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed moment table: {exc}") from exc
        if "K" in data and int(data["K"]) != table.K:
            raise ValueError("declared K does not match the entries")
        return table


def table_moments(entries, diagonal: bool = False) -> MomentTable:
    """Caller-supplied moments, accepted without consistency checks."""
    return MomentTable(entries, diagonal=diagonal, source="table")


def gaussian_moments(K: int) -> MomentTable:
    if K < 0:
        raise ValueError("K must be non-negative")
    entries = [[Fraction(factorial(m)) if k == m else Fraction(0) for m in range(K + 1)] for k in range(K + 1)]
    return MomentTable(entries, diagonal=True, pi_factor=True, source="gaussian")


@dataclass(frozen=True)
class QuadratureSpec:
    epsrel: float = 1e-10
    epsabs: float = 0.0
    limit: int = 200
    angular_start: int = 32
    angular_max: int = 1 << 14


def _quad(fn, a, b, spec: QuadratureSpec, epsabs: float | None = None) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _err = integrate.quad(
                fn, a, b, epsrel=spec.epsrel, epsabs=spec.epsabs if epsabs is None else epsabs, limit=spec.limit
            )
        except (integrate.IntegrationWarning, OverflowError, ZeroDivisionError) as exc:
            raise QuadratureError(str(exc)) from exc
    if not math.isfinite(val):
        raise QuadratureError("quadrature produced a non-finite value")
    return val


def axial_moments(f: Callable[[float], float], K: int, quad: QuadratureSpec = QuadratureSpec()) -> MomentTable:
    """``g_mm = pi * int_0^inf x^m exp(f(x)) dx``; the ``pi`` stays symbolic."""
    def weight(x, m):
        with np.errstate(over="raise"):
            try:
                return x ** m * math.exp(f(x))
            except OverflowError:
                return math.inf

    # quad can "succeed" on a non-decaying weight; probe the tail first
    far, near = weight(1e4, K), weight(1e2, K)
    if not math.isfinite(far) or (far > 0 and far >= near):
        raise QuadratureError("weight does not decay at infinity")
    diag = [_quad(lambda x, m=m: weight(x, m), 0.0, math.inf, quad) for m in range(K + 1)]
    entries = [[diag[k] if k == m else 0.0 for m in range(K + 1)] for k in range(K + 1)]
    return MomentTable(entries, diagonal=True, pi_factor=True, source="axial")


def _as_vector_fn(V):
    def call(z: np.ndarray) -> np.ndarray:
        try:
            out = np.asarray(V(z), dtype=float)
            if out.shape == z.shape:
                return out
        except Exception:
            pass
        return np.array([float(V(complex(zz))) for zz in z])

    return call


def general_moments(V: Callable, K: int, quad2d: QuadratureSpec = QuadratureSpec()) -> MomentTable:
    """``g_km = int z^k zbar^m exp(V(z)) d^2z`` in polar coordinates.

    Angle: periodic trapezoid (spectrally accurate), point count doubled
    until the needed Fourier modes settle.  Radius: adaptive quadrature on
    ``[0, inf)`` per entry.
    """
    Vv = _as_vector_fn(V)

    def modes(r: float, N: int) -> np.ndarray:
        theta = 2 * np.pi * np.arange(N) / N
        vals = np.exp(Vv(r * np.exp(1j * theta)))
        # c_d = (1/N) sum_j vals_j e^{i d theta_j}, d = k - m in [-K, K]
        spec = np.fft.ifft(vals)
        return np.array([spec[d % N] for d in range(-K, K + 1)]) * 2 * np.pi

    N = quad2d.angular_start
    probes = (0.5, 1.0, 2.0, 4.0)
    while True:
        if N > quad2d.angular_max:
            raise QuadratureError("angular trapezoid did not converge")
        a = np.array([modes(r, N) for r in probes])
        b = np.array([modes(r, 2 * N) for r in probes])
        scale = np.max(np.abs(b)) or 1.0
        if np.max(np.abs(a - b)) <= 1e-14 * scale:
            break
        N *= 2

    @lru_cache(maxsize=None)
    def angular(r: float) -> tuple:
        return tuple(modes(r, N))

    def integrand(r, k, m, part):
        c = angular(float(r))[k - m + K]
        val = r ** (k + m + 1) * c
        return val.real if part == 0 else val.imag

    entries = [[0.0] * (K + 1) for _ in range(K + 1)]
    for k in range(K + 1):
        entries[k][k] = complex(_quad(lambda r: integrand(r, k, k, 0), 0.0, math.inf, quad2d), 0.0)
    for k in range(K + 1):
        for m in range(K + 1):
            if k == m:
                continue
            floor = 1e-12 * math.sqrt(abs(entries[k][k]) * abs(entries[m][m]))
            re = _quad(lambda r: integrand(r, k, m, 0), 0.0, math.inf, quad2d, epsabs=floor)
            im = _quad(lambda r: integrand(r, k, m, 1), 0.0, math.inf, quad2d, epsabs=floor)
            entries[k][m] = complex(re, im)
    if all(abs(entries[k][m].imag) <= 1e-12 * abs(entries[k][k]) for k in range(K + 1) for m in range(K + 1)):
        entries = [[v.real for v in row] for row in entries]
    return MomentTable(entries, diagonal=False, pi_factor=False, source="general")


# -- xi parametrization ---------------------------------------------------------

@dataclass(frozen=True)
class XiSequence:
    """Ratios ``a_m = exp(xi_m - xi_0)``; exact when the field is rational."""

    ratios: tuple

    def __init__(self, ratios: Sequence[Scalar]):
        ratios = tuple(ratios)
        if not ratios:
            raise ValueError("empty xi sequence")
        object.__setattr__(self, "ratios", ratios)

    @property
    def K(self) -> int:
        return len(self.ratios) - 1

    def a(self, m: int) -> Scalar:
        if not 0 <= m <= self.K:
            raise IndexError(f"xi_{m} outside sequence of length {self.K + 1}")
        return self.ratios[m]

    def xi(self, m: int) -> float:
        """``xi_m - xi_0`` as a number (log of the ratio)."""
        return cmath.log(complex(self.a(m))).real if not isinstance(self.a(m), complex) else cmath.log(self.a(m))

    def r(self, k: int) -> Scalar:
        """``r(k) = exp(xi_k - xi_{k-1})``."""
        return self.a(k) / self.a(k - 1)

    def to_json(self) -> list:
        return [encode_scalar(v) for v in self.ratios]


def xi_from_diagonal(g: MomentTable) -> XiSequence:
    if not g.diagonal:
        raise ValueError("xi parametrization needs a diagonal table")
    g00 = g[0, 0]
    if is_zero(g00):
        raise ValueError("zero diagonal entry g_00")
    out = []
    for m in range(g.K + 1):
        if is_zero(g[m, m]):
            raise ValueError(f"zero diagonal entry g_{m}{m}")
        out.append(g[m, m] / g00)
    return XiSequence(out)


def diagonal_from_xi(xi: XiSequence, g00: Scalar = Fraction(1), pi_factor: bool = False) -> MomentTable:
    K = xi.K
    zero = Fraction(0)
    entries = [[g00 * xi.a(k) if k == m else zero for m in range(K + 1)] for k in range(K + 1)]
    return MomentTable(entries, diagonal=True, pi_factor=pi_factor, source="xi")


def xi_from_r(r: Callable[[int], Scalar], K: int) -> XiSequence:
    """``a_m = prod_{k=1..m} r(k)``."""
    out = [Fraction(1)]
    for k in range(1, K + 1):
        out.append(out[-1] * r(k))
    return XiSequence(out)


# -- deformation ---------------------------------------------------------------

def _xi_sum(t: Sequence[Scalar], x: Scalar):
    acc = Fraction(0)
    xj = Fraction(1)
    for tj in t:
        xj = xj * x
        acc = acc + tj * xj
    return acc


def deform_moments(g: MomentTable, tt: Sequence[Scalar], ttp: Sequence[Scalar], q1: Scalar, q2: Scalar) -> MomentTable:
    """``g_km -> exp(xi(tt, q1^k) + xi(tt', q2^m)) g_km`` with ``xi(t, x) = sum_j t_j x^j``.

    Times may be :class:`GradedSeries` (then the exponential is exact).
    """
    if is_zero(q1) or is_zero(q2):
        raise ValueError("q1, q2 must be nonzero")
    tt = list(getattr(tt, "values", tt))
    ttp = list(getattr(ttp, "values", ttp))
    left = [exp_scalar(_xi_sum(tt, q1 ** k)) for k in range(g.K + 1)]
    right = [exp_scalar(_xi_sum(ttp, q2 ** m)) for m in range(g.K + 1)]
    entries = []
    for k in range(g.K + 1):
        row = []
        for m in range(g.K + 1):
            v = g[k, m]
            if _is_number(v) and isinstance(v, (int, Fraction)) and v == 0:
                row.append(v)
            else:
                row.append(left[k] * right[m] * v)
        entries.append(row)
    return MomentTable(entries, diagonal=g.diagonal, pi_factor=g.pi_factor, source=f"deformed:{g.source}")


# -- discrete moments ------------------------------------------------------------

@dataclass(frozen=True)
class PairWeight:
    """Pair weight ``exp(V~_{h h'})`` on the lattice ``h, h' >= 0``."""

    func: Callable[[int, int], Scalar]
    diagonal: bool = False
    support: int | None = None  # weights vanish once h or h' exceed this
    closed: Callable | None = field(default=None, compare=False)
    label: str = "custom"

    def __call__(self, h: int, hp: int) -> Scalar:
        if self.support is not None and (h > self.support or hp > self.support):
            return Fraction(0)
        if self.diagonal and h != hp:
            return Fraction(0)
        return self.func(h, hp)


def finite_pair_weight(table: Mapping[tuple[int, int], Scalar]) -> PairWeight:
    table = {(int(a), int(b)): v for (a, b), v in table.items()}
    support = max((max(a, b) for a, b in table), default=0)
    diagonal = all(a == b for a, b in table)

    def closed(q1, q2, k, m):
        return sum((q1 ** (k * a) * q2 ** (m * b) * v for (a, b), v in table.items()), Fraction(0))

    return PairWeight(lambda h, hp: table.get((h, hp), Fraction(0)), diagonal=diagonal, support=support,
                      closed=closed, label=f"finite{sorted(table)}")


def geometric_pair_weight(c: Scalar) -> PairWeight:
    """``exp(V~_{hh'}) = delta_{hh'} c^h``."""

    def closed(q1, q2, k, m):
        ratio = c * q1 ** k * q2 ** m
        if abs(complex(ratio)) >= 1:
            raise ValueError("geometric pair weight sum diverges")
        return 1 / (1 - ratio)

    return PairWeight(lambda h, hp: c ** h, diagonal=True, closed=closed, label=f"geometric({c})")


def geometric_moments_closed(c: Scalar, q1: Scalar, q2: Scalar, K: int) -> MomentTable:
    w = geometric_pair_weight(c)
    return MomentTable([[w.closed(q1, q2, k, m) for m in range(K + 1)] for k in range(K + 1)], source="geometric-closed")


def _discrete_sum(p: PairWeight, q1, q2, K: int, H: int):
    out = [[Fraction(0)] * (K + 1) for _ in range(K + 1)]
    pairs = [(h, h) for h in range(H + 1)] if p.diagonal else [(h, hp) for h in range(H + 1) for hp in range(H + 1)]
    for h, hp in pairs:
        w = p(h, hp)
        if isinstance(w, (int, Fraction)) and w == 0:
            continue
        for k in range(K + 1):
            a = q1 ** (k * h) * w
            for m in range(K + 1):
                out[k][m] = out[k][m] + a * q2 ** (m * hp)
    return out


def discrete_moments(p: PairWeight, q1: Scalar, q2: Scalar, K: int, H: int, tol: float = 1e-12) -> MomentTable:
    """``g~_km = sum_{h,h' <= H} q1^{kh} q2^{mh'} exp(V~_{hh'})`` (single pair, ``A = 1``).

    The cutoff is checked by comparing with ``H + 1``; a relative change
    above ``tol`` raises :class:`NonConvergenceWarning`.
    """
    if H < 0 or K < 0:
        raise ValueError("K and H must be non-negative")
    base = _discrete_sum(p, q1, q2, K, H)
    if p.support is None or p.support > H:
        nxt = _discrete_sum(p, q1, q2, K, H + 1)
        worst = 0.0
        for k in range(K + 1):
            for m in range(K + 1):
                d = abs(complex(nxt[k][m] - base[k][m]))
                s = abs(complex(nxt[k][m])) or 1.0
                worst = max(worst, d / s)
        if worst > tol:
            warnings.warn(f"discrete moments at cutoff H={H} still move by {worst:.3g}", NonConvergenceWarning)
    return MomentTable(base, diagonal=False, source=f"discrete:{p.label}")
