"""Schur functions in higher times and in eigenvalues, plus specializations.

Higher times ``t = (t_1, ..., t_M)`` are the power-sum coordinates
``t_m = p_m / m``.  A :class:`CouplingVector` carries exactly ``M`` of them;
anything of weight ``> M`` is unknown and asking for it raises
:class:`~schurtau.scalars.TruncationError`.

Entries may be plain scalars or :class:`~schurtau.series.GradedSeries`; all
routines only use ring operations, so graded identity checks reuse them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .partitions import (
    Partition,
    enumerate_partitions,
    hook_polynomial,
    hook_product,
    n_stat,
    q_pochhammer,
    rising_factorial,
    to_h,
)
from .scalars import DomainError, Scalar, TruncationError, det, encode_scalar, is_zero, parse_scalar, qpow, vandermonde
from .series import GradedSeries

__all__ = [
    "CouplingVector",
    "SpecializationKind",
    "T_INFTY",
    "T_A_1",
    "T_INFTY_Q",
    "T_A_Q",
    "T_N_Q",
    "elementary_schur",
    "schur_jt",
    "schur_alternant",
    "power_sums",
    "specialize",
    "schur_specialized_closed",
    "d_t1",
    "schur_diff_apply",
    "schur_monomial_expansion",
]


@dataclass(frozen=True)
class CouplingVector:
    values: tuple

    def __init__(self, values: Sequence[Scalar]):
        object.__setattr__(self, "values", tuple(values))

    @property
    def M(self) -> int:
        return len(self.values)

    def __getitem__(self, m: int) -> Scalar:
        """1-based access ``t[m]``."""
        if m < 1:
            raise IndexError("times are indexed from 1")
        if m > self.M:
            raise TruncationError(f"t_{m} requested from a vector truncated at M={self.M}")
        return self.values[m - 1]

    def scaled(self, c: Scalar) -> "CouplingVector":
        """``t_m -> c^m t_m``: the grading substitution."""
        out, cm = [], Fraction(1)
        for v in self.values:
            cm = cm * c
            out.append(cm * v)
        return CouplingVector(out)

    def truncated(self, M: int) -> "CouplingVector":
        if M > self.M:
            raise TruncationError(f"cannot extend truncation from {self.M} to {M}")
        return CouplingVector(self.values[:M])

    def padded(self, M: int) -> "CouplingVector":
        """Extend with exact zeros; only valid when the trailing times are known to vanish."""
        return CouplingVector(list(self.values) + [Fraction(0)] * max(0, M - self.M))

    def to_json(self) -> list:
        return [encode_scalar(v) for v in self.values]

    @classmethod
    def from_json(cls, data) -> "CouplingVector":
        return cls([parse_scalar(v) for v in data])


# -- specializations -------------------------------------------------------

T_INFTY = "T_INFTY"
T_A_1 = "T_A_1"
T_INFTY_Q = "T_INFTY_Q"
T_A_Q = "T_A_Q"
T_N_Q = "T_N_Q"
_TAGS = (T_INFTY, T_A_1, T_INFTY_Q, T_A_Q, T_N_Q)


@dataclass(frozen=True)
class SpecializationKind:
    tag: str
    a: Scalar = None
    q: Scalar = None
    n: int | None = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown specialization {self.tag!r}")
        if self.tag in (T_A_1, T_A_Q) and self.a is None:
            raise ValueError(f"{self.tag} needs parameter a")
        if self.tag in (T_INFTY_Q, T_A_Q, T_N_Q) and self.q is None:
            raise ValueError(f"{self.tag} needs parameter q")
        if self.tag == T_N_Q and (self.n is None or self.n < 0):
            raise ValueError("T_N_Q needs a non-negative integer n")

    @classmethod
    def infty(cls):
        return cls(T_INFTY)

    @classmethod
    def a_1(cls, a):
        return cls(T_A_1, a=a)

    @classmethod
    def infty_q(cls, q):
        return cls(T_INFTY_Q, q=q)

    @classmethod
    def a_q(cls, a, q):
        return cls(T_A_Q, a=a, q=q)

    @classmethod
    def n_q(cls, n, q):
        return cls(T_N_Q, q=q, n=n)


def _check_root_of_unity(q: Scalar, M: int) -> None:
    qm = Fraction(1)
    for m in range(1, M + 1):
        qm = qm * q
        if is_zero(1 - qm, 1e-14):
            raise DomainError(f"q^{m} = 1: q is a root of unity of order <= {M}")


def specialize(kind: SpecializationKind, M: int) -> CouplingVector:
    if M < 0:
        raise ValueError("M must be non-negative")
    tag = kind.tag
    if tag == T_INFTY:
        return CouplingVector([Fraction(1)] + [Fraction(0)] * (M - 1) if M else [])
    if tag == T_A_1:
        return CouplingVector([kind.a / Fraction(m) for m in range(1, M + 1)])
    if tag == T_N_Q:
        xs = [qpow(kind.q, kind.n - i) for i in range(1, kind.n + 1)]
        return power_sums(xs, M)
    q = kind.q
    _check_root_of_unity(q, M)
    out = []
    if tag == T_INFTY_Q:
        for m in range(1, M + 1):
            out.append(1 / (m * (1 - q ** m)))
    else:
        qa = qpow(q, kind.a)
        for m in range(1, M + 1):
            out.append((1 - qa ** m) / (m * (1 - q ** m)))
    return CouplingVector(out)


# -- Schur functions -----------------------------------------------------------

def elementary_schur(t: CouplingVector, kmax: int) -> list:
    """``h_0..h_kmax`` from ``k h_k = sum_j j t_j h_{k-j}``."""
    if kmax > t.M:
        raise TruncationError(f"h_{kmax} needs t_1..t_{kmax}; only M={t.M} available")
    hs = [Fraction(1)]
    for k in range(1, kmax + 1):
        acc = Fraction(0)
        for j in range(1, k + 1):
            acc = acc + j * t.values[j - 1] * hs[k - j]
        hs.append(acc / k)
    return hs


def _jt_matrix(lam: Partition, hs: list) -> list:
    zero = Fraction(0)
    L = len(lam)
    rows = []
    for i in range(L):
        row = []
        for j in range(L):
            k = lam[i] - i + j
            row.append(hs[k] if 0 <= k < len(hs) else zero)
        rows.append(row)
    return rows


def schur_jt(lam: Partition, t: CouplingVector, _hs: list | None = None) -> Scalar:
    """Jacobi-Trudi ``det(h_{lam_i - i + j})``."""
    lam = Partition(lam)
    if not lam:
        return Fraction(1)
    hs = _hs if _hs is not None else elementary_schur(t, lam.weight)
    return det(_jt_matrix(lam, hs))


def power_sums(x: Sequence[Scalar], M: int) -> CouplingVector:
    out = []
    for m in range(1, M + 1):
        acc = Fraction(0)
        for xi in x:
            acc = acc + xi ** m
        out.append(acc / m)
    return CouplingVector(out)


def _distinct(x: Sequence[Scalar], tol: float) -> bool:
    return all(not is_zero(x[i] - x[j], tol) for i in range(len(x)) for j in range(i + 1, len(x)))


def schur_alternant(lam: Partition, x: Sequence[Scalar], tol: float = 0.0) -> Scalar:
    """``det(x_i^{lam_j - j + n}) / det(x_i^{n - j})``.

    Falls back to Jacobi-Trudi on power sums when ``l(lam) > n`` or the
    ``x_i`` are not pairwise distinct (the alternant ratio is then 0/0).
    """
    lam = Partition(lam)
    x = list(x)
    n = len(x)
    if not lam:
        return Fraction(1)
    if len(lam) > n or not _distinct(x, tol):
        return schur_jt(lam, power_sums(x, lam.weight))
    h = to_h(lam, n)
    num = det([[xi ** hj for hj in h] for xi in x])
    return num / vandermonde(x)


def schur_specialized_closed(lam: Partition, kind: SpecializationKind) -> Scalar:
    lam = Partition(lam)
    tag = kind.tag
    if tag == T_INFTY:
        return Fraction(1, hook_product(lam))
    if tag == T_A_1:
        return rising_factorial(kind.a, lam) / hook_product(lam)
    if tag == T_N_Q:
        return schur_alternant(lam, [qpow(kind.q, kind.n - i) for i in range(1, kind.n + 1)])
    q = kind.q
    _check_root_of_unity(q, lam[0] + len(lam) - 1 if lam else 1)
    base = q ** n_stat(lam) / hook_polynomial(lam, q)
    if tag == T_INFTY_Q:
        return base
    return base * q_pochhammer(kind.a, q, lam)


def d_t1(lam: Partition) -> list[Partition]:
    """Partitions ``mu`` with ``lam / mu`` a single box, so ``ds_lam/dt_1 = sum s_mu``."""
    return Partition(lam).corners()


# -- Schur differential operators ----------------------------------------------

_MONO_CACHE: dict = {}


def schur_monomial_expansion(mu: Partition) -> dict[tuple, Scalar]:
    """Coefficients ``F_alpha`` with ``s_mu(t) = sum F_alpha t_1^{alpha_1} ... t_k^{alpha_k}``, ``k = |mu|``."""
    mu = Partition(mu)
    if mu in _MONO_CACHE:
        return _MONO_CACHE[mu]
    k = mu.weight
    if k == 0:
        out = {(): Fraction(1)}
    else:
        weights = tuple(range(1, k + 1))
        t = CouplingVector(GradedSeries.variables(weights, k))
        s = schur_jt(mu, t)
        out = {m: c for m, c in s.coeffs.items() if not is_zero(c)}
    _MONO_CACHE[mu] = out
    return out


def schur_diff_apply(
    mu: Partition,
    series,
    variables: Sequence[int] | None = None,
    at_zero: bool = True,
):
    """Apply ``s_mu(d~)`` with ``d~_m = (1/m) d/dt_m``.

    ``series`` may be a mapping ``lam -> c_lam`` standing for
    ``sum c_lam s_lam(t)``; then orthonormality of the Schur basis under the
    Hall pairing gives ``c_mu`` directly.  It may also be a
    :class:`GradedSeries` in which ``variables[m-1]`` is the slot of ``t_m``
    (default: slot ``m-1``).  At ``t = 0`` only the monomials of ``s_mu``
    survive, each paired with ``prod alpha_m! m^{-alpha_m}``.  With
    ``at_zero=False`` the operator is applied and the full series returned.
    """
    mu = Partition(mu)
    if isinstance(series, Mapping):
        return series.get(mu, Fraction(0))
    if not isinstance(series, GradedSeries):
        raise TypeError("schur_diff_apply needs a coefficient mapping or a GradedSeries")
    k = mu.weight
    if variables is None:
        variables = list(range(k))
    variables = list(variables)
    if len(variables) < k:
        raise TruncationError(f"s_{tuple(mu)}(d) needs t_1..t_{k} in the ring")
    for m, slot in enumerate(variables[:k], start=1):
        if series.weights[slot] != m:
            raise ValueError(f"slot {slot} must carry weight {m}")
    if series.prec < k:
        raise TruncationError(f"series truncated at {series.prec} < |mu| = {k}")
    F = schur_monomial_expansion(mu)
    op_slots = variables[:k]
    others = [i for i in range(series.nvars) if i not in set(variables)]

    if at_zero:
        # pairing <t^alpha, t^beta> = delta * prod alpha_m! m^{-alpha_m}
        out = {}
        for mono, c in series.coeffs.items():
            if any(mono[s] for s in variables[k:]):
                continue
            alpha = tuple(mono[s] for s in op_slots)
            if alpha not in F:
                continue
            w = Fraction(1)
            for m, am in enumerate(alpha, start=1):
                w *= Fraction(factorial(am), m ** am)
            key = tuple(mono[i] for i in others)
            term = F[alpha] * w * c
            out[key] = out[key] + term if key in out else term
        if not others:
            return out.get((), Fraction(0))
        return GradedSeries(out, [series.weights[i] for i in others], series.prec - k)

    total = None
    for alpha, f in F.items():
        part = series
        scale = Fraction(1)
        for m, am in enumerate(alpha, start=1):
            for _ in range(am):
                part = part.deriv(op_slots[m - 1])
            scale /= m ** am
        term = part * (f * scale)
        total = term if total is None else total + term
    if total is None:
        total = GradedSeries({}, series.weights, series.prec - k)
    return total


def schur_table(max_weight: int, t: CouplingVector, max_length: int | None = None) -> dict[Partition, Scalar]:
    """All ``s_lam(t)`` with ``|lam| <= max_weight`` sharing one ``h``-sequence."""
    if max_length is None:
        max_length = max_weight
    hs = elementary_schur(t, max_weight)
    return {lam: schur_jt(lam, t, hs) for lam in enumerate_partitions(max_weight, max_length)}


__all__.append("schur_table")
