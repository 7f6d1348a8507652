"""Dual Schur functions and the continuous/discrete correspondence they give.

With ``x_i = q^{h*_i}`` and ``x*_i = q^{h_i}`` the products
``Delta(x) s_lam(x)`` and ``Delta(x*) s_lam*(x*)`` coincide, so a partition
can trade places with the eigenvalues.  This turns the Schur expansion at
``t(x), t'(y)`` into a lattice sum on which ``s_lam*(d~)`` acts.

Graded comparisons attach ``eps^{h+h'}`` to every pair weight.  The
``eps``-degree of a term is ``|lam| + |lam'| + n(n-1)``, so ``D`` below caps
``|lam| + |lam'|`` and a cutoff ``H >= D + n - 1`` sees every contributing
lattice point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .lattice import CutoffError
from .moments import PairWeight
from .partitions import Partition, enumerate_partitions, from_h, to_h
from .scalars import DomainError, Scalar, is_zero, qpow, vandermonde
from .schur import (
    CouplingVector,
    SpecializationKind,
    power_sums,
    schur_alternant,
    schur_diff_apply,
    schur_jt,
    specialize,
)
from .series import GradedSeries
from .tau import SchurSeries, evaluate

__all__ = [
    "DualPair",
    "DualTimesSpec",
    "OperatorReport",
    "verify_duality",
    "verify_duality_q1",
    "z_dual",
    "verify_operator_identity",
    "verify_tilde_deformation",
    "derived_a_n",
]


def _reject_roots_of_unity(q: Scalar, kmax: int, tol: float = 1e-12) -> None:
    qk = Fraction(1)
    for k in range(1, kmax + 1):
        qk = qk * q
        if is_zero(qk - 1, tol):
            raise DomainError(f"q^{k} = 1 makes the dual eigenvalues collide")


@dataclass(frozen=True)
class DualPair:
    lam: Partition
    lam_star: Partition
    n: int
    q: Scalar

    def __post_init__(self):
        object.__setattr__(self, "lam", Partition(self.lam))
        object.__setattr__(self, "lam_star", Partition(self.lam_star))
        h, hs = self.h, self.h_star
        if is_zero(self.q):
            raise DomainError("q must be nonzero")
        _reject_roots_of_unity(self.q, max(h[0], hs[0], 1))

    @property
    def h(self):
        return to_h(self.lam, self.n)

    @property
    def h_star(self):
        return to_h(self.lam_star, self.n)

    @property
    def x(self):
        return [qpow(self.q, e) for e in self.h_star]

    @property
    def x_star(self):
        return [qpow(self.q, e) for e in self.h]


def _delta_s(lam: Partition, x: Sequence[Scalar]) -> Scalar:
    # Jacobi-Trudi on power sums, so the check does not reduce to a transposed determinant
    return vandermonde(x) * schur_jt(lam, power_sums(x, lam.weight))


def verify_duality(pair: DualPair) -> Scalar:
    """``Delta(x) s_lam(x) - Delta(x*) s_lam*(x*)``; exactly 0 over the rationals."""
    return _delta_s(pair.lam, pair.x) - _delta_s(pair.lam_star, pair.x_star)


def verify_duality_q1(lam, lam_star, n: int) -> Scalar:
    """``q -> 1`` form: ``Delta(h*) s_lam(t(n,1)) - Delta(h) s_lam*(t(n,1))``."""
    lam, lam_star = Partition(lam), Partition(lam_star)
    M = max(lam.weight, lam_star.weight, 1)
    t = specialize(SpecializationKind.a_1(Fraction(n)), M)
    return (vandermonde(to_h(lam_star, n)) * schur_jt(lam, t)
            - vandermonde(to_h(lam, n)) * schur_jt(lam_star, t))


@dataclass(frozen=True)
class DualTimesSpec:
    lam_star: Partition
    lamp_star: Partition
    q1: Scalar
    q2: Scalar
    n: int

    @property
    def x(self):
        return [qpow(self.q1, e) for e in to_h(Partition(self.lam_star), self.n)]

    @property
    def y(self):
        return [qpow(self.q2, e) for e in to_h(Partition(self.lamp_star), self.n)]

    def times(self, M: int) -> tuple[CouplingVector, CouplingVector]:
        return power_sums(self.x, M), power_sums(self.y, M)


def z_dual(series: SchurSeries, spec: DualTimesSpec) -> Scalar:
    """Normalized ``evaluate(series, t(x), t'(y)) * Delta(x) Delta(y)``."""
    t, tp = spec.times(series.D)
    return evaluate(series, t, tp) * vandermonde(spec.x) * vandermonde(spec.y)


def derived_a_n(n: int) -> int:
    """Constant relating the two sides when the discrete moments use ``A = 1``."""
    return factorial(n)


@dataclass
class OperatorReport:
    residual_by_degree: dict
    lhs: dict
    rhs: dict
    exact: bool
    tolerance: float
    params: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return max((abs(complex(v)) for v in self.residual_by_degree.values()), default=0.0)

    @property
    def passed(self) -> bool:
        if self.exact:
            return all(is_zero(v) for v in self.residual_by_degree.values())
        return self.residual <= self.tolerance


def _support(pair: Callable, H: int) -> list[tuple[int, int, Scalar]]:
    diag = getattr(pair, "diagonal", False)
    cand = [(h, h) for h in range(H + 1)] if diag else [(h, hp) for h in range(H + 1) for hp in range(H + 1)]
    out = []
    for h, hp in cand:
        p = pair(h, hp)
        if isinstance(p, (int, Fraction)) and p == 0:
            continue
        out.append((h, hp, p))
    return out


def _cones(n: int, H: int):
    return itertools.combinations(range(H, -1, -1), n)


def _lhs_by_degree(pair, lam_star, lamp_star, q1, q2, n: int, D: int, H: int) -> dict:
    """``n! sum_{cones} det(p(h_i,h'_j)) s_lam(x) s_lam'(y) Delta(x) Delta(y)`` per eps-degree."""
    from .scalars import det

    spec = DualTimesSpec(lam_star, lamp_star, q1, q2, n)
    x, y = spec.x, spec.y
    base = n * (n - 1)
    nf = factorial(n)
    sx: dict = {}
    sy: dict = {}
    out: dict = {}
    cones = [h for h in _cones(n, H) if sum(h) - base // 2 <= D]
    for h in cones:
        lam = from_h(h)
        if lam not in sx:
            sx[lam] = _delta_s(lam, x)
        for hp in cones:
            e = sum(h) + sum(hp)
            if e - base > D:
                continue
            m = det([[pair(a, b) for b in hp] for a in h])
            if is_zero(m):
                continue
            lamp = from_h(hp)
            if lamp not in sy:
                sy[lamp] = _delta_s(lamp, y)
            term = nf * m * sx[lam] * sy[lamp]
            out[e] = out[e] + term if e in out else term
    return out


def _operator_value(mu: Partition, q: Scalar, hs: Sequence[int], cache: dict) -> Scalar:
    """``[s_mu(d~) exp(sum_m t~_m sum_i q^{m h_i})]_{t~=0}`` computed in a graded ring."""
    key = tuple(sorted(hs))
    if key in cache:
        return cache[key]
    k = mu.weight
    if k == 0:
        cache[key] = Fraction(1)
        return cache[key]
    weights = tuple(range(1, k + 1))
    exponent = GradedSeries({}, weights, k)
    for m in range(1, k + 1):
        pm = Fraction(0)
        for h in hs:
            pm = pm + q ** (m * h)
        exponent = exponent + GradedSeries.variable(m - 1, weights, k, pm)
    val = schur_diff_apply(mu, exponent.exp())
    cache[key] = val
    return val


def _rhs_by_degree(pair, lam_star, lamp_star, q1, q2, n: int, D: int, H: int, a_n: Scalar) -> dict:
    """``a_n s_lam*(d~) s_lam'*(d~') Z^discr |_0`` per eps-degree.

    ``(1/n!) sum`` over ordered tuples equals the sum over sets of distinct
    support pairs (repeated pairs kill a Vandermonde factor).
    """
    mu1, mu2 = Partition(lam_star), Partition(lamp_star)
    base = n * (n - 1)
    cache1: dict = {}
    cache2: dict = {}
    out: dict = {}
    support = [s for s in _support(pair, H) if s[0] + s[1] <= D + base]
    for combo in itertools.combinations(support, n):
        e = sum(c[0] + c[1] for c in combo)
        if e - base > D:
            continue
        hs = [c[0] for c in combo]
        hps = [c[1] for c in combo]
        dv = vandermonde([q1 ** h for h in hs]) * vandermonde([q2 ** h for h in hps])
        if is_zero(dv):
            continue
        term = dv
        for c in combo:
            term = term * c[2]
        term = term * _operator_value(mu1, q1, hs, cache1) * _operator_value(mu2, q2, hps, cache2)
        out[e] = out[e] + term if e in out else term
    return {e: a_n * v for e, v in out.items()}


def verify_operator_identity(pair: PairWeight | Callable, lam_star, lamp_star, q1: Scalar, q2: Scalar, n: int,
                    D: int, H: int | None = None, tol: float = 1e-9) -> OperatorReport:
    """Continuous side at ``t(x), t'(y)`` versus ``a_n s(d~) s(d~') Z^discr`` at zero.

    Both sides are polynomials in the grading ``eps``; they are compared for
    every degree ``|lam| + |lam'| <= D``.  ``lam_star = lamp_star = 0`` is
    statement (i).
    """
    if H is None:
        H = D + n - 1
    if H < D + n - 1:
        raise CutoffError(f"H={H} < D+n-1={D + n - 1}")
    lam_star, lamp_star = Partition(lam_star), Partition(lamp_star)
    for q in (q1, q2):
        if is_zero(q):
            raise DomainError("q must be nonzero")
        _reject_roots_of_unity(q, max(H, lam_star.weight + n, lamp_star.weight + n))
    a_n = derived_a_n(n)
    lhs = _lhs_by_degree(pair, lam_star, lamp_star, q1, q2, n, D, H)
    rhs = _rhs_by_degree(pair, lam_star, lamp_star, q1, q2, n, D, H, a_n)
    zero = Fraction(0)
    res = {e: lhs.get(e, zero) - rhs.get(e, zero) for e in sorted(set(lhs) | set(rhs))}
    exact = all(isinstance(v, (int, Fraction)) for v in list(lhs.values()) + list(rhs.values()))
    return OperatorReport(res, lhs, rhs, exact, tol,
                          params={"n": n, "D": D, "H": H, "lam_star": list(lam_star), "lamp_star": list(lamp_star)})


def verify_tilde_deformation(pair: PairWeight | Callable, lam_star, lamp_star, q1: Scalar, q2: Scalar,
                             n: int, D: int, H: int | None = None, tol: float = 1e-9) -> OperatorReport:
    """Same comparison with live ``t~_1, t~'_1``.

    Continuous side: moments deformed by ``exp(t~_1 q1^k + t~'_1 q2^m)``.
    Discrete side: ``Z^discr`` with ``t~_1..t~_k`` symbolic, the operators
    applied, then ``t~_{m>=2} = 0``.  Ring ``(eps, t~_1, t~'_1)``, all of
    weight 1, compared through total degree ``n(n-1) + D``.
    """
    from .scalars import det

    if H is None:
        H = D + n - 1
    if H < D + n - 1:
        raise CutoffError(f"H={H} < D+n-1={D + n - 1}")
    mu1, mu2 = Partition(lam_star), Partition(lamp_star)
    base = n * (n - 1)
    P = base + D
    a_n = derived_a_n(n)

    # continuous side ----------------------------------------------------------
    W = (1, 1, 1)
    eps, s1, s2 = GradedSeries.variables(W, P)
    one = GradedSeries.constant(Fraction(1), W, P)
    left = {k: (s1 * q1 ** k).exp() for k in range(H + 1)}
    right = {m: (s2 * q2 ** m).exp() for m in range(H + 1)}
    epow = [one]
    for _ in range(2 * H + 1):
        epow.append(epow[-1] * eps)
    spec = DualTimesSpec(mu1, mu2, q1, q2, n)
    x, y = spec.x, spec.y
    nf = factorial(n)
    lhs = GradedSeries({}, W, P)
    cones = [h for h in _cones(n, H) if sum(h) - base // 2 <= D]
    for h in cones:
        sx = _delta_s(from_h(h), x)
        for hp in cones:
            e = sum(h) + sum(hp)
            if e > P:
                continue
            raw = det([[pair(a, b) for b in hp] for a in h])
            if is_zero(raw):
                continue
            g = det([[left[a] * right[b] * pair(a, b) for b in hp] for a in h])
            sy = _delta_s(from_h(hp), y)
            lhs = lhs + g * epow[e] * (nf * sx * sy)

    # discrete side --------------------------------------------------------------
    k1, k2 = max(mu1.weight, 1), max(mu2.weight, 1)
    Wd = (1,) + tuple(range(1, k1 + 1)) + tuple(range(1, k2 + 1))
    Pd = P + mu1.weight + mu2.weight
    vs = GradedSeries.variables(Wd, Pd)
    e_d = vs[0]
    tt = vs[1:1 + k1]
    ttp = vs[1 + k1:]
    oned = GradedSeries.constant(Fraction(1), Wd, Pd)
    epd = [oned]
    for _ in range(2 * H + 1):
        epd.append(epd[-1] * e_d)

    def side_exp(q, hs, tv, cache):
        key = tuple(sorted(hs))
        if key not in cache:
            expo = GradedSeries({}, Wd, Pd)
            for m, tm in enumerate(tv, start=1):
                pm = Fraction(0)
                for h in hs:
                    pm = pm + q ** (m * h)
                expo = expo + tm * pm
            cache[key] = expo.exp()
        return cache[key]

    c1: dict = {}
    c2: dict = {}
    zd = GradedSeries({}, Wd, Pd)
    support = [s for s in _support(pair, H) if s[0] + s[1] <= P]
    for combo in itertools.combinations(support, n):
        e = sum(c[0] + c[1] for c in combo)
        if e > P:
            continue
        hs = [c[0] for c in combo]
        hps = [c[1] for c in combo]
        dv = vandermonde([q1 ** h for h in hs]) * vandermonde([q2 ** h for h in hps])
        if is_zero(dv):
            continue
        w = dv
        for c in combo:
            w = w * c[2]
        zd = zd + side_exp(q1, hs, tt, c1) * side_exp(q2, hps, ttp, c2) * epd[e] * w
    slots1 = list(range(1, 1 + k1))
    slots2 = list(range(1 + k1, 1 + k1 + k2))
    out = schur_diff_apply(mu1, zd, variables=slots1, at_zero=False) if mu1.weight else zd
    out = schur_diff_apply(mu2, out, variables=slots2, at_zero=False) if mu2.weight else out
    keep = [0, slots1[0], slots2[0]]
    rhs = out.project(keep) * a_n
    rhs = GradedSeries(rhs.coeffs, W, min(rhs.prec, P))
    lhs = lhs.truncate(rhs.prec)

    diff = lhs - rhs
    res = {m: c for m, c in diff.coeffs.items()}
    exact = all(isinstance(v, (int, Fraction)) for v in list(lhs.coeffs.values()) + list(rhs.coeffs.values()))
    return OperatorReport(res, dict(lhs.coeffs), dict(rhs.coeffs), exact, tol,
                          params={"n": n, "D": D, "H": H, "lam_star": list(mu1), "lamp_star": list(mu2),
                                  "prec": rhs.prec})
