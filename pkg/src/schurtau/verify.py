"""Identity checks and the suite runner.

Every check returns a :class:`VerificationReport`.  Exact-field checks pass
only on an exactly vanishing residual; quadrature checks use a relative
tolerance of 1e-7 and the Monte-Carlo check 4 standard errors with a 2%
relative floor.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

import numpy as np

from .duality import DualPair, verify_duality, verify_duality_q1, verify_operator_identity
from .lattice import kontsevich_sum, model_times, model_weights, cone_sum
from .moments import (
    XiSequence,
    finite_pair_weight,
    gaussian_moments,
    general_moments,
    geometric_pair_weight,
    table_moments,
    xi_from_r,
    QuadratureSpec,
    _quad,
)
from .partitions import (
    Partition,
    enumerate_partitions,
    hook_product,
    rising_factorial,
    to_h,
)
from .scalars import DomainError, Scalar, det, encode_scalar, is_exact, is_zero, vandermonde
from .schur import (
    CouplingVector,
    SpecializationKind,
    power_sums,
    schur_jt,
    schur_monomial_expansion,
    schur_specialized_closed,
    specialize,
)
from .series import GradedSeries
from .tau import evaluate_by_degree, tau_hyper, tau_t1_series, toda_residual, z_axial, z_expand, RFunction

__all__ = [
    "VerificationReport",
    "SuiteReport",
    "verify_closed_forms",
    "verify_cauchy_littlewood",
    "verify_gaussian_recovery",
    "verify_lattice_degrees",
    "verify_toda",
    "verify_duality_grid",
    "f_series",
    "c_n_from_xi",
    "c_n_from_r",
    "verify_det_formula",
    "hyper_pfs",
    "hyper_pfs_by_degree",
    "verify_hypergeometric",
    "verify_operator_grid",
    "mc_haar_check",
    "verify_quadrature_moments",
    "verify_angle_reduction",
    "verify_all",
]

EXACT = "exact"
COMPLEX = "complex-double"


@dataclass
class VerificationReport:
    identity: str
    params: dict
    field: str
    residual: float
    tolerance: float
    passed: bool
    runtime: float = 0.0
    details: dict = field(default_factory=dict)

    def to_json(self, include_runtime: bool = False) -> dict:
        out = {
            "identity": self.identity,
            "params": self.params,
            "field": self.field,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "details": self.details,
        }
        if include_runtime:
            out["runtime"] = round(self.runtime, 4)
        return out


@dataclass
class SuiteReport:
    reports: list
    params: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_json(self, include_runtime: bool = False) -> dict:
        return {
            "params": self.params,
            "passed": self.passed,
            "reports": [r.to_json(include_runtime) for r in self.reports],
        }

    def dumps(self, include_runtime: bool = False) -> str:
        return json.dumps(self.to_json(include_runtime), sort_keys=True, indent=2)


def _mag(v) -> float:
    try:
        return abs(complex(v))
    except TypeError:
        import sympy

        return abs(complex(sympy.N(v)))


class _Tally:
    """Collects residuals; exact mode tracks literal zeros."""

    def __init__(self, exact: bool = True):
        self.exact = exact
        self.max = 0.0
        self.bad = 0
        self.count = 0
        self.first_failure = None

    def add(self, diff, label=None, scale: float = 1.0, tol: float = 0.0) -> None:
        self.count += 1
        if self.exact and is_zero(diff):
            return
        m = _mag(diff) / (scale or 1.0)
        self.max = max(self.max, m)
        fail = self.exact or m > tol
        if fail:
            self.bad += 1
            if self.first_failure is None:
                self.first_failure = str(label)

    def report(self, name, params, tol=0.0, t0=None, **details) -> VerificationReport:
        details = dict(details, checked=self.count, failures=self.bad)
        if self.first_failure is not None:
            details["first_failure"] = self.first_failure
        return VerificationReport(name, params, EXACT if self.exact else COMPLEX, self.max, tol, self.bad == 0,
                                  time.perf_counter() - t0 if t0 else 0.0, details)


def _rng(seed: int) -> random.Random:
    return random.Random(seed)


def _rand_frac(rng: random.Random, lo: int = -5, hi: int = 5, den: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


# -- criterion 1 ------------------------------------------------------------------

def verify_closed_forms(max_weight: int = 6, a_values=(2, Fraction(7, 2)), q_values=(Fraction(1, 2), Fraction(3, 5))
                  ) -> VerificationReport:
    """Jacobi-Trudi on the four specializations versus their hook closed forms."""
    t0 = time.perf_counter()
    kinds = [SpecializationKind.infty()]
    kinds += [SpecializationKind.a_1(Fraction(a)) for a in a_values]
    kinds += [SpecializationKind.infty_q(q) for q in q_values]
    kinds += [SpecializationKind.a_q(Fraction(a), q) for a in a_values for q in q_values]
    tal = _Tally()
    for kind in kinds:
        t = specialize(kind, max(max_weight, 1))
        for lam in enumerate_partitions(max_weight, max_weight):
            tal.add(schur_jt(lam, t) - schur_specialized_closed(lam, kind), (kind.tag, kind.a, kind.q, tuple(lam)))
    return tal.report("closed_forms", {"max_weight": max_weight, "a": [encode_scalar(Fraction(a)) for a in a_values],
                                 "q": [encode_scalar(q) for q in q_values]}, t0=t0)


# -- criterion 2 ------------------------------------------------------------------

def verify_cauchy_littlewood(gamma: CouplingVector, gammap: CouplingVector, D: int) -> VerificationReport:
    """``exp(sum m g_m g'_m)`` against ``sum s_lam(g) s_lam(g')`` through total degree ``2D``.

    The grading ``g_m -> eps^m g_m`` (both sides) makes the comparison a
    univariate series identity in ``eps``.
    """
    t0 = time.perf_counter()
    if gamma.M < D or gammap.M < D:
        raise ValueError(f"coupling vectors must cover order {D}")
    P = 2 * D
    W = (1,)
    expo = GradedSeries({}, W, P)
    for m in range(1, D + 1):
        expo = expo + GradedSeries({(2 * m,): m * gamma[m] * gammap[m]}, W, P)
    lhs = expo.exp()
    rhs_c: dict = {}
    for lam in enumerate_partitions(D, D):
        d = 2 * lam.weight
        val = schur_jt(lam, gamma) * schur_jt(lam, gammap)
        rhs_c[(d,)] = rhs_c.get((d,), Fraction(0)) + val
    rhs = GradedSeries(rhs_c, W, P)
    diff = lhs - rhs
    tal = _Tally()
    for d in range(P + 1):
        tal.add(diff.coeff((d,)), d)
    return tal.report("cauchy_littlewood", {"D": D, "gamma": gamma.to_json(), "gamma_prime": gammap.to_json()},
                      t0=t0)


# -- criterion 3 ------------------------------------------------------------------

def verify_gaussian_recovery(n: int, D: int) -> VerificationReport:
    t0 = time.perf_counter()
    ser = z_expand(gaussian_moments(D + n), n, D)
    tal = _Tally()
    for (a, b), c in ser.coeffs.items():
        target = rising_factorial(n, a) if a == b else Fraction(0)
        tal.add(c - target, (tuple(a), tuple(b)))
    for lam in enumerate_partitions(D, n):
        if (lam, lam) not in ser.coeffs:
            tal.add(Fraction(1), ("missing", tuple(lam)))
    return tal.report("gaussian_recovery", {"n": n, "D": D}, t0=t0)


# -- criterion 4 ------------------------------------------------------------------

LATTICE_PARAMS = {
    "A": {"t1": Fraction(1, 2), "t1p": Fraction(2, 3)},
    "B": {"x": Fraction(1, 3), "y": Fraction(1, 2), "a": Fraction(7, 2), "ap": Fraction(5, 2)},
    "C": {"x": Fraction(1, 2), "y": Fraction(1, 3), "q1": Fraction(1, 2), "q2": Fraction(1, 2)},
    "D": {"x": Fraction(1, 2), "y": Fraction(2, 3), "a": 5, "ap": 4, "q1": Fraction(1, 2), "q2": Fraction(1, 2)},
    "E": {"a": 5, "q": Fraction(1, 2)},
}


def _random_table(rng, K: int, diagonal: bool):
    z = Fraction(0)
    return table_moments([[_rand_frac(rng) if (not diagonal or k == m) else z for m in range(K + 1)]
                          for k in range(K + 1)], diagonal=diagonal)


def verify_lattice_degrees(kind: str, n: int, D: int, seed: int = 0, params: dict | None = None,
                           diagonal: bool | None = None) -> VerificationReport:
    """Per-degree lattice sum against the matching slice of the specialized Schur expansion."""
    t0 = time.perf_counter()
    kind = kind.upper()
    rng = _rng(seed)
    H = D + n - 1
    tal = _Tally()
    prm = dict(LATTICE_PARAMS[kind] if params is None else params)
    if kind == "E":
        xi = XiSequence([Fraction(1)] + [_rand_frac(rng, 1, 6) for _ in range(H + 1)])
        y = [Fraction(k + 1, 2 * k + 3) for k in range(n)]
        res = kontsevich_sum(xi, prm.get("a"), prm["q"], y, n, H)
        t, _ = model_times("E", prm, D)
        ser = z_axial(xi, n, D)
        ys = power_sums(y, D)
        dv = vandermonde(y)
        for d in range(D + 1):
            lhs = Fraction(0)
            for (lam, _), c in ser.coeffs.items():
                if lam.weight == d:
                    lhs = lhs + factorial(n) * c * schur_jt(lam, t) * schur_jt(lam, ys) * dv
            tal.add(lhs - res.z_by_degree().get((d,), Fraction(0)), d)
        prm_out = {k: encode_scalar(v) if v is not None else None for k, v in prm.items()}
        return tal.report("lattice_degrees", {"kind": kind, "n": n, "D": D, "H": H, "seed": seed,
                                              "params": prm_out}, t0=t0)
    diags = (False, True) if diagonal is None else (diagonal,)
    for diag in diags:
        g = _random_table(rng, H, diag)
        spec = model_weights(kind, dict(prm, moments=g), n, H)
        res = cone_sum(spec, compare_degree=D)
        ser = z_expand(g, n, D)
        t, tp = model_times(kind, prm, D)
        sl = evaluate_by_degree(ser, t, tp)
        lat = res.z_by_degree()
        keys = {k for k in lat if k[0] <= D and k[1] <= D} | set(sl)
        for k in sorted(keys):
            lhs = ser.prefactor * sl.get(k, Fraction(0))
            tal.add(lhs - lat.get(k, Fraction(0)), (diag, k))
    return tal.report("lattice_degrees", {"kind": kind, "n": n, "D": D, "H": H, "seed": seed,
                                          "params": {k: encode_scalar(v) for k, v in prm.items()}}, t0=t0)


# -- criterion 5 ------------------------------------------------------------------

TODA_RS = {
    "k": lambda k: Fraction(k),
    "k^2": lambda k: Fraction(k) ** 2,
    "k(k+3/2)": lambda k: Fraction(k) * (k + Fraction(3, 2)),
}


def verify_toda(ns=(1, 2, 3), D: int = 6, rs: Sequence[str] = tuple(TODA_RS)) -> VerificationReport:
    t0 = time.perf_counter()
    tal = _Tally()
    for name in rs:
        r = RFunction(TODA_RS[name], label=name)
        for n in ns:
            res = toda_residual(r, n, D)
            for d in range(D - 1):
                for mono, c in res.homogeneous(d).items():
                    tal.add(c, (name, n, mono))
    # tau(1) for r(k) = k is exp(t1 t1')
    ser = tau_t1_series(TODA_RS["k"], 1, 2 * D)
    for a in range(D + 1):
        tal.add(ser.coeff((a, a)) - Fraction(1, factorial(a)), ("tau1", a))
        for b in range(D + 1):
            if a != b and a + b < 2 * D:
                tal.add(ser.coeff((a, b)), ("tau1", a, b))
    return tal.report("toda", {"n": list(ns), "D": D, "r": list(rs)}, t0=t0)


# -- criterion 6 ------------------------------------------------------------------

def verify_duality_grid(max_n: int = 3, max_weight: int = 4,
                        qs=(Fraction(2), Fraction(1, 2), Fraction(3, 5))) -> VerificationReport:
    t0 = time.perf_counter()
    tal = _Tally()
    for n in range(1, max_n + 1):
        parts = list(enumerate_partitions(max_weight, n))
        for lam in parts:
            for ls in parts:
                for q in qs:
                    tal.add(verify_duality(DualPair(lam, ls, n, q)), (n, tuple(lam), tuple(ls), q))
                tal.add(verify_duality_q1(lam, ls, n), (n, tuple(lam), tuple(ls), "q1"))
    return tal.report("duality", {"max_n": max_n, "max_weight": max_weight, "q": [encode_scalar(q) for q in qs]},
                      t0=t0)


# -- determinant formula -----------------------------------------------------------

def f_series(xi: XiSequence, D: int) -> GradedSeries:
    """``f(z) = sum_{k <= D} a_k z^k`` as a univariate series of precision ``D + 1``."""
    if xi.K < D:
        raise IndexError(f"xi must cover order {D}")
    return GradedSeries({(k,): xi.a(k) for k in range(D + 1) if not is_zero(xi.a(k))}, (1,), D + 1)


def c_n_from_xi(xi: XiSequence, n: int) -> Scalar:
    c = Fraction(1)
    for i in range(n):
        c = c / xi.a(i)
    return c


def c_n_from_r(r: Callable[[int], Scalar], n: int) -> Scalar:
    c = Fraction(1)
    for k in range(1, n):
        c = c * r(k) ** (k - n)
    return c


def _det_lhs(a: Callable[[int], Scalar], c_n: Scalar, x, y, D: int) -> dict:
    """``c_n det(f(eps x_i y_k)) / (Delta(x) Delta(y))``: degree ``d`` after removing ``eps^{n(n-1)/2}``.

    Degrees below the shift are returned under negative keys; they must vanish.
    """
    n = len(x)
    base = n * (n - 1) // 2
    P = D + base + 1
    W = (1,)
    mat = [[GradedSeries({(k,): a(k) * (xi * yk) ** k for k in range(P)}, W, P) for yk in y] for xi in x]
    dser = det(mat)
    dv = vandermonde(x) * vandermonde(y)
    if is_zero(dv):
        raise DomainError("x and y need pairwise distinct entries")
    return {e - base: c_n * dser.coeff((e,)) / dv for e in range(P)}


def _det_rhs(coef: Callable[[Partition], Scalar], x, y, D: int) -> dict:
    n = len(x)
    tx, ty = power_sums(x, max(D, 1)), power_sums(y, max(D, 1))
    out = {d: Fraction(0) for d in range(D + 1)}
    for lam in enumerate_partitions(D, n):
        out[lam.weight] = out[lam.weight] + coef(lam) * schur_jt(lam, tx) * schur_jt(lam, ty)
    return out


def verify_det_formula(xi: XiSequence, x: Sequence[Scalar], y: Sequence[Scalar], D: int) -> VerificationReport:
    """``c_n det f(x_i y_k) / Delta Delta`` against ``sum exp(sum xi_{h_i} - xi_{n-i}) s_lam(x) s_lam(y)``.

    Grading ``x -> eps x``; ``D`` bounds ``|lam|``.  Also checks the two
    expressions for ``c_n`` against each other and the right side against
    ``tau_hyper`` built from ``r(k) = a_k / a_{k-1}``.
    """
    t0 = time.perf_counter()
    n = len(x)
    if len(y) != n:
        raise ValueError("x and y must have equal length")
    base = n * (n - 1) // 2
    if xi.K < D + base + n:
        raise IndexError(f"xi must cover order {D + base + n}")
    c1 = c_n_from_xi(xi, n)
    c2 = c_n_from_r(xi.r, n)
    lhs = _det_lhs(xi.a, c1, x, y, D)

    def coef(lam):
        c = Fraction(1)
        for i, hi in enumerate(to_h(lam, n), start=1):
            c = c * xi.a(hi) / xi.a(n - i)
        return c

    rhs = _det_rhs(coef, x, y, D)
    tal = _Tally()
    for d, v in lhs.items():
        tal.add(v - rhs.get(d, Fraction(0)), ("degree", d))
    tal.add(c1 - c2, "c_n")
    r = RFunction(lambda k: xi.r(k) if k >= 1 else Fraction(0), label="xi")
    th = evaluate_by_degree(tau_hyper(r, n, D), power_sums(x, max(D, 1)), power_sums(y, max(D, 1)))
    for d in range(D + 1):
        tal.add(th.get((d, d), Fraction(0)) - rhs[d], ("tau_hyper", d))
    return tal.report("det_formula", {"n": n, "D": D, "x": [encode_scalar(v) for v in x],
                                      "y": [encode_scalar(v) for v in y], "a": xi.to_json()[:D + base + 1]}, t0=t0,
                      c_n=encode_scalar(c1))


# -- criterion 9 ------------------------------------------------------------------

def _hyper_coeff(lam: Partition, a_list, b_list, M: int, n: int) -> Scalar:
    H = hook_product(lam)
    num = Fraction(1)
    for a in a_list:
        num = num * rising_factorial(a + M, lam) / H
    for b in b_list:
        den = rising_factorial(b + M, lam)
        if is_zero(den):
            raise DomainError(f"pole: (b + M)_lam vanishes for b={b}, lam={tuple(lam)}")
        num = num * H / den
    p, s = len(a_list), len(b_list)
    num = num * Fraction(1, H) ** (s - p + 1)
    return num * H / rising_factorial(n, lam)


def hyper_pfs_by_degree(a_list, b_list, M_shift: int, X_eigs, Y_eigs, n: int, D: int) -> dict:
    """Degree-``|lam|`` parts of the matrix ``pFs`` (grading ``X -> eps X``)."""
    X_eigs, Y_eigs = list(X_eigs), list(Y_eigs)
    if len(X_eigs) != n or len(Y_eigs) != n:
        raise ValueError("need n eigenvalues for each argument")
    tx, ty = power_sums(X_eigs, max(D, 1)), power_sums(Y_eigs, max(D, 1))
    out = {d: Fraction(0) for d in range(D + 1)}
    for lam in enumerate_partitions(D, n):
        c = _hyper_coeff(lam, a_list, b_list, M_shift, n)
        out[lam.weight] = out[lam.weight] + c * schur_jt(lam, tx) * schur_jt(lam, ty)
    return out


def hyper_pfs(a_list, b_list, M_shift: int, X_eigs, Y_eigs, n: int, D: int) -> Scalar:
    parts = hyper_pfs_by_degree(a_list, b_list, M_shift, X_eigs, Y_eigs, n, D)
    total = Fraction(0)
    for d in sorted(parts):
        total = total + parts[d]
    return total


def _scalar_pfs_coeff(a_list, b_list, k: int) -> Scalar:
    c = Fraction(1, factorial(k))
    for a in a_list:
        c = c * rising_factorial(a, Partition((k,)) if k else Partition())
    for b in b_list:
        c = c / rising_factorial(b, Partition((k,)) if k else Partition())
    return c


def verify_hypergeometric(n: int, D: int, x, y=None, a: Scalar = Fraction(3, 2),
                          a_list=(Fraction(1, 2), Fraction(2)), b_list=(Fraction(3),)) -> VerificationReport:
    """``0F0 = exp Tr X``, ``1F0(a) = det(I-X)^{-a}`` by degree; at ``len(y) == n`` also the det form."""
    t0 = time.perf_counter()
    x = list(x)
    ones = [Fraction(1)] * n
    tal = _Tally()
    f00 = hyper_pfs_by_degree([], [], 0, x, ones, n, D)
    trace = sum(x, Fraction(0))
    for d in range(D + 1):
        tal.add(f00[d] - trace ** d / factorial(d), ("0F0", d))
    f10 = hyper_pfs_by_degree([a], [], 0, x, ones, n, D)
    for d in range(D + 1):
        oracle = Fraction(0)
        for ks in itertools.product(range(d + 1), repeat=n):
            if sum(ks) != d:
                continue
            term = Fraction(1)
            for k, xi in zip(ks, x):
                term = term * _scalar_pfs_coeff([a], [], k) * xi ** k
            oracle = oracle + term
        tal.add(f10[d] - oracle, ("1F0", d))
    if y is not None:
        y = list(y)
        lhs = hyper_pfs_by_degree(list(a_list), list(b_list), n, x, y, n, D)
        a1 = [v + 1 for v in a_list]
        b1 = [v + 1 for v in b_list]

        def r(k):
            num = Fraction(1, k)
            for v in a_list:
                num = num * (k + v)
            for v in b_list:
                num = num / (k + v)
            return num

        rhs = _det_lhs(lambda k: _scalar_pfs_coeff(a1, b1, k), c_n_from_r(r, n), x, y, D)
        for d in range(D + 1):
            tal.add(lhs[d] - rhs[d], ("detF2", d))
        for d in range(-(n * (n - 1) // 2), 0):
            tal.add(rhs[d], ("detF2-shift", d))
    return tal.report("hypergeometric", {"n": n, "D": D, "x": [encode_scalar(v) for v in x],
                                         "y": None if y is None else [encode_scalar(v) for v in y],
                                         "a": encode_scalar(a)}, t0=t0)


# -- criterion 8 ------------------------------------------------------------------

OPERATOR_STARS = (Partition(), Partition((1,)), Partition((2,)), Partition((1, 1)))


def operator_weights(seed: int = 0) -> dict:
    rng = _rng(seed)
    finite = {(h, hp): _rand_frac(rng) for h in range(3) for hp in range(3) if rng.random() < 0.7}
    finite[(0, 0)] = Fraction(1)
    return {"finite": finite_pair_weight(finite), "geometric": geometric_pair_weight(Fraction(1, 2))}


def verify_operator_grid(max_n: int = 2, D: int = 3, q1: Scalar = Fraction(1, 2), q2: Scalar = Fraction(1, 3),
                         seed: int = 0, stars=OPERATOR_STARS) -> VerificationReport:
    t0 = time.perf_counter()
    tal = _Tally()
    for label, pw in operator_weights(seed).items():
        for n in range(1, max_n + 1):
            for ls in stars:
                for lps in stars:
                    if ls.length > n or lps.length > n:
                        continue
                    rep = verify_operator_identity(pw, ls, lps, q1, q2, n, D)
                    for e, v in rep.residual_by_degree.items():
                        tal.add(v, (label, n, tuple(ls), tuple(lps), e))
    return tal.report("operator", {"max_n": max_n, "D": D, "q1": encode_scalar(q1), "q2": encode_scalar(q2),
                                   "seed": seed}, t0=t0)


def verify_operator_complex(n: int = 2, D: int = 3, q: complex = 0.6 * np.exp(0.7j), c: Scalar = Fraction(1, 2),
                            tol: float = 1e-9) -> VerificationReport:
    """Diagonal pair weight with ``q2 = conj(q1)``."""
    t0 = time.perf_counter()
    q = complex(q)
    tal = _Tally(exact=False)
    pw = geometric_pair_weight(c)
    for ls in OPERATOR_STARS:
        for lps in OPERATOR_STARS:
            if ls.length > n or lps.length > n:
                continue
            rep = verify_operator_identity(pw, ls, lps, q, q.conjugate(), n, D, tol=tol)
            for e, v in rep.residual_by_degree.items():
                scale = max(1.0, _mag(rep.lhs.get(e, 0)))
                tal.add(v, (tuple(ls), tuple(lps), e), scale=scale, tol=tol)
    return tal.report("operator_complex", {"n": n, "D": D, "q": [q.real, q.imag], "c": encode_scalar(c)}, tol=tol,
                      t0=t0)


__all__.append("verify_operator_complex")


# -- criterion 10 -----------------------------------------------------------------

def _haar(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    z = (rng.standard_normal((size, n, n)) + 1j * rng.standard_normal((size, n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def _schur_batch(lam: Partition, mats: np.ndarray) -> np.ndarray:
    k = lam.weight
    if k == 0:
        return np.ones(mats.shape[0], dtype=complex)
    t = []
    p = mats
    for m in range(1, k + 1):
        if m > 1:
            p = p @ mats
        t.append(np.trace(p, axis1=1, axis2=2) / m)
    out = np.zeros(mats.shape[0], dtype=complex)
    for alpha, c in schur_monomial_expansion(lam).items():
        term = np.full(mats.shape[0], float(c), dtype=complex)
        for m, e in enumerate(alpha):
            if e:
                term = term * t[m] ** e
        out = out + term
    return out


def mc_haar_check(A_eigs, B_eigs, lam, n: int, samples: int = 100_000, seed: int = 0,
                  chunk: int = 10_000) -> VerificationReport:
    """Monte-Carlo ``E_U s_lam(A U B U^+)`` against ``s_lam(A) s_lam(B) / s_lam(I_n)``."""
    t0 = time.perf_counter()
    lam = Partition(lam)
    if n > 4 or lam.weight > 4:
        raise ValueError("mc_haar_check is limited to n <= 4, |lam| <= 4")
    A = np.diag(np.array([complex(v) for v in A_eigs]))
    B = np.diag(np.array([complex(v) for v in B_eigs]))
    M = max(lam.weight, 1)
    target = (schur_jt(lam, power_sums(list(A_eigs), M)) * schur_jt(lam, power_sums(list(B_eigs), M))
              / schur_jt(lam, power_sums([Fraction(1)] * n, M)))
    target = complex(target)
    sizes = [chunk] * (samples // chunk) + ([samples % chunk] if samples % chunk else [])
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(args):
        size, ss = args
        U = _haar(np.random.default_rng(ss), size, n)
        vals = _schur_batch(lam, A @ U @ B @ np.conj(np.transpose(U, (0, 2, 1))))
        return vals.real.sum(), (vals.real ** 2).sum(), vals.imag.sum()

    workers = int(os.environ.get("SCHUR_TAU_THREADS", "1") or 1)
    jobs = list(zip(sizes, seqs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    si = sum(p[2] for p in parts)
    est = s1 / samples
    var = max(s2 / samples - est ** 2, 0.0) * samples / max(samples - 1, 1)
    se = (var / samples) ** 0.5
    err = abs(est - target.real) + abs(target.imag)
    tol = max(4 * se, 0.02 * abs(target))
    return VerificationReport(
        "mc_haar", {"A": [repr(complex(v)) for v in A_eigs], "B": [repr(complex(v)) for v in B_eigs],
                    "lambda": list(lam), "n": n, "samples": samples, "seed": seed},
        COMPLEX, float(err), float(tol), bool(err <= tol), time.perf_counter() - t0,
        {"estimate": float(est), "estimate_imag": float(si / samples), "target": float(target.real),
         "standard_error": float(se)})


# -- criterion 11 -----------------------------------------------------------------

def verify_quadrature_moments(K: int = 8, tol: float = 1e-8) -> VerificationReport:
    """``general_moments`` for ``V = -|z|^2`` against ``pi m!`` on the diagonal, 0 off it.

    Off-diagonal entries are scaled by ``pi sqrt(k! m!)``.
    """
    t0 = time.perf_counter()
    g = general_moments(lambda z: -np.abs(z) ** 2, K)
    tal = _Tally(exact=False)
    for k in range(K + 1):
        for m in range(K + 1):
            if k == m:
                target = np.pi * factorial(m)
                tal.add(complex(g[k, m]) - target, (k, m), scale=target, tol=tol)
            else:
                scale = np.pi * (factorial(k) * factorial(m)) ** 0.5
                tal.add(complex(g[k, m]), (k, m), scale=scale, tol=tol)
    return tal.report("quadrature_moments", {"K": K, "V": "-|z|^2"}, tol=tol, t0=t0)


# -- angle reduction --------------------------------------------------------------

def _gh_moments_grid(V, nodes: int):
    y, w = np.polynomial.hermite.hermgauss(nodes)
    x = np.sqrt(2.0) * y
    # weight e^{-y^2} is compensated so e^{V} is integrated as given
    wt = w * np.exp(y ** 2) * np.sqrt(2.0) * np.exp(V(x))
    return x, wt


def verify_angle_reduction(xi: XiSequence, V1: Callable, V2: Callable, n: int, D: int, nodes: int = 40,
                           tol: float = 1e-7, quad: QuadratureSpec = QuadratureSpec(epsrel=1e-12)
                           ) -> VerificationReport:
    """Eigenvalue integral ``n! c_n int Delta(a) Delta(b) prod f(a_i b_i) e^{V1(a_i)+V2(b_i)}`` per degree.

    Left: tensor Gauss-Hermite over all ``2n`` eigenvalues with ``f``
    truncated by the grading ``f(eps a b)``.  Right: the Cauchy-Binet
    double series ``(n!)^2 c_n sum_lam prod a_{h_i} det(m1_{n-i+h_j})
    det(m2_{n-i+h_j})`` with adaptive 1-D quadrature moments.  Degree is
    ``|lam|``.
    """
    t0 = time.perf_counter()
    if n > 2:
        raise ValueError("angle reduction check supports n <= 2")
    base = n * (n - 1) // 2
    E = D + base
    if xi.K < E:
        raise IndexError(f"xi must cover order {E}")
    c_n = complex(c_n_from_xi(xi, n))
    a = [complex(xi.a(k)).real for k in range(E + 1)]
    nf = factorial(n)

    x1, w1 = _gh_moments_grid(V1, nodes)
    x2, w2 = _gh_moments_grid(V2, nodes)
    grids = np.meshgrid(*([x1] * n + [x2] * n), indexing="ij", sparse=True)
    wgrid = np.ones(())
    for i, w in enumerate([w1] * n + [w2] * n):
        shape = [1] * (2 * n)
        shape[i] = len(w)
        wgrid = wgrid * w.reshape(shape)
    av, bv = grids[:n], grids[n:]
    dv = np.ones(())
    for i in range(n):
        for j in range(i + 1, n):
            dv = dv * (av[i] - av[j]) * (bv[i] - bv[j])
    zs = [av[i] * bv[i] for i in range(n)]
    # coefficients of eps^e in prod_i f(eps z_i)
    poly = [np.ones(())]
    for z in zs:
        nxt = [np.zeros(()) for _ in range(E + 1)]
        powers = [np.ones(())]
        for k in range(1, E + 1):
            powers.append(powers[-1] * z)
        for e, pe in enumerate(poly):
            for k in range(E + 1 - e):
                nxt[e + k] = nxt[e + k] + pe * a[k] * powers[k]
        poly = nxt
    left = {e - base: float(nf * c_n.real * np.sum(dv * poly[e] * wgrid)) for e in range(E + 1)}

    top = E + n
    m1 = [_quad(lambda x, j=j: x ** j * np.exp(V1(x)), -np.inf, np.inf, quad) for j in range(top + 1)]
    m2 = [_quad(lambda x, j=j: x ** j * np.exp(V2(x)), -np.inf, np.inf, quad) for j in range(top + 1)]
    right = {d: 0.0 for d in range(-base, D + 1)}
    for lam in enumerate_partitions(D, n):
        h = to_h(lam, n)
        c = 1.0
        for hi in h:
            c *= a[hi]
        d1 = det([[m1[n - i + hj] for hj in h] for i in range(1, n + 1)])
        d2 = det([[m2[n - i + hj] for hj in h] for i in range(1, n + 1)])
        right[lam.weight] += nf * nf * c_n.real * c * d1 * d2
    tal = _Tally(exact=False)
    scale = max(abs(v) for v in right.values()) or 1.0
    for d in range(-base, D + 1):
        tal.add(left[d] - right[d], d, scale=max(abs(right[d]), 1e-3 * scale), tol=tol)
    return tal.report("angle_reduction", {"n": n, "D": D, "nodes": nodes, "a": xi.to_json()[:E + 1]}, tol=tol,
                      t0=t0, left={str(k): v for k, v in left.items()}, right={str(k): v for k, v in right.items()})


# -- suite ------------------------------------------------------------------------

def _random_coupling(rng, M: int) -> CouplingVector:
    return CouplingVector([_rand_frac(rng) for _ in range(M)])


def _xi_families(K: int) -> dict:
    return {
        "1": XiSequence([Fraction(1)] * (K + 1)),
        "k!": XiSequence([Fraction(factorial(k)) for k in range(K + 1)]),
        "1/k!": XiSequence([Fraction(1, factorial(k)) for k in range(K + 1)]),
    }


def verify_all(max_weight: int = 4, max_n: int = 3, field: str = "all", seed: int = 0,
               mc_samples: int = 100_000, include: Sequence[str] | None = None) -> SuiteReport:
    """Run the default grid.  ``field`` selects exact checks, floating checks, or both."""
    if field not in ("exact", "complex", "all"):
        raise ValueError("field must be exact, complex or all")
    rng = _rng(seed)
    exact = field in ("exact", "all")
    floating = field in ("complex", "all")
    D = max_weight
    want = (lambda name: include is None or name in include)
    reps: list = []
    if exact:
        if want("closed_forms"):
            reps.append(verify_closed_forms(max(D, 6)))
        if want("cauchy"):
            for _ in range(5):
                g, gp = _random_coupling(rng, 5), _random_coupling(rng, 5)
                reps.append(verify_cauchy_littlewood(g, gp, 5))
        if want("gaussian"):
            for n in range(1, max_n + 1):
                reps.append(verify_gaussian_recovery(n, max(D, 5)))
        if want("lattice"):
            for kind in "ABCDE":
                for n in range(1, max_n + 1):
                    reps.append(verify_lattice_degrees(kind, n, D, seed=seed + n))
        if want("toda"):
            reps.append(verify_toda(tuple(range(1, max_n + 1)), 6))
        if want("duality"):
            reps.append(verify_duality_grid(max_n, D))
        if want("det"):
            K = 6 + max_n * max_n
            for label, xi in _xi_families(K).items():
                for n in range(1, max_n + 1):
                    x = [Fraction(i + 1, i + 2) for i in range(n)]
                    y = [Fraction(2 * i + 1, 3) for i in range(n)]
                    rep = verify_det_formula(xi, x, y, 6)
                    rep.params["family"] = label
                    reps.append(rep)
        if want("operator"):
            reps.append(verify_operator_grid(min(max_n, 2), 3, seed=seed))
        if want("hypergeometric"):
            for n in range(1, max_n + 1):
                x = [Fraction(1, i + 2) for i in range(n)]
                y = [Fraction(2, i + 3) for i in range(n)] if n == 2 else None
                reps.append(verify_hypergeometric(n, 5, x, y))
    if floating:
        if want("operator"):
            reps.append(verify_operator_complex())
        if want("mc"):
            for lam in ((1,), (2,), (1, 1)):
                reps.append(mc_haar_check([1, 2], [1, 3], lam, 2, mc_samples, seed))
        if want("quadrature"):
            reps.append(verify_quadrature_moments())
        if want("angle"):
            xi = _xi_families(8)["1/k!"]
            reps.append(verify_angle_reduction(xi, lambda x: -x ** 2 / 2 + x / 5,
                                               lambda x: -x ** 2 / 2 - x ** 4 / 40, 2, 3))
    return SuiteReport(reps, {"max_weight": max_weight, "max_n": max_n, "field": field, "seed": seed,
                              "mc_samples": mc_samples})
