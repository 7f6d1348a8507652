"""Double Schur series of tau functions.

``SchurSeries`` holds ``c[(lam, lam')]`` normalized so that the vacuum
coefficient is 1; the physical value is ``prefactor * pi**pi_power *
sum c s_lam(t) s_lam'(t')``.  Keys cover the whole admissible grid
``|lam|, |lam'| <= D``, ``l <= max_length``; diagonal series store only
``lam == lam'`` keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping

from .moments import MomentTable, PiScalar, XiSequence
from .partitions import (
    FrobeniusCoords,
    Partition,
    content_product,
    enumerate_partitions,
    frobenius,
    from_frobenius,
    hook_product,
    q_pochhammer_m,
    to_h,
)
from .scalars import Scalar, TruncationError, det, encode_scalar, is_zero
from .schur import CouplingVector, elementary_schur, schur_jt
from .series import GradedSeries

__all__ = [
    "SchurSeries",
    "RFunction",
    "TableTooSmallError",
    "coeff_det",
    "z_expand",
    "tau_hyper",
    "z_axial",
    "evaluate",
    "tau_t1_series",
    "toda_residual",
    "frobenius_resum",
    "FrobeniusTerm",
]


class TableTooSmallError(IndexError):
    """The moment table does not reach the indices a determinant needs."""


@dataclass
class SchurSeries:
    coeffs: dict
    n: int
    D: int
    max_length: int
    diagonal: bool = False
    prefactor: Scalar = Fraction(1)
    pi_power: int = 0
    source: dict = field(default_factory=dict)

    def coeff(self, lam, lamp=None) -> Scalar:
        lam = Partition(lam)
        lamp = lam if lamp is None else Partition(lamp)
        if lam.weight > self.D or lamp.weight > self.D:
            raise TruncationError("partition weight beyond the series truncation")
        return self.coeffs.get((lam, lamp), Fraction(0))

    def keys(self) -> list:
        return list(self.coeffs)

    def raw(self, lam, lamp=None) -> Scalar:
        """Coefficient including the prefactor (pi unit left implicit)."""
        return self.prefactor * self.coeff(lam, lamp)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "D": self.D,
            "max_length": self.max_length,
            "diagonal": self.diagonal,
            "prefactor": encode_scalar(self.prefactor),
            "pi_power": self.pi_power,
            "source": self.source,
            "terms": [
                {"lambda": list(a), "lambda_prime": list(b), "coeff": encode_scalar(c)}
                for (a, b), c in self.coeffs.items()
            ],
        }


@dataclass(frozen=True)
class RFunction:
    func: Callable[[int], Scalar]
    semi_infinite: bool = True
    label: str = "r"

    def __post_init__(self):
        if self.semi_infinite and not is_zero(self.func(0)):
            raise ValueError("a semi-infinite r must satisfy r(0) = 0")

    def __call__(self, k: int) -> Scalar:
        return self.func(k)


def coeff_det(g: MomentTable, lam, lamp, n: int):
    """``det(g_{h_i h'_j})``; a :class:`PiScalar` when the table carries the pi unit."""
    h = to_h(Partition(lam), n)
    hp = to_h(Partition(lamp), n)
    top = max(h[0] if h else 0, hp[0] if hp else 0)
    if top > g.K:
        raise TableTooSmallError(f"needs g up to index {top}, table has K={g.K}")
    value = det([[g[a, b] for b in hp] for a in h])
    return PiScalar(value, n) if g.pi_factor else value


def _det_value(g: MomentTable, h, hp) -> Scalar:
    return det([[g[a, b] for b in hp] for a in h])


def z_expand(g: MomentTable, n: int, D: int) -> SchurSeries:
    """Coefficients ``n! det(g_{h_i h'_j})`` normalized by the vacuum term."""
    if n < 1:
        raise ValueError("n must be positive")
    if D + n - 1 > g.K:
        raise TableTooSmallError(f"needs g up to index {D + n - 1}, table has K={g.K}")
    parts = list(enumerate_partitions(D, n))
    hs = {lam: to_h(lam, n) for lam in parts}
    vac = _det_value(g, hs[Partition()], hs[Partition()])
    normalize = not is_zero(vac)
    scale = vac if normalize else Fraction(1)
    coeffs = {}
    for a in parts:
        for b in parts:
            if g.diagonal and a != b:
                continue
            coeffs[(a, b)] = _det_value(g, hs[a], hs[b]) / scale
    return SchurSeries(
        coeffs, n=n, D=D, max_length=n, diagonal=g.diagonal,
        prefactor=factorial(n) * scale, pi_power=n if g.pi_factor else 0,
        source={"moments": g.source, "normalized": normalize},
    )


def tau_hyper(r: RFunction, n: int, D: int) -> SchurSeries:
    coeffs = {}
    for lam in enumerate_partitions(D, D):
        coeffs[(lam, lam)] = content_product(r, n, lam)
    return SchurSeries(coeffs, n=n, D=D, max_length=D, diagonal=True, source={"r": r.label})


def z_axial(xi: XiSequence, n: int, D: int) -> SchurSeries:
    """``c_lam = prod_i a_{h_i} / a_{n-i}``; prefactor ``n! prod_i a_{n-i}``."""
    if n + D - 1 > xi.K:
        raise IndexError(f"xi must cover index {n + D - 1}")
    coeffs = {}
    for lam in enumerate_partitions(D, n):
        c = Fraction(1)
        for i, p in enumerate(lam, start=1):
            c = c * xi.a(n - i + p) / xi.a(n - i)
        coeffs[(lam, lam)] = c
    pre = Fraction(factorial(n))
    for i in range(1, n + 1):
        pre = pre * xi.a(n - i)
    return SchurSeries(coeffs, n=n, D=D, max_length=n, diagonal=True, prefactor=pre, source={"xi": "axial"})


def evaluate(series: SchurSeries, t: CouplingVector, tp: CouplingVector) -> Scalar:
    """Normalized ``sum c s_lam(t) s_lam'(t')`` over the stored keys."""
    if t.M < series.D or tp.M < series.D:
        raise TruncationError(f"coupling vectors must reach order D={series.D}")
    h1 = elementary_schur(t, series.D)
    h2 = elementary_schur(tp, series.D)
    cache1: dict = {}
    cache2: dict = {}
    total = Fraction(0)
    for (a, b), c in series.coeffs.items():
        if isinstance(c, (int, Fraction)) and c == 0:
            continue
        if a not in cache1:
            cache1[a] = schur_jt(a, t, h1)
        if b not in cache2:
            cache2[b] = schur_jt(b, tp, h2)
        total = total + c * cache1[a] * cache2[b]
    return total


def evaluate_by_degree(series: SchurSeries, t: CouplingVector, tp: CouplingVector) -> dict:
    """Normalized sum split by ``(|lam|, |lam'|)``."""
    h1 = elementary_schur(t, series.D)
    h2 = elementary_schur(tp, series.D)
    out: dict = {}
    for (a, b), c in series.coeffs.items():
        key = (a.weight, b.weight)
        term = c * schur_jt(a, t, h1) * schur_jt(b, tp, h2)
        out[key] = out[key] + term if key in out else term
    return out


__all__.append("evaluate_by_degree")


# -- Toda ------------------------------------------------------------------------

def tau_t1_series(r: Callable[[int], Scalar], k: int, prec: int) -> GradedSeries:
    """``tau_r(k)`` restricted to ``(t_1, t_1')``: ``sum r_lam(k) (t_1 t_1')^{|lam|} / H_lam^2``."""
    coeffs = {}
    for lam in enumerate_partitions(prec // 2, prec // 2):
        d = lam.weight
        c = content_product(r, k, lam) / Fraction(hook_product(lam) ** 2)
        coeffs[(d, d)] = coeffs.get((d, d), Fraction(0)) + c
    return GradedSeries(coeffs, (1, 1), prec)


def toda_residual(r, n: int, D: int) -> GradedSeries:
    """``d_1 d_1' phi_n - r(n) e^{phi_{n-1} - phi_n} + r(n+1) e^{phi_n - phi_{n+1}}``.

    ``phi_k = -log(tau(k+1) / tau(k))``.  Every coefficient of total degree
    ``<= D - 2`` must vanish; nothing beyond that is meaningful.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    taus = {k: tau_t1_series(r, k, D) for k in range(n - 1, n + 3)}
    for k, tk in taus.items():
        if is_zero(tk.constant_term()):
            raise ZeroDivisionError(f"tau({k}) has vanishing constant term")
    phi = {k: -(taus[k + 1] / taus[k]).log() for k in range(n - 1, n + 2)}
    lhs = phi[n].deriv(0).deriv(1)
    left = _exp_shifted(phi[n - 1] - phi[n])
    right = _exp_shifted(phi[n] - phi[n + 1])
    res = lhs - r(n) * left + r(n + 1) * right
    return res.truncate(D - 2)


def _exp_shifted(s: GradedSeries) -> GradedSeries:
    """``exp`` allowing a constant term ``c``: ``e^c exp(s - c)``; exact only if ``c == 0``."""
    c = s.constant_term()
    if not is_zero(c):
        raise ValueError("exponent has a nonzero constant term; exact exp unavailable")
    return s.exp()


# -- Frobenius re-summation ------------------------------------------------------

@dataclass(frozen=True)
class FrobeniusTerm:
    coords: FrobeniusCoords
    partition: Partition
    coeff: Scalar
    t_infty_factor: Scalar
    q_factor: Scalar | None


def _frobenius_coords(D: int, n: int) -> Iterable[FrobeniusCoords]:
    for lam in enumerate_partitions(D, n):
        fc = frobenius(lam)
        if fc.beta and fc.beta[0] >= n:
            continue
        yield fc


def frobenius_resum(xi: XiSequence, n: int, D: int, q: Scalar | None = None) -> list[FrobeniusTerm]:
    """Axial series indexed by ``(alpha|beta)`` with ``beta_1 < n``.

    Each term carries ``exp(sum xi_{n+alpha_i} - xi_{n-beta_i-1})`` and the
    Frobenius forms of ``s_lam(t_inf)`` and, when ``q`` is given, of
    ``s_lam(t(inf, q))``.
    """
    out = []
    for fc in _frobenius_coords(D, n):
        al, be = fc.alpha, fc.beta
        k = len(al)
        c = Fraction(1)
        for a, b in zip(al, be):
            c = c * xi.a(n + a) / xi.a(n - b - 1)
        num = Fraction(1)
        den = Fraction(1)
        for i in range(k):
            den *= factorial(al[i]) * factorial(be[i])
            for j in range(k):
                den *= al[i] + be[j] + 1
                if i < j:
                    num *= (al[i] - al[j]) * (be[i] - be[j])
        tinf = num / den
        qf = None
        if q is not None:
            qnum = Fraction(1)
            qden = Fraction(1)
            for i in range(k):
                qden = qden * q_pochhammer_m(q, q, al[i]) * q_pochhammer_m(q, q, be[i])
                for j in range(k):
                    qden = qden * (q ** (-be[i]) - q ** (al[j] + 1))
                    if i < j:
                        qnum = qnum * (q ** (al[i] + 1) - q ** (al[j] + 1)) * (q ** (-be[j]) - q ** (-be[i]))
            # the bare Frobenius product misses q^{sum beta_i(beta_i-1)/2} against q^{n(lam)}/H_lam(q)
            qf = qnum / qden * q ** sum(b * (b - 1) // 2 for b in be)
        out.append(FrobeniusTerm(fc, from_frobenius(fc), c, tinf, qf))
    return out
