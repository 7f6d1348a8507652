"""Discrete matrix-model sums over the ``h``-lattice ``{0..H}^n``.

Every model reduces to three ingredients per side: a Vandermonde map
``v(h)`` (``h`` or ``q^h``), a slot-independent site weight ``w(h)``, and a
pair weight ``p(h, h')`` coupling the sides.  The unrestricted sum

    sum_{h, h'} Delta(v1(h)) Delta(v2(h')) prod_i w1(h_i) w2(h'_i) p(h_i, h'_i)

equals ``n!`` times the cone sum (``h_1 > ... > h_n``) with ``det p``.
``value`` is always the unrestricted sum; ``Z = prefactor * value``.

Row-dependent normalizers from the closed forms (``Gamma(a-i+1)``,
``(q^{a-i+1}; q)``) are divided out of the site weights and land in the
prefactor, so ``w`` depends only on ``h``.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .moments import MomentTable, PairWeight, XiSequence
from .partitions import pochhammer, q_pochhammer_m
from .scalars import DomainError, Scalar, det, encode_scalar, is_zero, qpow, vandermonde
from .schur import CouplingVector, SpecializationKind, specialize

__all__ = [
    "LatticeModelSpec",
    "LatticeSumResult",
    "CutoffError",
    "cone_sum",
    "full_sum",
    "model_weights",
    "kontsevich_sum",
    "z_discr",
    "staircase_constant",
    "model_times",
]

KINDS = ("A", "B", "C", "D", "E", "GENERIC")


class CutoffError(ValueError):
    """The cutoff ``H`` cannot resolve the requested degree."""


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SCHUR_TAU_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class LatticeModelSpec:
    kind: str
    n: int
    H: int
    w1: Callable[[int], Scalar]
    w2: Callable[[int], Scalar] | None
    v1: Callable[[int], Scalar]
    v2: Callable[[int], Scalar] | None
    pair: Callable[[int, int], Scalar] | None
    diagonal: bool = False
    prefactor: Scalar = Fraction(1)
    # single-Delta models: slot factors y_i^{h_i}
    slots: Sequence[Scalar] | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.n < 1 or self.H < 0:
            raise ValueError("need n >= 1 and H >= 0")

    @property
    def single(self) -> bool:
        return self.slots is not None

    def check_degree(self, D: int) -> None:
        if self.H < D + self.n - 1:
            raise CutoffError(f"H={self.H} < D+n-1={D + self.n - 1}: degree {D} slice incomplete")


@dataclass
class LatticeSumResult:
    value: Scalar
    prefactor: Scalar
    breakdown: dict
    n: int
    H: int
    kind: str

    def z(self) -> Scalar:
        return self.prefactor * self.value

    def z_by_degree(self) -> dict:
        return {k: self.prefactor * v for k, v in self.breakdown.items()}

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "H": self.H,
            "value": encode_scalar(self.value),
            "prefactor": encode_scalar(self.prefactor),
            "per_degree": [
                {"degree": list(k), "value": encode_scalar(v)} for k, v in sorted(self.breakdown.items())
            ],
        }


def _acc(d: dict, key, val) -> None:
    d[key] = d[key] + val if key in d else val


def _cones(n: int, H: int):
    for c in itertools.combinations(range(H, -1, -1), n):
        yield c


def _side_table(spec: LatticeModelSpec, w, v):
    """Per cone point: Delta(v(h)) * prod w(h_i)."""
    out = {}
    for h in _cones(spec.n, spec.H):
        val = vandermonde([v(x) for x in h])
        for x in h:
            val = val * w(x)
        out[h] = val
    return out


def _merge(parts: list[dict]) -> dict:
    # fixed order keeps floating reductions reproducible
    out: dict = {}
    for p in parts:
        for k in sorted(p):
            _acc(out, k, p[k])
    return out


def cone_sum(spec: LatticeModelSpec, compare_degree: int | None = None) -> LatticeSumResult:
    """Sum over the cone(s) with determinant pair coupling, times ``n!``."""
    if compare_degree is not None:
        spec.check_degree(compare_degree)
    n = spec.n
    base = n * (n - 1) // 2
    nf = factorial(n)
    if spec.single:
        t1 = _side_table(spec, spec.w1, spec.v1)
        br: dict = {}
        for h, a in t1.items():
            # antisymmetrizing prod y_i^{h_i} gives det(y_i^{h_j})
            val = a * det([[y ** x for x in h] for y in spec.slots])
            _acc(br, (sum(h) - base,), val)
        return _result(spec, br)
    t1 = _side_table(spec, spec.w1, spec.v1)
    if spec.diagonal:
        t2 = _side_table(spec, spec.w2, spec.v2)
        br = {}
        for h, a in t1.items():
            val = a * t2[h]
            for x in h:
                val = val * spec.pair(x, x)
            d = sum(h) - base
            _acc(br, (d, d), nf * val)
        return _result(spec, br)
    t2 = _side_table(spec, spec.w2, spec.v2)
    keys2 = list(t2)

    def chunk(hs):
        out: dict = {}
        for h in hs:
            a = t1[h]
            d1 = sum(h) - base
            for hp in keys2:
                m = det([[spec.pair(x, y) for y in hp] for x in h])
                if isinstance(m, (int, Fraction)) and m == 0:
                    continue
                _acc(out, (d1, sum(hp) - base), nf * a * t2[hp] * m)
        return out

    keys1 = list(t1)
    workers = _threads()
    if workers > 1 and len(keys1) > 1:
        size = -(-len(keys1) // workers)
        slices = [keys1[i:i + size] for i in range(0, len(keys1), size)]
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(chunk, slices))
    else:
        parts = [chunk(keys1)]
    return _result(spec, _merge(parts))


def full_sum(spec: LatticeModelSpec) -> LatticeSumResult:
    """Unrestricted mixed-radix sum over ``{0..H}^n`` (and ``h'`` for double models)."""
    n = spec.n
    base = n * (n - 1) // 2
    grid = list(itertools.product(range(spec.H + 1), repeat=n))
    br: dict = {}
    if spec.single:
        for h in grid:
            val = vandermonde([spec.v1(x) for x in h])
            if is_zero(val):
                continue
            for x, y in zip(h, spec.slots):
                val = val * spec.w1(x) * y ** x
            _acc(br, (sum(h) - base,), val)
        return _result(spec, br)
    if spec.diagonal:
        for h in grid:
            val = vandermonde([spec.v1(x) for x in h]) * vandermonde([spec.v2(x) for x in h])
            if is_zero(val):
                continue
            for x in h:
                val = val * spec.w1(x) * spec.w2(x) * spec.pair(x, x)
            d = sum(h) - base
            _acc(br, (d, d), val)
        return _result(spec, br)
    for h in grid:
        a = vandermonde([spec.v1(x) for x in h])
        if is_zero(a):
            continue
        for x in h:
            a = a * spec.w1(x)
        for hp in grid:
            b = vandermonde([spec.v2(x) for x in hp])
            if is_zero(b):
                continue
            val = a * b
            for x, y in zip(h, hp):
                val = val * spec.w2(y) * spec.pair(x, y)
            _acc(br, (sum(h) - base, sum(hp) - base), val)
    return _result(spec, br)


def _result(spec: LatticeModelSpec, br: dict) -> LatticeSumResult:
    br = {k: v for k, v in br.items() if not (isinstance(v, (int, Fraction)) and v == 0)}
    total = Fraction(0)
    for k in sorted(br):
        total = total + br[k]
    return LatticeSumResult(total, spec.prefactor, dict(sorted(br.items())), spec.n, spec.H, spec.kind)


# -- model constructors ------------------------------------------------------------

def staircase_constant(n: int, q: Scalar) -> Scalar:
    """``C_n(q)`` with ``q^{n(lam)}/H_lam(q) = C_n(q) Delta(q^h) / prod (q;q)_{h_i}``."""
    e = sum((j - 1) * (n - j) for j in range(1, n + 1))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * qpow(q, -e)


def _pair_from(moments) -> tuple[Callable, bool]:
    if isinstance(moments, MomentTable):
        return (lambda h, hp: moments[h, hp]), moments.diagonal
    if isinstance(moments, PairWeight):
        return moments, moments.diagonal
    if isinstance(moments, XiSequence):
        return (lambda h, hp: moments.a(h) if h == hp else Fraction(0)), True
    if callable(moments):
        return moments, False
    raise TypeError("moments must be a MomentTable, PairWeight, XiSequence or callable")


def _nonzero(val, what: str):
    if is_zero(val):
        raise DomainError(f"{what} vanishes: parameter sits on a pole")
    return val


def model_weights(kind: str, params: dict, n: int, H: int) -> LatticeModelSpec:
    """Site/pair weights for kinds A-E.

    params: ``moments`` (table/pair weight/xi) plus
      A: ``t1``, ``t1p``;  B: ``x``, ``y``, ``a``, ``ap``;  C: ``x``, ``y``, ``q1``, ``q2``;
      D: ``x``, ``y``, ``a``, ``ap``, ``q1``, ``q2``;  E: ``a`` (None for the ``a -> inf`` form), ``q``, ``y`` (list).
    """
    kind = kind.upper()
    pair, diag = _pair_from(params["moments"]) if "moments" in params else (None, False)
    nf = factorial(n)
    if kind == "A":
        t1, t1p = params["t1"], params["t1p"]
        fa = [Fraction(1, factorial(h)) for h in range(H + 1)]
        pre = 1 / (t1 * t1p) ** ((n * n - n) // 2)
        return LatticeModelSpec("A", n, H, lambda h: t1 ** h * fa[h], lambda h: t1p ** h * fa[h],
                                lambda h: h, lambda h: h, pair, diag, pre, params=params)
    if kind == "B":
        x, y, a, ap = params["x"], params["y"], params["a"], params["ap"]
        pre = 1 / (x * y) ** ((n * n - n) // 2)
        for i in range(1, n + 1):
            pre = pre / _nonzero(pochhammer(a - n + 1, n - i) * pochhammer(ap - n + 1, n - i), "Gamma ratio")
        w1 = lambda h: pochhammer(a - n + 1, h) * x ** h / factorial(h)
        w2 = lambda h: pochhammer(ap - n + 1, h) * y ** h / factorial(h)
        return LatticeModelSpec("B", n, H, w1, w2, lambda h: h, lambda h: h, pair, diag, pre, params=params)
    if kind == "C":
        x, y, q1, q2 = params["x"], params["y"], params["q1"], params["q2"]
        pre = staircase_constant(n, q1) * staircase_constant(n, q2) / (x * y) ** ((n * n - n) // 2)
        w1 = lambda h: x ** h / _nonzero(q_pochhammer_m(q1, q1, h), "(q;q)_h")
        w2 = lambda h: y ** h / _nonzero(q_pochhammer_m(q2, q2, h), "(q;q)_h")
        return LatticeModelSpec("C", n, H, w1, w2, lambda h: q1 ** h, lambda h: q2 ** h, pair, diag, pre,
                                params=params)
    if kind == "D":
        x, y, a, ap, q1, q2 = (params[k] for k in ("x", "y", "a", "ap", "q1", "q2"))
        u1 = qpow(q1, a - n + 1)
        u2 = qpow(q2, ap - n + 1)
        pre = staircase_constant(n, q1) * staircase_constant(n, q2) / (x * y) ** ((n * n - n) // 2)
        for i in range(1, n + 1):
            pre = pre / _nonzero(q_pochhammer_m(u1, q1, n - i) * q_pochhammer_m(u2, q2, n - i), "q-Pochhammer")
        w1 = lambda h: q_pochhammer_m(u1, q1, h) * x ** h / _nonzero(q_pochhammer_m(q1, q1, h), "(q;q)_h")
        w2 = lambda h: q_pochhammer_m(u2, q2, h) * y ** h / _nonzero(q_pochhammer_m(q2, q2, h), "(q;q)_h")
        return LatticeModelSpec("D", n, H, w1, w2, lambda h: q1 ** h, lambda h: q2 ** h, pair, diag, pre,
                                params=params)
    if kind == "E":
        a, q, y = params.get("a"), params["q"], list(params["y"])
        if len(y) != n:
            raise ValueError("need exactly n values y_i")
        if any(is_zero(v) for v in y) or is_zero(vandermonde(y)):
            raise DomainError("y must be nonzero and pairwise distinct")
        if pair is None or not diag:
            raise ValueError("kind E is axial: needs diagonal moments")
        u = None if a is None else qpow(q, a - n + 1)
        pre = nf * staircase_constant(n, q)
        if u is not None:
            for i in range(1, n + 1):
                pre = pre / _nonzero(q_pochhammer_m(u, q, n - i), "q-Pochhammer")

        def w(h):
            num = Fraction(1) if u is None else q_pochhammer_m(u, q, h)
            return num * pair(h, h) / _nonzero(q_pochhammer_m(q, q, h), "(q;q)_h")

        return LatticeModelSpec("E", n, H, w, None, lambda h: q ** h, None, None, True, pre, slots=y,
                                params=params)
    raise ValueError(f"model_weights has no constructor for kind {kind!r}")


def model_times(kind: str, params: dict, M: int) -> tuple[CouplingVector, CouplingVector | None]:
    """Coupling vectors whose Schur expansion the lattice model reproduces."""
    kind = kind.upper()
    if kind == "A":
        return (specialize(SpecializationKind.infty(), M).scaled(params["t1"]),
                specialize(SpecializationKind.infty(), M).scaled(params["t1p"]))
    if kind == "B":
        return (specialize(SpecializationKind.a_1(params["a"]), M).scaled(params["x"]),
                specialize(SpecializationKind.a_1(params["ap"]), M).scaled(params["y"]))
    if kind == "C":
        return (specialize(SpecializationKind.infty_q(params["q1"]), M).scaled(params["x"]),
                specialize(SpecializationKind.infty_q(params["q2"]), M).scaled(params["y"]))
    if kind == "D":
        return (specialize(SpecializationKind.a_q(params["a"], params["q1"]), M).scaled(params["x"]),
                specialize(SpecializationKind.a_q(params["ap"], params["q2"]), M).scaled(params["y"]))
    if kind == "E":
        a = params.get("a")
        k = SpecializationKind.infty_q(params["q"]) if a is None else SpecializationKind.a_q(a, params["q"])
        return specialize(k, M), None
    raise ValueError(f"no specialization for kind {kind!r}")


def kontsevich_sum(xi: XiSequence, a: Scalar | None, q: Scalar, y: Sequence[Scalar], n: int, H: int) -> LatticeSumResult:
    """``Z Delta(y) / g_00(n)`` for the axial model at ``t(a, q)`` and ``t'(y)``.

    Normalized like the xi parametrization: ``z()`` equals
    ``n! sum_lam (prod a_{h_i}/a_{n-i}) s_lam(t(a,q)) s_lam(y) Delta(y)``.

    The antisymmetrized form sums over all ``h`` in ``{0..H}^n`` (not only the
    cone): ``sum Delta(q^h) prod phi(h_i) a_{h_i} y_i^{h_i}``.
    """
    if H > xi.K:
        raise IndexError(f"xi must cover the cutoff H={H}")
    spec = model_weights("E", {"a": a, "q": q, "y": y, "moments": xi}, n, H)
    for i in range(1, n + 1):
        spec.prefactor = spec.prefactor / xi.a(n - i)
    return full_sum(spec)


def z_discr(pair: PairWeight | Callable, tt, ttp, q1: Scalar, q2: Scalar, n: int, H: int,
            exp=None) -> Scalar:
    """``(1/n!) sum_{h,h'} Delta(q1^h) Delta(q2^h') prod e^{xi(tt,q1^h_i) + xi(tt',q2^h'_i)} p(h_i,h'_i)``.

    Terms with a repeated pair ``(h_i, h'_i)`` vanish, so the ``1/n!`` is
    absorbed by summing over unordered sets of distinct support pairs.
    ``tt`` entries may be :class:`GradedSeries`; then ``exp`` is exact.
    """
    from .moments import _xi_sum
    from .scalars import exp_scalar

    expf = exp or exp_scalar
    tt = list(getattr(tt, "values", tt))
    ttp = list(getattr(ttp, "values", ttp))
    diag = getattr(pair, "diagonal", False)
    cand = [(h, h) for h in range(H + 1)] if diag else [(h, hp) for h in range(H + 1) for hp in range(H + 1)]
    support = []
    for h, hp in cand:
        p = pair(h, hp)
        if isinstance(p, (int, Fraction)) and p == 0:
            continue
        e1 = expf(_xi_sum(tt, q1 ** h)) if tt else Fraction(1)
        e2 = expf(_xi_sum(ttp, q2 ** hp)) if ttp else Fraction(1)
        support.append((h, hp, e1 * e2 * p))
    total = Fraction(0)
    for combo in itertools.combinations(support, n):
        hs = [c[0] for c in combo]
        hps = [c[1] for c in combo]
        dv = vandermonde([q1 ** h for h in hs]) * vandermonde([q2 ** h for h in hps])
        if is_zero(dv):
            continue
        term = dv
        for c in combo:
            term = term * c[2]
        total = total + term
    return total
