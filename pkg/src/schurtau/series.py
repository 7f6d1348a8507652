"""Truncated multivariate power series with weighted grading.

A :class:`GradedSeries` stores coefficients of monomials ``x^alpha`` whose
weighted degree ``sum(w_i * alpha_i)`` is at most ``prec``.  Everything up to
``prec`` is exact; nothing beyond it is known.  Multiplication keeps the
smaller precision, differentiation in a variable of weight ``w`` lowers it by
``w``.  This is the single truncation semantics used for identity checks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .scalars import Scalar, TruncationError, is_zero

Monomial = tuple[int, ...]


class GradedSeries:
    __slots__ = ("weights", "prec", "coeffs")

    def __init__(self, coeffs: Mapping[Monomial, Scalar], weights: Sequence[int], prec: int):
        self.weights = tuple(int(w) for w in weights)
        if any(w <= 0 for w in self.weights):
            raise ValueError("grading weights must be positive")
        self.prec = int(prec)
        clean = {}
        for mono, c in coeffs.items():
            mono = tuple(mono)
            if len(mono) != len(self.weights):
                raise ValueError("monomial arity does not match the number of variables")
            if isinstance(c, (int, Fraction)) and c == 0:
                continue
            if self.degree_of(mono) <= self.prec:
                clean[mono] = c
        self.coeffs = clean

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, c: Scalar, weights: Sequence[int], prec: int) -> "GradedSeries":
        return cls({(0,) * len(weights): c}, weights, prec)

    @classmethod
    def variable(cls, index: int, weights: Sequence[int], prec: int, coeff: Scalar = 1) -> "GradedSeries":
        mono = [0] * len(weights)
        mono[index] = 1
        return cls({tuple(mono): Fraction(coeff) if isinstance(coeff, int) else coeff}, weights, prec)

    @classmethod
    def variables(cls, weights: Sequence[int], prec: int) -> list["GradedSeries"]:
        return [cls.variable(i, weights, prec) for i in range(len(weights))]

    @classmethod
    def univariate(cls, coefficients: Sequence[Scalar], prec: int | None = None) -> "GradedSeries":
        if prec is None:
            prec = len(coefficients) - 1
        return cls({(k,): c for k, c in enumerate(coefficients)}, (1,), prec)

    # basic queries -------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.weights)

    def degree_of(self, mono: Monomial) -> int:
        return sum(w * a for w, a in zip(self.weights, mono))

    def coeff(self, mono: Monomial | int) -> Scalar:
        if isinstance(mono, int):
            mono = (mono,)
        mono = tuple(mono)
        if self.degree_of(mono) > self.prec:
            raise TruncationError(f"monomial {mono} lies beyond precision {self.prec}")
        return self.coeffs.get(mono, Fraction(0))

    def constant_term(self) -> Scalar:
        return self.coeffs.get((0,) * self.nvars, Fraction(0))

    def homogeneous(self, d: int) -> dict[Monomial, Scalar]:
        return {m: c for m, c in self.coeffs.items() if self.degree_of(m) == d}

    def degree_parts(self) -> list[dict[Monomial, Scalar]]:
        parts: list[dict[Monomial, Scalar]] = [dict() for _ in range(self.prec + 1)]
        for m, c in self.coeffs.items():
            parts[self.degree_of(m)][m] = c
        return parts

    def truncate(self, prec: int) -> "GradedSeries":
        return GradedSeries(self.coeffs, self.weights, min(prec, self.prec))

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(is_zero(c, tol) for c in self.coeffs.values())

    def max_abs(self) -> float:
        return max((abs(complex(c)) for c in self.coeffs.values()), default=0.0)

    def _compatible(self, other: "GradedSeries") -> None:
        if self.weights != other.weights:
            raise ValueError("series live in different rings")

    def _lift(self, other) -> "GradedSeries":
        if isinstance(other, GradedSeries):
            self._compatible(other)
            return other
        return GradedSeries.constant(other, self.weights, self.prec)

    # ring operations -------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return GradedSeries(out, self.weights, prec)

    __radd__ = __add__

    def __neg__(self):
        return GradedSeries({m: -c for m, c in self.coeffs.items()}, self.weights, self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, GradedSeries):
            return GradedSeries({m: c * other for m, c in self.coeffs.items()}, self.weights, self.prec)
        self._compatible(other)
        prec = min(self.prec, other.prec)
        out: dict[Monomial, Scalar] = {}
        right = [(m, self.degree_of(m), c) for m, c in other.coeffs.items()]
        for m1, c1 in self.coeffs.items():
            d1 = self.degree_of(m1)
            if d1 > prec:
                continue
            for m2, d2, c2 in right:
                if d1 + d2 > prec:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                t = c1 * c2
                out[m] = out[m] + t if m in out else t
        return GradedSeries(out, self.weights, prec)

    def __rmul__(self, other):
        return GradedSeries({m: other * c for m, c in self.coeffs.items()}, self.weights, self.prec)

    def __truediv__(self, other):
        if isinstance(other, GradedSeries):
            return self * other.inverse()
        return GradedSeries({m: c / other for m, c in self.coeffs.items()}, self.weights, self.prec)

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = GradedSeries.constant(Fraction(1), self.weights, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            other = self._lift(other)
        if self.weights != other.weights:
            return False
        diff = self - other
        return diff.is_zero()

    __hash__ = None

    # analytic operations ---------------------------------------------------
    def deriv(self, index: int) -> "GradedSeries":
        w = self.weights[index]
        out = {}
        for m, c in self.coeffs.items():
            if m[index] == 0:
                continue
            mm = list(m)
            mm[index] -= 1
            out[tuple(mm)] = c * m[index]
        return GradedSeries(out, self.weights, self.prec - w)

    def _euler_parts(self):
        # homogeneous components s_1..s_prec of a series
        return self.degree_parts()

    @staticmethod
    def _mul_parts(a: dict, b: dict) -> dict:
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                t = c1 * c2
                out[m] = out[m] + t if m in out else t
        return out

    @staticmethod
    def _acc(target: dict, src: dict, scale) -> None:
        for m, c in src.items():
            t = c * scale
            target[m] = target[m] + t if m in target else t

    def exp(self) -> "GradedSeries":
        """``exp`` of a series with vanishing constant term.

        Uses the degree operator ``theta = sum w_i x_i d/dx_i``: from
        ``theta E = E * theta s`` one gets ``d E_d = sum_j j s_j E_{d-j}``.
        """
        if not is_zero(self.constant_term()):
            raise ValueError("exp needs a vanishing constant term for exact truncation")
        s = self._euler_parts()
        E: list[dict] = [{(0,) * self.nvars: Fraction(1)}]
        for d in range(1, self.prec + 1):
            acc: dict = {}
            for j in range(1, d + 1):
                if not s[j] or not E[d - j]:
                    continue
                self._acc(acc, self._mul_parts(s[j], E[d - j]), j)
            E.append({m: c / d for m, c in acc.items()})
        out = {}
        for part in E:
            out.update(part)
        return GradedSeries(out, self.weights, self.prec)

    def log(self) -> "GradedSeries":
        """``log`` of a series with constant term exactly 1."""
        c0 = self.constant_term()
        if not (c0 == 1):
            raise ValueError("log needs constant term 1")
        s = self._euler_parts()
        L: list[dict] = [dict()]
        for d in range(1, self.prec + 1):
            acc: dict = {}
            self._acc(acc, s[d], d)
            for j in range(1, d):
                if not L[j] or not s[d - j]:
                    continue
                self._acc(acc, self._mul_parts(L[j], s[d - j]), -j)
            L.append({m: c / d for m, c in acc.items()})
        out = {}
        for part in L:
            out.update(part)
        return GradedSeries(out, self.weights, self.prec)

    def inverse(self) -> "GradedSeries":
        c0 = self.constant_term()
        if is_zero(c0):
            raise ZeroDivisionError("series with zero constant term is not invertible")
        one = GradedSeries.constant(Fraction(1), self.weights, self.prec)
        u = self / c0 - one
        # 1/(1+u) = sum (-u)^k; u has positive minimal degree
        result = one
        term = one
        for _ in range(self.prec):
            term = term * (-u)
            result = result + term
        return result / c0

    def map_coeffs(self, fn: Callable[[Scalar], Scalar]) -> "GradedSeries":
        return GradedSeries({m: fn(c) for m, c in self.coeffs.items()}, self.weights, self.prec)

    def substitute_zero(self, indices: Iterable[int]) -> "GradedSeries":
        idx = set(indices)
        return GradedSeries(
            {m: c for m, c in self.coeffs.items() if all(m[i] == 0 for i in idx)},
            self.weights,
            self.prec,
        )

    def project(self, keep: Sequence[int]) -> "GradedSeries":
        """Drop variables not in ``keep`` after setting them to zero."""
        keep = list(keep)
        others = [i for i in range(self.nvars) if i not in keep]
        reduced = self.substitute_zero(others)
        return GradedSeries(
            {tuple(m[i] for i in keep): c for m, c in reduced.coeffs.items()},
            [self.weights[i] for i in keep],
            self.prec,
        )

    def embed(self, positions: Sequence[int], weights: Sequence[int]) -> "GradedSeries":
        """Re-express in a larger ring; variable ``i`` goes to slot ``positions[i]``."""
        out = {}
        for m, c in self.coeffs.items():
            mm = [0] * len(weights)
            for i, p in enumerate(positions):
                mm[p] = m[i]
            out[tuple(mm)] = c
        big = GradedSeries(out, weights, self.prec)
        for i, p in enumerate(positions):
            if big.weights[p] != self.weights[i]:
                raise ValueError("embedding must preserve weights")
        return big

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        total = Fraction(0)
        for m, c in self.coeffs.items():
            term = c
            for x, a in zip(point, m):
                if a:
                    term = term * x ** a
            total = total + term
        return total

    def __repr__(self):
        items = sorted(self.coeffs.items(), key=lambda kv: (self.degree_of(kv[0]), kv[0]))
        body = ", ".join(f"{m}: {c}" for m, c in items[:8])
        more = "" if len(items) <= 8 else ", ..."
        return f"GradedSeries({{{body}{more}}}, weights={self.weights}, prec={self.prec})"
