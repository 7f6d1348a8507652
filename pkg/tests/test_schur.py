from fractions import Fraction as F

import pytest

from schurtau.partitions import Partition, enumerate_partitions, hook_product, rising_factorial
from schurtau.scalars import DomainError, TruncationError
from schurtau.schur import (
    CouplingVector,
    SpecializationKind,
    d_t1,
    elementary_schur,
    power_sums,
    schur_alternant,
    schur_diff_apply,
    schur_jt,
    schur_specialized_closed,
    schur_table,
    specialize,
)
from schurtau.series import GradedSeries

P = Partition


def test_coupling_vector_indexing():
    t = CouplingVector([1, 2, 3])
    assert t.M == 3 and t[1] == 1 and t[3] == 3
    with pytest.raises(TruncationError):
        t[4]
    assert t.scaled(F(1, 2)).values == (F(1, 2), F(2, 4), F(3, 8))
    assert CouplingVector.from_json(t.to_json()) == t


def test_elementary_schur():
    assert elementary_schur(CouplingVector([1, 0, 0]), 3) == [1, 1, F(1, 2), F(1, 6)]
    assert elementary_schur(CouplingVector([0, 0, 0]), 3) == [1, 0, 0, 0]
    assert elementary_schur(CouplingVector([0, 1, 0, 0]), 4) == [1, 0, 1, 0, F(1, 2)]
    with pytest.raises(TruncationError):
        elementary_schur(CouplingVector([1, 0]), 3)


def test_schur_jt_examples():
    assert schur_jt(P((2, 1)), CouplingVector([1, 1, 1])) == F(-2, 3)
    assert schur_jt(P(), CouplingVector([F(3), F(7)])) == 1
    assert schur_jt(P((2, 1)), CouplingVector([1, 0, 0])) == F(1, 3)


def test_schur_jt_symbolic_form():
    ts = GradedSeries.variables((1, 2, 3), 3)
    s = schur_jt(P((2, 1)), CouplingVector(ts))
    # t1^3/3 - t3
    assert s.coeffs == {(3, 0, 0): F(1, 3), (0, 0, 1): F(-1)}


def test_alternant():
    assert schur_alternant(P((1,)), [2, 1]) == 3
    assert schur_alternant(P((1, 1, 1)), [2, 1]) == 0
    assert schur_alternant(P((2,)), [2, 1]) == 7
    x = [F(1, 2), F(2, 3), F(5, 7)]
    for lam in enumerate_partitions(5, 3):
        assert schur_alternant(lam, x) == schur_jt(lam, power_sums(x, 5))


def test_power_sums():
    assert power_sums([1, 1], 2).values == (2, 1)
    assert power_sums([0], 3).values == (0, 0, 0)
    assert power_sums([1, F(1, 2)], 2).values == (F(3, 2), F(5, 8))


def test_specialize():
    assert specialize(SpecializationKind.infty(), 3).values == (1, 0, 0)
    assert specialize(SpecializationKind.a_1(2), 3).values == (2, 1, F(2, 3))
    assert specialize(SpecializationKind.infty_q(F(1, 2)), 2).values == (2, F(2, 3))
    with pytest.raises(DomainError):
        specialize(SpecializationKind.infty_q(F(1)), 2)
    with pytest.raises(DomainError):
        specialize(SpecializationKind.infty_q(-1), 4)


def test_specialization_limits():
    M = 4
    big = specialize(SpecializationKind.a_q(60, F(1, 2)), M)
    lim = specialize(SpecializationKind.infty_q(F(1, 2)), M)
    assert all(abs(float(a - b)) < 1e-15 for a, b in zip(big.values, lim.values))
    near = specialize(SpecializationKind.a_q(3, F(999_999, 1_000_000)), M)
    one = specialize(SpecializationKind.a_1(3), M)
    assert all(abs(float(a - b)) < 1e-4 for a, b in zip(near.values, one.values))


def test_closed_forms():
    assert schur_specialized_closed(P((2, 1)), SpecializationKind.infty()) == F(1, 3)
    assert schur_specialized_closed(P((1,)), SpecializationKind.infty_q(F(1, 2))) == 2
    assert schur_specialized_closed(P((2, 1)), SpecializationKind.a_1(3)) == 8
    kind = SpecializationKind.n_q(3, F(1, 3))
    t = specialize(kind, 5)
    for lam in enumerate_partitions(5, 4):
        assert schur_specialized_closed(lam, kind) == schur_jt(lam, t)


def test_d_t1():
    assert d_t1(P((2,))) == [P((1,))]
    assert sorted(d_t1(P((2, 1)))) == sorted([P((1, 1)), P((2,))])
    assert d_t1(P()) == []
    # derivative of s_lam in t1 is the sum over removable corners
    W = (1, 2, 3, 4)
    ts = GradedSeries.variables(W, 4)
    for lam in enumerate_partitions(4, 4):
        if not lam:
            continue
        lhs = schur_jt(lam, CouplingVector(ts)).deriv(0)
        rhs = GradedSeries({}, W, 3)
        for mu in d_t1(lam):
            rhs = rhs + schur_jt(mu, CouplingVector(ts))
        assert lhs == rhs.truncate(lhs.prec)


def test_schur_diff_apply_examples():
    W = (1, 2)
    ts = CouplingVector(GradedSeries.variables(W, 2))
    assert schur_diff_apply(P((2,)), schur_jt(P((2,)), ts)) == 1
    assert schur_diff_apply(P((2,)), schur_jt(P((1, 1)), ts)) == 0
    coeffs = {P(): F(5), P((1,)): F(2)}
    assert schur_diff_apply(P(), coeffs) == 5
    assert schur_diff_apply(P((1,)), coeffs) == 2


def test_schur_diff_apply_orthonormality():
    k = 4
    W = tuple(range(1, k + 1))
    ts = CouplingVector(GradedSeries.variables(W, k))
    lams = [lam for lam in enumerate_partitions(k, k) if lam]
    for mu in lams:
        for lam in lams:
            val = schur_diff_apply(mu, schur_jt(lam, ts))
            if lam.weight == mu.weight:
                assert val == (1 if lam == mu else 0)


def test_schur_diff_apply_partial():
    # s_(1)(d) acting on s_(2)(t) gives s_(1)(t)
    W = (1, 2)
    ts = CouplingVector(GradedSeries.variables(W, 2))
    out = schur_diff_apply(P((1,)), schur_jt(P((2,)), ts), at_zero=False)
    assert out.coeffs == {(1, 0): 1}


def test_schur_table():
    tab = schur_table(3, specialize(SpecializationKind.infty(), 3))
    assert all(tab[lam] == F(1, hook_product(lam)) for lam in tab)
    tab = schur_table(3, specialize(SpecializationKind.a_1(F(5, 2)), 3))
    assert all(tab[lam] == rising_factorial(F(5, 2), lam) / hook_product(lam) for lam in tab)
