import math
from fractions import Fraction as F

import pytest

from schurtau.moments import MomentTable, PiScalar, XiSequence, diagonal_from_xi, gaussian_moments, table_moments
from schurtau.partitions import Partition, enumerate_partitions, hook_polynomial, hook_product, n_stat
from schurtau.schur import CouplingVector, SpecializationKind, schur_jt, specialize
from schurtau.series import GradedSeries
from schurtau.tau import (
    RFunction,
    TableTooSmallError,
    coeff_det,
    evaluate,
    frobenius_resum,
    tau_hyper,
    tau_t1_series,
    toda_residual,
    z_axial,
    z_expand,
)

P = Partition


def test_coeff_det_gaussian():
    g = gaussian_moments(4)
    vac = coeff_det(g, P(), P(), 2)
    assert isinstance(vac, PiScalar) and vac.coeff == 1 and vac.power == 2
    one = coeff_det(g, P((1,)), P((1,)), 2)
    assert one.coeff == 2 and one.ratio(vac) == 2
    assert coeff_det(g, P((1,)), P((2,)), 2).coeff == 0
    with pytest.raises(TableTooSmallError):
        coeff_det(gaussian_moments(2), P((3,)), P((3,)), 2)


def test_z_expand_examples():
    ser = z_expand(gaussian_moments(3), 1, 2)
    assert ser.diagonal and ser.pi_power == 1
    for m in range(3):
        assert ser.raw(P((m,))) == math.factorial(m)
    assert ser.coeff(P((1,)), P((2,))) == 0
    g = table_moments([[F(2), F(1), F(0)], [F(3), F(5), F(1)], [F(1), F(1), F(1)]])
    v = z_expand(g, 2, 0)
    assert list(v.coeffs) == [(P(), P())]
    assert v.raw(P()) == 2 * (F(5) * 2 - F(1) * 3)


def test_z_expand_zero_vacuum_kept_unnormalized():
    g = table_moments([[F(0), F(1)], [F(1), F(0)]])
    ser = z_expand(g, 1, 1)
    assert ser.source["normalized"] is False
    assert ser.coeff(P((1,)), P()) == 1


def test_tau_hyper_examples():
    ser = tau_hyper(RFunction(lambda k: F(1), semi_infinite=False), 3, 4)
    assert all(c == 1 for c in ser.coeffs.values())
    ser = tau_hyper(RFunction(lambda k: F(k)), 1, 4)
    for m in range(5):
        assert ser.coeff(P((m,))) == math.factorial(m)
    assert ser.coeff(P((1, 1))) == 0
    with pytest.raises(ValueError):
        RFunction(lambda k: F(k + 1))


def test_z_axial_examples():
    xi = XiSequence([F(math.factorial(m)) for m in range(8)])
    assert z_axial(xi, 2, 3).coeff(P((1,))) == 2
    assert z_axial(xi, 2, 3).coeff(P()) == 1
    assert z_axial(xi, 1, 3).coeff(P((2,))) == 2


def test_z_axial_matches_z_expand():
    xi = XiSequence([F(1), F(3), F(1, 2), F(7), F(2, 9), F(5), F(11)])
    for n in (1, 2, 3):
        a = z_axial(xi, n, 3)
        b = z_expand(diagonal_from_xi(xi), n, 3)
        assert a.coeffs == b.coeffs
        assert a.prefactor == b.prefactor


def test_evaluate_examples():
    vac = z_expand(gaussian_moments(2), 1, 0)
    assert evaluate(vac, CouplingVector([F(1)]), CouplingVector([F(1)])) == 1
    ser = tau_hyper(RFunction(lambda k: F(k)), 1, 6)
    t = CouplingVector([F(1)] + [F(0)] * 5)
    assert evaluate(ser, t, t) == F(1957, 720)
    one = tau_hyper(RFunction(lambda k: F(1), semi_infinite=False), 4, 4)
    t = specialize(SpecializationKind.infty(), 4)
    # at t = t' = t_inf the Cauchy sum is sum_lam 1/H_lam^2 = sum_d 1/d!
    assert evaluate(one, t, t) == sum(F(1, math.factorial(d)) for d in range(5))


def test_toda_residual_examples():
    assert toda_residual(RFunction(lambda k: F(k)), 1, 6).is_zero()
    assert toda_residual(RFunction(lambda k: F(0)), 2, 5).is_zero()
    assert toda_residual(RFunction(lambda k: F(k) ** 2), 2, 5).is_zero()


def test_toda_residual_detects_wrong_sign():
    # tau built from r but the lattice equation evaluated with -r must fail
    r = RFunction(lambda k: F(k) * (k + 2))
    res = toda_residual(r, 2, 6)
    assert res.is_zero()
    from schurtau import tau as T

    taus = {k: T.tau_t1_series(r, k, 6) for k in range(1, 5)}
    phi = {k: -(taus[k + 1] / taus[k]).log() for k in range(1, 4)}
    bad = phi[2].deriv(0).deriv(1) + r(2) * (phi[1] - phi[2]).exp() - r(3) * (phi[2] - phi[3]).exp()
    assert not bad.truncate(4).is_zero()


def test_tau_one_is_exponential():
    s = tau_t1_series(lambda k: F(k), 1, 12)
    for d in range(7):
        assert s.coeff((d, d)) == F(1, math.factorial(d))


def test_frobenius_resum():
    xi = XiSequence([F(math.factorial(m)) for m in range(12)])
    q = F(1, 2)
    terms = frobenius_resum(xi, 3, 7, q=q)
    by = {t.partition: t for t in terms}
    assert P((3, 3, 1)) in by
    assert by[P((1,))].t_infty_factor == 1
    assert by[P((2,))].t_infty_factor == F(1, 2)
    ser = z_axial(xi, 3, 7)
    for lam, t in by.items():
        assert t.t_infty_factor == F(1, hook_product(lam))
        assert t.q_factor == q ** n_stat(lam) / hook_polynomial(lam, q)
        assert t.coeff == ser.coeff(lam)
    # beta_1 < n removes no partition of length <= n
    assert {t.partition for t in terms} == set(enumerate_partitions(7, 3))
