import cmath
import math
from fractions import Fraction as F

import pytest

from schurtau.lattice import (
    CutoffError,
    cone_sum,
    full_sum,
    kontsevich_sum,
    model_times,
    model_weights,
    staircase_constant,
    z_discr,
)
from schurtau.moments import XiSequence, finite_pair_weight, gaussian_moments, table_moments, xi_from_r
from schurtau.partitions import Partition, enumerate_partitions, hook_polynomial, n_stat, q_pochhammer_m, to_h
from schurtau.scalars import DomainError, vandermonde
from schurtau.schur import CouplingVector, schur_jt
from schurtau.series import GradedSeries
from schurtau.verify import verify_lattice_degrees


def test_kind_a_gaussian_n1():
    spec = model_weights("A", {"t1": 1, "t1p": 1, "moments": gaussian_moments(3)}, 1, 3)
    assert cone_sum(spec).value == F(8, 3)
    assert [spec.w1(h) for h in range(4)] == [1, 1, F(1, 2), F(1, 6)]


def test_single_site():
    g = table_moments([[F(7, 3)]])
    spec = model_weights("A", {"t1": F(1, 2), "t1p": F(1, 3), "moments": g}, 1, 0)
    assert cone_sum(spec).value == F(7, 3)


def test_kind_a_vacuum_term_is_one():
    g = gaussian_moments(6)
    for n in (1, 2, 3):
        spec = model_weights("A", {"t1": F(1, 2), "t1p": F(2, 3), "moments": g}, n, n + 1)
        res = cone_sum(spec)
        vac = res.z_by_degree()[(0, 0)]
        assert vac == math.factorial(n) * math.prod(math.factorial(k) for k in range(n))


def test_kind_c_weight():
    q = F(1, 3)
    spec = model_weights("C", {"x": F(1, 2), "y": F(1, 5), "q1": q, "q2": q, "moments": gaussian_moments(3)}, 1, 3)
    for h in range(4):
        assert spec.w1(h) == F(1, 2) ** h / q_pochhammer_m(q, q, h)


def test_kind_b_tends_to_a():
    a = F(10 ** 6)
    t1 = F(1, 2)
    spec = model_weights("B", {"x": t1 / a, "y": t1 / a, "a": a, "ap": a, "moments": gaussian_moments(4)}, 1, 4)
    for h in range(5):
        assert abs(float(spec.w1(h) / (t1 ** h / math.factorial(h))) - 1) < 1e-4


def test_staircase_constant():
    q = F(2, 7)
    for n in (1, 2, 3, 4):
        for lam in enumerate_partitions(4, n):
            h = to_h(lam, n)
            rhs = staircase_constant(n, q) * vandermonde([q ** x for x in h])
            for x in h:
                rhs = rhs / q_pochhammer_m(q, q, x)
            assert rhs == q ** n_stat(lam) / hook_polynomial(lam, q)


@pytest.mark.parametrize("kind", list("ABCD"))
def test_cone_equals_full(kind):
    from schurtau.verify import LATTICE_PARAMS, _random_table
    import random

    rng = random.Random(3)
    for n, diag in ((1, False), (2, False), (2, True), (3, True)):
        g = _random_table(rng, 4, diag)
        spec = model_weights(kind, dict(LATTICE_PARAMS[kind], moments=g), n, 4)
        a, b = cone_sum(spec), full_sum(spec)
        assert a.value == b.value and a.breakdown == b.breakdown


@pytest.mark.parametrize("kind", list("ABCDE"))
def test_per_degree_small(kind):
    for n in (1, 2):
        assert verify_lattice_degrees(kind, n, 3, seed=11).passed


def test_cutoff_check():
    spec = model_weights("A", {"t1": 1, "t1p": 1, "moments": gaussian_moments(3)}, 2, 3)
    with pytest.raises(CutoffError):
        cone_sum(spec, compare_degree=3)


def test_threads_do_not_change_result(monkeypatch):
    from schurtau.verify import _random_table
    import random

    g = _random_table(random.Random(5), 5, False)
    spec = model_weights("C", {"x": F(1, 2), "y": F(1, 3), "q1": F(1, 2), "q2": F(1, 3), "moments": g}, 2, 5)
    one = cone_sum(spec)
    monkeypatch.setenv("SCHUR_TAU_THREADS", "4")
    four = cone_sum(spec)
    assert one.breakdown == four.breakdown and one.value == four.value


def test_kontsevich_n1_series():
    q, a = F(1, 2), 3
    xi = xi_from_r(lambda k: F(k + 1, 3), 8)
    y = F(1, 3)
    res = kontsevich_sum(xi, a, q, [y], 1, 8)
    direct = sum(q_pochhammer_m(q ** a, q, h) / q_pochhammer_m(q, q, h) * xi.a(h) * y ** h for h in range(9))
    assert res.z() == direct


def test_kontsevich_rejects_zero_y():
    xi = xi_from_r(lambda k: F(1), 4)
    with pytest.raises(DomainError):
        kontsevich_sum(xi, 2, F(1, 2), [F(0), F(1, 2)], 2, 4)


def test_kontsevich_large_a_limit():
    xi = xi_from_r(lambda k: F(1, k), 30)
    q = F(1, 2)
    r1 = kontsevich_sum(xi, 50, q, [F(1, 2)], 1, 30).z()
    r2 = kontsevich_sum(xi, None, q, [F(1, 2)], 1, 30).z()
    assert abs(float(r1 - r2)) < 1e-8


def test_z_discr_vacuum_and_conjugate_symmetry():
    pw = finite_pair_weight({(0, 0): F(2), (1, 2): F(3), (2, 1): F(-1, 2)})
    assert z_discr(pw, [], [], F(1, 2), F(1, 3), 1, 3) == F(2) + 3 - F(1, 2)
    q = 0.7 * cmath.exp(0.4j)
    diag = finite_pair_weight({(h, h): F(1, h + 1) for h in range(5)})
    val = z_discr(diag, [], [], q, q.conjugate(), 2, 4)
    assert abs(val.imag) < 1e-14 and val.real > 0


def test_unitary_roots_of_unity():
    # q^N = 1 and unit weight: sum over h in Z_N reproduces sum_{l<=2, lam_1 <= N-2} s_lam(t) s_lam(t')
    N, n, P = 12, 2, 8
    q = cmath.exp(2j * math.pi / N)
    pw = finite_pair_weight({(h, h): F(1) for h in range(N)})
    gam = [F(1, 2), F(-1, 3), F(1, 5), F(2, 7)]
    gamp = [F(1, 3), F(1, 4), F(-2, 5), F(1, 6)]
    W = (1,)
    eps = GradedSeries.variable(0, W, P)
    tt = [eps ** m * gam[m - 1] for m in range(1, 5)]
    ttp = [eps ** m * gamp[m - 1] for m in range(1, 5)]
    z = z_discr(pw, tt, ttp, q, q.conjugate(), n, N - 1)
    g, gp = CouplingVector(gam), CouplingVector(gamp)
    for d in range(5):
        target = sum(schur_jt(lam, g) * schur_jt(lam, gp) for lam in enumerate_partitions(4, 2) if lam.weight == d)
        assert abs(complex(z.coeff(2 * d)) / N ** n - complex(target)) < 1e-11
        if d:
            assert abs(complex(z.coeff(2 * d - 1))) < 1e-11
