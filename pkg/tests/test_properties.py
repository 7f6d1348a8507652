"""Randomized identities over small exact inputs."""

from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from schurtau.duality import DualPair, verify_duality
from schurtau.partitions import (
    Partition,
    conjugate,
    frobenius,
    from_frobenius,
    from_h,
    hook_product,
    to_h,
)
from schurtau.scalars import det
from schurtau.schur import CouplingVector, power_sums, schur_alternant, schur_jt
from schurtau.series import GradedSeries

fracs = st.fractions(min_value=-3, max_value=3, max_denominator=7)


@st.composite
def partitions(draw, max_weight=7, max_length=None):
    parts = draw(st.lists(st.integers(1, max_weight), max_size=max_length or max_weight))
    parts = sorted(parts, reverse=True)
    out, total = [], 0
    for p in parts:
        if total + p > max_weight:
            break
        out.append(p)
        total += p
    return Partition(out)


@given(partitions())
def test_conjugation_preserves_hooks(lam):
    assert conjugate(conjugate(lam)) == lam
    assert hook_product(lam) == hook_product(conjugate(lam))


@given(partitions())
def test_frobenius_roundtrip(lam):
    assert from_frobenius(frobenius(lam)) == lam


@given(partitions(max_weight=6, max_length=4), st.integers(4, 6))
def test_h_roundtrip(lam, n):
    h = to_h(lam, n)
    assert from_h(h) == lam
    assert sum(h) - n * (n - 1) // 2 == lam.weight


@settings(max_examples=40, deadline=None)
@given(partitions(max_weight=5, max_length=3), st.lists(fracs, min_size=3, max_size=3, unique=True))
def test_alternant_matches_jacobi_trudi(lam, x):
    assert schur_alternant(lam, x) == schur_jt(lam, power_sums(x, max(lam.weight, 1)))


@settings(max_examples=30, deadline=None)
@given(partitions(max_weight=4, max_length=3), partitions(max_weight=4, max_length=3),
       st.sampled_from([F(2), F(1, 2), F(3, 5), F(-2, 3)]))
def test_duality_random(lam, ls, q):
    assert verify_duality(DualPair(lam, ls, 3, q)) == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(fracs, min_size=4, max_size=4))
def test_series_exp_log(coeffs):
    s = GradedSeries({(k + 1,): c for k, c in enumerate(coeffs)}, (1,), 5)
    assert (s.exp().log() - s).is_zero()
    one = GradedSeries.constant(F(1), (1,), 5)
    assert ((one + s) * (one + s).inverse() - one).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(fracs, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_matches_sympy(rows):
    import sympy

    m = sympy.Matrix(rows)
    assert det(rows) == F(str(m.det()))


@settings(max_examples=25, deadline=None)
@given(st.lists(fracs, min_size=4, max_size=4), fracs)
def test_schur_scaling_homogeneity(t, c):
    tv = CouplingVector(t)
    for lam in [Partition((2, 1)), Partition((3, 1)), Partition((1, 1, 1, 1))]:
        assert schur_jt(lam, tv.scaled(c)) == c ** lam.weight * schur_jt(lam, tv)
