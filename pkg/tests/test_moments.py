import math
import warnings
from fractions import Fraction as F

import numpy as np
import pytest

from schurtau.moments import (
    MomentTable,
    NonConvergenceWarning,
    PiScalar,
    QuadratureError,
    XiSequence,
    axial_moments,
    deform_moments,
    diagonal_from_xi,
    discrete_moments,
    finite_pair_weight,
    gaussian_moments,
    general_moments,
    geometric_moments_closed,
    geometric_pair_weight,
    table_moments,
    xi_from_diagonal,
    xi_from_r,
)


def test_gaussian_table():
    g = gaussian_moments(3)
    assert g.pi_factor and g.diagonal
    assert [g[m, m] for m in range(3)] == [1, 1, 2]
    assert g[0, 1] == 0
    assert g[3, 3] / g[0, 0] == 6
    assert math.isclose(g.value(2, 2), 2 * math.pi)


def test_table_validation():
    with pytest.raises(ValueError):
        MomentTable([[1, 2], [3]])
    with pytest.raises(ValueError):
        table_moments([[1, 1], [0, 1]], diagonal=True)
    with pytest.raises(ValueError):
        MomentTable([[float("nan")]])
    g = table_moments([[F(1), F(1, 2)], [F(0), F(3)]])
    assert MomentTable.from_json(g.to_json()).entries == g.entries


def test_pi_scalar():
    a, b = PiScalar(F(3), 2), PiScalar(F(1), 2)
    assert a.ratio(b) == 3
    assert math.isclose(float(a), 3 * math.pi ** 2)


def test_axial_moments():
    g = axial_moments(lambda x: -x, 4)
    for m in range(5):
        assert math.isclose(g[m, m], math.factorial(m), rel_tol=1e-10)
    with pytest.raises(QuadratureError):
        axial_moments(lambda x: x, 2)


def test_general_moments_gaussian():
    g = general_moments(lambda z: -np.abs(z) ** 2, 5)
    for k in range(6):
        for m in range(6):
            target = math.pi * math.factorial(m) if k == m else 0.0
            assert abs(complex(g[k, m]) - target) <= 1e-8 * math.pi * math.factorial(max(k, m))


def test_general_moments_axial_offdiagonal():
    g = general_moments(lambda z: -np.abs(z) ** 4, 4)
    for k in range(5):
        for m in range(5):
            if k != m:
                assert abs(complex(g[k, m])) < 1e-10 * abs(complex(g[k, k]))


def test_general_moments_linear_perturbation():
    eps = 1e-3
    g = general_moments(lambda z: -np.abs(z) ** 2 + eps * (z + np.conj(z)).real, 1)
    assert abs(complex(g[0, 1]) - math.pi * eps) < 1e-8


def test_xi_roundtrip():
    xi = xi_from_diagonal(gaussian_moments(4))
    assert [xi.a(m) for m in range(5)] == [1, 1, 2, 6, 24]
    c = table_moments([[F(3) if k == m else F(0) for m in range(3)] for k in range(3)], diagonal=True)
    assert [xi_from_diagonal(c).a(m) for m in range(3)] == [1, 1, 1]
    xi = XiSequence([F(1), F(2), F(6)])
    g = diagonal_from_xi(xi)
    assert [g[m, m] for m in range(3)] == [1, 2, 6]
    assert [xi_from_r(lambda k: F(k), 4).a(m) for m in range(5)] == [1, 1, 2, 6, 24]
    assert xi.r(2) == 3


def test_deform_moments():
    g = gaussian_moments(3)
    same = deform_moments(g, [0], [0], F(1, 2), F(1, 2))
    assert same.entries == g.entries
    d = deform_moments(g, [1], [], F(1, 2), F(1, 3))
    for k in range(4):
        assert math.isclose(complex(d[k, k]).real, math.exp(0.5 ** k) * float(g[k, k]))
    assert d.diagonal


def test_discrete_moments():
    delta = finite_pair_weight({(0, 0): F(1)})
    g = discrete_moments(delta, F(1, 2), F(1, 3), 3, 5)
    assert all(g[k, m] == 1 for k in range(4) for m in range(4))
    c, q = F(1, 2), F(1, 3)
    pw = geometric_pair_weight(c)
    closed = geometric_moments_closed(c, q, q, 2)
    trunc = discrete_moments(pw, q, q, 2, 60)
    for k in range(3):
        assert abs(float(closed[k, k] - trunc[k, k])) < 1e-15
    with pytest.warns(NonConvergenceWarning):
        discrete_moments(geometric_pair_weight(F(2)), F(1), F(1), 1, 10)
