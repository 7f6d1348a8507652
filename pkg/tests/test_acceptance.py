"""The twelve acceptance criteria, each with its tolerance and time budget.

Run ``pytest tests/test_acceptance.py -v`` (or this file directly); every
criterion prints a single PASS/FAIL line.
"""

import subprocess
import sys
import time
from fractions import Fraction as F

import pytest

from schurtau import verify as V
from schurtau.partitions import Partition

RESULTS = []


def _line(tag, title, ok, detail, elapsed, budget):
    status = "PASS" if ok and elapsed < budget else "FAIL"
    return f"[{status}] {tag} {title}: {detail}; {elapsed:.2f}s (budget {budget}s)"


@pytest.fixture
def record(capsys):
    def _record(tag, title, reports, budget, t0):
        elapsed = time.perf_counter() - t0
        ok = all(r.passed for r in reports)
        worst = max((r.residual for r in reports), default=0.0)
        fails = [r.identity for r in reports if not r.passed]
        detail = f"{len(reports)} report(s), max residual {worst:.3g}" + (f", failing {fails}" if fails else "")
        line = _line(tag, title, ok, detail, elapsed, budget)
        RESULTS.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
        assert elapsed < budget, line

    return _record


def test_c01_specialization_closed_forms(record):
    t0 = time.perf_counter()
    reps = [V.verify_closed_forms(6, (2, F(7, 2)), (F(1, 2), F(3, 5)))]
    assert reps[0].details["checked"] == 9 * 30  # 9 specializations x 30 partitions of weight <= 6
    record("C1", "Schur specializations vs hook closed forms, |lam|<=6", reps, 10, t0)


def test_c02_cauchy_littlewood(record):
    t0 = time.perf_counter()
    import random

    rng = random.Random(2024)
    reps = [V.verify_cauchy_littlewood(V._random_coupling(rng, 5), V._random_coupling(rng, 5), 5) for _ in range(5)]
    record("C2", "Cauchy-Littlewood through total degree 10 at 5 points", reps, 30, t0)


def test_c03_gaussian_recovery(record):
    t0 = time.perf_counter()
    reps = [V.verify_gaussian_recovery(n, 5) for n in (1, 2, 3)]
    record("C3", "Gaussian moments give (n)_lam, n<=3, |lam|<=5", reps, 10, t0)


def test_c04_continuous_discrete_per_degree(record):
    t0 = time.perf_counter()
    reps = []
    for kind in "ABCDE":
        for n in (1, 2, 3):
            reps.append(V.verify_lattice_degrees(kind, n, 4, seed=100 + n))
    for n in (1, 2, 3):
        reps.append(V.verify_lattice_degrees("E", n, 4, seed=200 + n, params={"a": None, "q": F(1, 2)}))
    record("C4", "lattice sums A-E per degree, n<=3, D=4, H=D+n-1", reps, 120, t0)


def test_c05_toda(record):
    t0 = time.perf_counter()
    reps = [V.verify_toda((1, 2, 3), 6)]
    record("C5", "Toda residual zero through degree D-2, D=6; tau(1)=exp(t1 t1')", reps, 30, t0)


def test_c06_duality(record):
    t0 = time.perf_counter()
    reps = [V.verify_duality_grid(3, 4, (F(2), F(1, 2), F(3, 5)))]
    record("C6", "partition/eigenvalue duality, n<=3, |lam|,|lam*|<=4", reps, 10, t0)


def test_c07_determinant_formula(record):
    t0 = time.perf_counter()
    reps = []
    fams = V._xi_families(20)
    for label, xi in fams.items():
        for n in (1, 2, 3):
            x = [F(i + 1, i + 2) for i in range(n)]
            y = [F(2 * i + 1, 3) for i in range(n)]
            reps.append(V.verify_det_formula(xi, x, y, 6))
            for k in range(1, 4):
                assert V.c_n_from_xi(xi, k) == V.c_n_from_r(xi.r, k)
    record("C7", "determinant formula, n<=3, a_k in {1,k!,1/k!}, degree 6", reps, 30, t0)


def test_c08_operator_identity(record):
    t0 = time.perf_counter()
    reps = [V.verify_operator_grid(2, 3, F(1, 2), F(1, 3)), V.verify_operator_grid(2, 3, F(1, 2), F(1, 2))]
    assert all(r.details["checked"] > 0 for r in reps)
    record("C8", "continuous = a_n s(d~) s(d~') Z^discr, n<=2, D<=3", reps, 60, t0)


def test_c09_hypergeometric(record):
    t0 = time.perf_counter()
    reps = [V.verify_hypergeometric(1, 5, [F(1, 3)]),
            V.verify_hypergeometric(2, 5, [F(1, 2), F(1, 3)], [F(2, 3), F(1, 4)]),
            V.verify_hypergeometric(3, 5, [F(1, 2), F(1, 3), F(-1, 5)])]
    record("C9", "0F0, 1F0 closed forms and 2x2 determinant form through degree 5", reps, 30, t0)


def test_c10_haar_monte_carlo(record):
    t0 = time.perf_counter()
    reps = [V.mc_haar_check([1, 2], [1, 3], lam, 2, 100_000, seed=7) for lam in ((1,), (2,), (1, 1))]
    record("C10", "Haar average of s_lam(AUBU+), 1e5 samples, 4 SE / 2% floor", reps, 60, t0)


def test_c11_quadrature(record):
    t0 = time.perf_counter()
    reps = [V.verify_quadrature_moments(8, 1e-8)]
    record("C11", "2-D quadrature moments of exp(-|z|^2) = pi m!, m<=8", reps, 10, t0)


def test_c12_determinism(record, tmp_path):
    t0 = time.perf_counter()
    paths = []
    for i in range(2):
        p = tmp_path / f"report{i}.json"
        subprocess.run([sys.executable, "-m", "schurtau", "verify", "all", "--seed", "7", "--report", str(p)],
                       check=False, capture_output=True)
        paths.append(p)
    a, b = paths[0].read_bytes(), paths[1].read_bytes()

    class _R:
        identity = "determinism"
        passed = len(a) > 0 and a == b
        residual = 0.0 if passed else 1.0

    record("C12", "verify all --seed 7 twice gives byte-identical reports", [_R()], 120, t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
