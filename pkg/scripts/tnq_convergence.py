"""How fast s_lam(T_N_Q) approaches s_lam(T_INFTY_Q) as N grows.

The gap should shrink like q^N. Prints the relative error and its ratio to q^N.

    python scripts/tnq_convergence.py --q 1/2 --Nmax 24
"""
import argparse
from fractions import Fraction

from schurtau.partitions import partitions_of
from schurtau.schur import SpecializationKind, schur_jt, specialize


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", default="1/2")
    ap.add_argument("--weight", type=int, default=4)
    ap.add_argument("--Nmax", type=int, default=24)
    args = ap.parse_args()
    q = Fraction(args.q)
    M = args.weight
    lams = list(partitions_of(M, M))
    t_inf = specialize(SpecializationKind.infty_q(q), M)
    ref = {lam: schur_jt(lam, t_inf) for lam in lams}
    print(f"{'N':>3} {'max rel err':>12} {'err / q^N':>10}")
    for N in range(M, args.Nmax + 1, 2):
        t_n = specialize(SpecializationKind.n_q(N, q), M)
        err = max(abs(float((schur_jt(lam, t_n) - ref[lam]) / ref[lam])) for lam in lams)
        print(f"{N:>3} {err:12.3e} {err / float(q) ** N:10.4f}")


if __name__ == "__main__":
    main()
