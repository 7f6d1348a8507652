"""Per-degree comparison for one lattice model: cone sum vs Schur expansion.

    python scripts/lattice_demo.py --kind C --n 2 --D 4
"""
import argparse

from schurtau.verify import LATTICE_PARAMS, verify_lattice_degrees


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--kind", default="C", choices=sorted(LATTICE_PARAMS))
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--D", type=int, default=4)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rep = verify_lattice_degrees(args.kind, args.n, args.D, seed=args.seed)
    print(f"kind {args.kind}, n={args.n}, D={args.D}, params {rep.params}")
    for k, v in rep.details.items():
        print(f"  {k}: {v}")
    print("passed" if rep.passed else "FAILED", f"(residual {rep.residual:.3g})")


if __name__ == "__main__":
    main()
