"""Command-line front end.

    schurtau expand   --moments gaussian --n 2 --D 3
    schurtau sum      --kind A --n 1 --H 3 --t1 1 --t1p 1
    schurtau kontsevich --n 2 --H 6 --q 1/2 --a 5 --y 1/3 2/5
    schurtau verify   all --seed 7 --report out.json
    schurtau moments  --source general --K 6

Exit codes: 0 success, 1 a verification failed, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .lattice import CutoffError, cone_sum, kontsevich_sum, model_weights
from .moments import (
    MomentTable,
    QuadratureError,
    XiSequence,
    geometric_pair_weight,
    finite_pair_weight,
    gaussian_moments,
    general_moments,
    xi_from_r,
)
from .partitions import Partition
from .scalars import DomainError, TruncationError, encode_scalar, parse_scalar
from .schur import CouplingVector
from . import verify as V
from .tau import z_expand


class ConfigError(ValueError):
    """Invalid command line or config file."""


def _scalar(text: str):
    text = str(text).strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        c = complex(text.replace("i", "j")) if "i" in text or "j" in text else float(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse scalar {text!r}") from exc
    return c


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(raw), hashlib.sha256(raw.encode()).hexdigest()
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _load_table(path: str) -> tuple[MomentTable, str]:
    data, digest = _load_json(path)
    try:
        if isinstance(data, list):
            data = {"entries": data}
        return MomentTable.from_json(data), digest
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid moment table {path}: {exc}") from exc


def _emit(args, payload: dict, rows: list[dict] | None = None) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        rows = rows or []
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        text = buf.getvalue()
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _positive(name: str, value, allow_zero: bool = False) -> None:
    if value is None:
        return
    if value < 0 or (value == 0 and not allow_zero):
        raise ConfigError(f"--{name} must be {'non-negative' if allow_zero else 'positive'}")


# -- commands ---------------------------------------------------------------------------

def cmd_expand(args) -> int:
    _positive("n", args.n)
    _positive("D", args.D, allow_zero=True)
    meta = {"moments": args.moments, "n": args.n, "D": args.D}
    if args.moments == "gaussian":
        g = gaussian_moments(args.D + args.n)
    elif args.moments == "general":
        g = general_moments(lambda z: -np.abs(z) ** 2, args.D + args.n)
    else:
        g, digest = _load_table(args.moments)
        meta["table_sha256"] = digest
    ser = z_expand(g, args.n, args.D)
    payload = {"metadata": meta, "series": ser.to_json()}
    rows = [{"lambda": list(a), "lambda_prime": list(b), "coeff": encode_scalar(c)}
            for (a, b), c in ser.coeffs.items()]
    _emit(args, payload, rows)
    return 0


def _moments_arg(args):
    if args.moments in (None, "gaussian"):
        return gaussian_moments(args.H + 1)
    if args.moments.startswith("geometric:"):
        return geometric_pair_weight(_scalar(args.moments.split(":", 1)[1]))
    if args.moments.startswith("r:"):
        expr = args.moments.split(":", 1)[1]
        return xi_from_r(_r_function(expr), args.H + 1)
    g, _ = _load_table(args.moments)
    return g


def _r_function(expr: str):
    presets = {"k": lambda k: Fraction(k), "k^2": lambda k: Fraction(k * k),
               "k(k+3/2)": lambda k: Fraction(k) * (k + Fraction(3, 2)), "1/k": lambda k: Fraction(1, k)}
    if expr not in presets:
        raise ConfigError(f"unknown r preset {expr!r}; choose from {sorted(presets)}")
    return presets[expr]


def cmd_sum(args) -> int:
    _positive("n", args.n)
    _positive("H", args.H, allow_zero=True)
    if args.compare_degree is not None and args.H < args.compare_degree + args.n - 1:
        raise ConfigError(f"--H {args.H} is below D+n-1 = {args.compare_degree + args.n - 1}")
    kind = args.kind.upper()
    params = {"moments": _moments_arg(args)}
    names = {"A": ("t1", "t1p"), "B": ("x", "y", "a", "ap"), "C": ("x", "y", "q1", "q2"),
             "D": ("x", "y", "a", "ap", "q1", "q2"), "E": ("a", "q", "y")}
    if kind not in names:
        raise ConfigError(f"unknown model kind {args.kind!r}")
    for key in names[kind]:
        val = getattr(args, key, None)
        if val is None:
            if kind == "E" and key == "a":
                params["a"] = None
                continue
            raise ConfigError(f"kind {kind} needs --{key}")
        if key == "y" and kind == "E":
            params["y"] = [_scalar(v) for v in val]
        elif key == "y":
            params["y"] = _scalar(val[0])
        else:
            params[key] = _scalar(val)
    spec = model_weights(kind, params, args.n, args.H)
    res = cone_sum(spec, compare_degree=args.compare_degree)
    payload = res.to_json()
    payload["z"] = encode_scalar(res.z())
    if any(isinstance(params.get(k), complex) for k in ("q1", "q2", "q")):
        payload["field"] = "complex-double"
    rows = [{"degree": list(k), "value": encode_scalar(v)} for k, v in sorted(res.breakdown.items())]
    _emit(args, payload, rows)
    return 0


def cmd_kontsevich(args) -> int:
    _positive("n", args.n)
    if args.y is None or len(args.y) != args.n:
        raise ConfigError("--y needs exactly n values")
    xi = xi_from_r(_r_function(args.r), args.H + 1)
    a = None if args.a is None else _scalar(args.a)
    res = kontsevich_sum(xi, a, _scalar(args.q), [_scalar(v) for v in args.y], args.n, args.H)
    payload = res.to_json()
    payload["z"] = encode_scalar(res.z())
    rows = [{"degree": list(k), "value": encode_scalar(v)} for k, v in sorted(res.breakdown.items())]
    _emit(args, payload, rows)
    return 0


IDENTITIES = ("all", "closed_forms", "cauchy", "gaussian", "lattice", "toda", "duality", "det", "operator",
              "hypergeometric", "mc", "quadrature", "angle")


def cmd_verify(args) -> int:
    _positive("max-weight", args.max_weight)
    _positive("max-n", args.max_n)
    if args.identity not in IDENTITIES:
        raise ConfigError(f"unknown identity {args.identity!r}")
    if args.identity == "cauchy" and args.D is not None:
        rng = V._rng(args.seed)
        reps = [V.verify_cauchy_littlewood(V._random_coupling(rng, args.D), V._random_coupling(rng, args.D), args.D)
                for _ in range(5)]
        suite = V.SuiteReport(reps, {"identity": "cauchy", "D": args.D, "seed": args.seed})
    elif args.identity == "duality" and args.config:
        cfg, _ = _load_json(args.config)
        try:
            n, q = int(cfg["n"]), parse_scalar(cfg["q"])
            lam, ls = Partition(cfg["lambda"]), Partition(cfg["lambda_star"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad duality config: {exc}") from exc
        from .duality import DualPair, verify_duality

        res = verify_duality(DualPair(lam, ls, n, q))
        rep = V.VerificationReport("duality", {"n": n, "q": encode_scalar(q), "lambda": list(lam),
                                               "lambda_star": list(ls)}, V.EXACT, abs(complex(res)), 0.0,
                                   res == 0, 0.0, {"residual": encode_scalar(res)})
        suite = V.SuiteReport([rep], {"identity": "duality", "config": cfg})
    elif args.identity == "operator" and args.config:
        suite = V.SuiteReport([_operator_from_config(args)], {"identity": "operator"})
    else:
        include = None if args.identity == "all" else [args.identity]
        suite = V.verify_all(args.max_weight, args.max_n, args.field, args.seed, args.samples, include)
    text = suite.dumps(include_runtime=args.runtime) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.format == "csv":
        rows = [{"identity": r.identity, "field": r.field, "passed": r.passed, "residual": r.residual,
                 "tolerance": r.tolerance} for r in suite.reports]
        _emit(args, {}, rows)
    elif args.out or not args.report:
        _emit(args, suite.to_json(args.runtime))
    for r in suite.reports:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.identity} residual={r.residual:.3g}", file=sys.stderr)
    return 0 if suite.passed else 1


def _operator_from_config(args):
    from .duality import verify_operator_identity

    cfg, _ = _load_json(args.config)
    try:
        n, D = int(cfg["n"]), int(cfg["D"])
        q1, q2 = parse_scalar(cfg["q1"]), parse_scalar(cfg["q2"])
        pw = cfg["pair"]
        if pw["type"] == "geometric":
            pair = geometric_pair_weight(parse_scalar(pw["c"]))
        elif pw["type"] == "finite":
            pair = finite_pair_weight({(int(a), int(b)): parse_scalar(v) for a, b, v in pw["entries"]})
        else:
            raise ValueError(f"unknown pair weight type {pw['type']!r}")
        ls, lps = Partition(cfg.get("lambda_star", [])), Partition(cfg.get("lambda_prime_star", []))
        H = cfg.get("H")
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad operator config: {exc}") from exc
    rep = verify_operator_identity(pair, ls, lps, q1, q2, n, D, H)
    return V.VerificationReport(
        "operator", {"n": n, "D": D, "lambda_star": list(ls), "lambda_prime_star": list(lps)},
        V.EXACT if rep.exact else V.COMPLEX, rep.residual, 0.0 if rep.exact else rep.tolerance, rep.passed, 0.0,
        {"per_degree": {str(e): encode_scalar(v) for e, v in rep.residual_by_degree.items()}})


def cmd_moments(args) -> int:
    if args.source == "gaussian":
        g = gaussian_moments(args.K)
    elif args.source == "general":
        g = general_moments(lambda z: -np.abs(z) ** 2, args.K)
    else:
        g, _ = _load_table(args.source)
    _emit(args, g.to_json(), [{"k": k, "m": m, "value": encode_scalar(g[k, m])}
                              for k in range(g.K + 1) for m in range(g.K + 1)])
    return 0


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="schurtau", description="Schur-function expansions of matrix-model tau functions")
    p.add_argument("--version", action="version", version=f"schurtau {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--config", help="JSON file whose keys fill in unset flags")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", parents=[common], help="double Schur series from moments")
    e.add_argument("--moments", default="gaussian", help="gaussian | general | path to a JSON table")
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--D", type=int, default=2)
    e.set_defaults(func=cmd_expand)

    s = sub.add_parser("sum", parents=[common], help="discrete lattice model sum")
    s.add_argument("--kind", required=True)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--H", type=int, default=4)
    s.add_argument("--moments", help="gaussian | geometric:c | r:<preset> | JSON table path")
    for name in ("t1", "t1p", "x", "a", "ap", "q1", "q2", "q"):
        s.add_argument(f"--{name}")
    s.add_argument("--y", nargs="+")
    s.add_argument("--compare-degree", type=int, dest="compare_degree")
    s.set_defaults(func=cmd_sum)

    k = sub.add_parser("kontsevich", parents=[common], help="axial model at t(a, q) and t'(y)")
    k.add_argument("--n", type=int, default=1)
    k.add_argument("--H", type=int, default=6)
    k.add_argument("--q", default="1/2")
    k.add_argument("--a")
    k.add_argument("--y", nargs="+")
    k.add_argument("--r", default="k", help="r(k) preset: k, k^2, k(k+3/2), 1/k")
    k.set_defaults(func=cmd_kontsevich)

    v = sub.add_parser("verify", parents=[common], help="run identity checks")
    v.add_argument("identity", nargs="?", default="all", choices=IDENTITIES)
    v.add_argument("--field", choices=("exact", "complex", "all"), default="all")
    v.add_argument("--max-weight", type=int, default=4, dest="max_weight")
    v.add_argument("--max-n", type=int, default=3, dest="max_n")
    v.add_argument("--D", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--H", type=int)
    v.add_argument("--q1")
    v.add_argument("--q2")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--report", help="write the JSON suite report here")
    v.add_argument("--runtime", action="store_true", help="include wall times (breaks byte-identity)")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("moments", parents=[common], help="print a moment table")
    m.add_argument("--source", default="gaussian", help="gaussian | general | JSON table path")
    m.add_argument("--K", type=int, default=4)
    m.set_defaults(func=cmd_moments)
    return p


def _apply_config(parser: argparse.ArgumentParser, args) -> None:
    if not getattr(args, "config", None) or args.command == "verify" and args.identity in ("duality", "operator"):
        return
    cfg, _ = _load_json(args.config)
    if not isinstance(cfg, dict):
        raise ConfigError("config file must hold a JSON object")
    for key, val in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"unknown config key {key!r}")
        if getattr(args, attr) in (None, parser.get_default(attr)):
            setattr(args, attr, val)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        _apply_config(parser, args)
        return args.func(args)
    except (ConfigError, CutoffError, DomainError, TruncationError, QuadratureError, IndexError,
            KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
