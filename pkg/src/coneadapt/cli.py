"""Command-line interface.

Exit status is 0 on success, 2 when a run hit its sample budget (warning)
and 1 on invalid input or any other error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .experiment import ExperimentConfig, bounds_report, fool_demo, run_experiment
from .funlab import BumpSpec, make_bump, oscillatory_fluky
from .linf import approximate_adaptive, sup_error_on_grid
from .trapezoid import integrate_adaptive

EXIT_OK, EXIT_ERROR, EXIT_WARNING = 0, 1, 2


def parse_fn(text: str, family: str):
    """``bump:a=A,z=Z`` or ``fluky:k=K``."""
    kind, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"bad parameter {item!r} in --fn")
        params[key.strip()] = val.strip()
    if kind == "bump":
        return make_bump(BumpSpec(float(params["a"]), float(params["z"]), family))
    if kind == "fluky":
        return oscillatory_fluky(int(params["k"]))
    raise ValueError(f"unknown function kind {kind!r}")


def _float_list(text: str) -> list:
    return [float(t) for t in text.split(",") if t]


def _common(p):
    p.add_argument("--tau", type=float, default=10.0)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--fn", required=True, help="bump:a=A,z=Z or fluky:k=K")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coneadapt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("integrate", help="adaptive trapezoidal rule on one function"))
    _common(sub.add_parser("approximate", help="adaptive linear spline on one function"))

    p = sub.add_parser("experiment", help="Monte Carlo success rates over random bumps")
    p.add_argument("--problem", choices=["integrate", "approximate"], default="integrate")
    p.add_argument("--n", type=int, default=10000, help="number of random functions")
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--tau", type=_float_list, default=[10.0, 100.0, 1000.0])
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("bounds", help="cost bounds for a given semi-norm value")
    p.add_argument("--problem", choices=["integrate", "approximate"], default="integrate")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seminorm", type=float, required=True)
    p.add_argument("--norm", choices=["F", "Ftilde"], default="F")
    p.add_argument("--sigma", type=float, default=None, help="ball radius (default: from --seminorm)")

    p = sub.add_parser("fool", help="heuristic versus guaranteed rule on 1 - cos(2 pi k x)")
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--eps", type=float, default=1e-14)
    p.add_argument("--tau", type=float, default=100.0)
    p.add_argument("--budget", type=int, default=10**7)
    return parser


def _run_single(args, out) -> int:
    family = "integration" if args.command == "integrate" else "approximation"
    f = parse_fn(args.fn, family)
    if args.command == "integrate":
        res = integrate_adaptive(f, args.eps, tau=args.tau, budget=args.budget)
        report = {"answer": res.answer, "true_error": abs(res.answer - f.exact_integral)}
    else:
        res, approximant = approximate_adaptive(f, args.eps, tau=args.tau, budget=args.budget)
        report = {"n": approximant.n}
        if hasattr(f, "extremum_candidates"):
            report["sup_error"] = sup_error_on_grid(f, approximant)
    report.update(cost=res.cost, n_sequence=res.n_sequence, final_tau=res.final_tau,
                  warning=res.warning, cone_violation_detected=res.cone_violation_detected)
    json.dump(report, out, indent=2)
    out.write("\n")
    return EXIT_WARNING if res.warning else EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("integrate", "approximate"):
            return _run_single(args, out)
        if args.command == "experiment":
            cfg = ExperimentConfig(args.problem, args.n, args.eps, args.tau, args.budget,
                                   args.seed, args.workers)
            rep = run_experiment(cfg)
            text = rep.to_csv() if args.format == "csv" else rep.to_json() + "\n"
            if args.out:
                with open(args.out, "w", newline="") as fh:
                    fh.write(text)
            else:
                out.write(text)
            return EXIT_OK
        if args.command == "bounds":
            rows = bounds_report(args.problem, args.tau, args.eps, args.seminorm, args.norm, args.sigma)
            json.dump(rows, out, indent=2)
            out.write("\n")
            return EXIT_OK
        if args.command == "fool":
            rep = fool_demo(args.k, args.eps, args.tau, args.budget)
            json.dump(rep, out, indent=2)
            out.write("\n")
            return EXIT_WARNING if rep["guaranteed"]["warning"] else EXIT_OK
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
