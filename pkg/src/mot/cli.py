"""``mot`` command line.

Exit codes: 0 success, 1 bad input, 2 a checked property failed.
"""
from __future__ import annotations

import argparse
import inspect
import json
import sys
from pathlib import Path

from . import io
from .config import ConfigError, load_config, parse_overrides
from .costs import CostSpec, ParseError, UnsupportedCost, parse_cost, strict_convex_derivative
from .curtain import is_left_monotone, left_curtain, right_curtain
from .experiments import EXPERIMENTS, curtain_maps_csv
from .lp import MassMismatch, solve_classical, solve_martingale
from .measures import convex_order, extended_order, wasserstein1
from .numeric import MotError, fmt_number
from .shadow import shadow
from .variation import verify_variational

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2


def _measures(args):
    # exact unless a file holds floats; --exact turns floats into an error
    exact = True if args.exact else None
    try:
        mu = io.load_measure(args.mu, exact=exact)
        nu = io.load_measure(args.nu, exact=exact)
    except io.InputError as exc:
        if args.exact:
            raise io.InputError(f"{exc} (--exact needs rational inputs)") from None
        raise
    return mu, nu


def _emit(data: dict, out) -> None:
    text = json.dumps(data, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_check_order(args) -> int:
    mu, nu = _measures(args)
    tol = args.tol
    print(f"convex: {str(convex_order(mu, nu, tol)).lower()}, extended: {str(extended_order(mu, nu, tol)).lower()}")
    return EXIT_OK


def cmd_shadow(args) -> int:
    mu, nu = _measures(args)
    res = shadow(mu, nu, args.tol)
    _emit(
        {
            "shadow": io.measure_to_dict(res.shadow),
            "remainder": io.measure_to_dict(res.remainder),
            "trace": [
                {"x": fmt_number(t.x), "w": fmt_number(t.mass), "start": fmt_number(t.start), "end": fmt_number(t.end)}
                for t in res.trace
            ],
        },
        args.output,
    )
    return EXIT_OK


def cmd_curtain(args) -> int:
    mu, nu = _measures(args)
    plan = (left_curtain if args.side == "left" else right_curtain)(mu, nu, args.tol)
    _emit(io.coupling_to_dict(plan), args.output)
    if args.csv:
        Path(args.csv).write_text(curtain_maps_csv(plan))
    return EXIT_OK


def _cost_note(cost: CostSpec, mu, nu) -> None:
    try:
        hull = (min(nu.xs) - max(mu.xs), max(nu.xs) - min(mu.xs))
        ok = strict_convex_derivative(cost, hull)
    except UnsupportedCost:
        return
    if not ok:
        print(
            f"note: h' is not strictly convex on the instance hull for {cost.format()}; "
            "curtain optimality is not guaranteed (instance-level check)",
            file=sys.stderr,
        )


def cmd_solve(args) -> int:
    mu, nu = _measures(args)
    cost = parse_cost(args.cost, mu, nu)
    exact = True if args.exact else None
    if args.classical:
        plan, value = solve_classical(mu, nu, cost, backend=args.backend, exact=exact)
        print(f"value: {fmt_number(value)}")
        if args.output:
            io.write_json(args.output, io.coupling_to_dict(plan))
        return EXIT_OK
    _cost_note(cost, mu, nu)
    sol = solve_martingale(mu, nu, cost, backend=args.backend, exact=exact)
    print(f"value: {fmt_number(sol.value)}")
    print(f"duality gap: {fmt_number(sol.dual.gap)}")
    if args.output:
        io.write_json(args.output, io.coupling_to_dict(sol.plan))
    if args.dual:
        io.write_json(args.dual, io.dual_to_dict(sol.dual, sol.problem))
    return EXIT_OK if sol.dual.is_feasible(sol.problem) else EXIT_FAIL


def cmd_verify(args) -> int:
    plan = io.load_coupling(args.plan, exact=True if args.exact else None)
    if not (args.variational or args.monotone):
        raise io.InputError("choose --variational and/or --monotone")
    status = EXIT_OK
    if args.monotone:
        w = is_left_monotone(plan)
        if w is None:
            print("monotone: true")
        else:
            print("monotone: false, witness (x, x', y-, y+, y') = " + json.dumps([fmt_number(v) for v in w.as_tuple()]))
            status = EXIT_FAIL
    if args.variational:
        if not args.cost:
            raise io.InputError("--variational needs --cost")
        cost = parse_cost(args.cost, plan.source, plan.target)
        rep = verify_variational(plan, cost, max_points=args.points, trials=args.trials, seed=args.seed, tol=args.tol)
        print(f"variational: {str(rep.passed).lower()}, checked {rep.checked}, worst margin {rep.worst_margin:.3e}")
        for alpha, own, best in rep.violations[:5]:
            pts = sorted((fmt_number(x), fmt_number(y), fmt_number(w)) for (x, y), w in alpha.entries.items())
            print(f"  violation: cost {fmt_number(own)} > competitor {fmt_number(best)} on {json.dumps(pts)}")
        if not rep.passed:
            status = EXIT_FAIL
    return status


def cmd_wasserstein(args) -> int:
    mu, nu = _measures(args)
    w = wasserstein1(mu, nu)
    print("inf" if w == float("inf") else fmt_number(w))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    cfg = load_config(args.config)
    params = cfg.params(args.experiment, parse_overrides(args.set))
    fn = EXPERIMENTS[args.experiment]
    accepted = inspect.signature(fn).parameters
    if args.jobs > 1 and "jobs" in accepted:
        params["jobs"] = args.jobs
    if "tolerances" in accepted:
        params["tolerances"] = cfg.tolerances
    try:
        result = fn(skip=tuple(args.skip or ()), **params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {args.experiment}: {exc}") from None
    report, csv = result if isinstance(result, tuple) else (result, None)
    if args.csv and csv is not None:
        Path(args.csv).write_text(csv)
    out = report.to_text() if args.text else report.to_json()
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mot", description="Martingale optimal transport on finitely supported measures.")
    sub = p.add_subparsers(dest="command", required=True)

    def pair(sp):
        sp.add_argument("--mu", required=True, help="source measure JSON")
        sp.add_argument("--nu", required=True, help="target measure JSON")
        sp.add_argument("--exact", action="store_true", help="rational arithmetic (inputs must be rational)")
        sp.add_argument("--tol", type=float, default=None, help="float-mode tolerance override")

    sp = sub.add_parser("check-order", help="convex and extended convex order")
    pair(sp)
    sp.set_defaults(func=cmd_check_order)

    sp = sub.add_parser("shadow", help="shadow of mu in nu with the per-atom window trace")
    pair(sp)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_shadow)

    sp = sub.add_parser("curtain", help="left or right curtain coupling")
    pair(sp)
    sp.add_argument("--side", choices=("left", "right"), default="left")
    sp.add_argument("-o", "--output")
    sp.add_argument("--csv", help="write x,T1,T2 row maps")
    sp.set_defaults(func=cmd_curtain)

    sp = sub.add_parser("solve", help="martingale (or classical) transport LP")
    pair(sp)
    sp.add_argument("--cost", required=True, help="pow:<p> | abs | neg-abs | exp | poly:<c0,..> | sep:<file> | ind:<s>,<t>")
    sp.add_argument("--classical", action="store_true", help="drop the martingale constraints")
    sp.add_argument("--backend", choices=("auto", "simplex", "highs"), default="auto")
    sp.add_argument("-o", "--output")
    sp.add_argument("--dual", help="write the dual certificate")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="check a plan for monotonicity or local optimality")
    sp.add_argument("--plan", required=True)
    sp.add_argument("--cost")
    sp.add_argument("--variational", action="store_true")
    sp.add_argument("--monotone", action="store_true")
    sp.add_argument("--points", type=int, default=4)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--exact", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("reproduce", help="run a named experiment and print its report")
    sp.add_argument("experiment", choices=sorted(EXPERIMENTS))
    sp.add_argument("--config", help="mot.toml with [tolerances] and [experiments.<id>] tables")
    sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="override an experiment parameter")
    sp.add_argument("--skip", action="append", metavar="CHECK", help="mark a check as skipped")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--exact", action="store_true", help="accepted for symmetry; exact experiments always are")
    sp.add_argument("--text", action="store_true", help="human-readable report instead of JSON")
    sp.add_argument("--csv", help="maps CSV (gauss-curtain)")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("wasserstein", help="Kantorovich distance between equal-mass measures")
    pair(sp)
    sp.set_defaults(func=cmd_wasserstein)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (io.InputError, ParseError, ConfigError, MassMismatch, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MotError as exc:
        # precondition failures (order, extended order) are input problems too
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
