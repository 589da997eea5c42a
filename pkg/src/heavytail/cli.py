"""Command-line front end.

Subcommands: tail (classify one statistic and evaluate its approximation),
matrix (dump a quadratic-form matrix), regions (scan the AR(2) parameter
plane), simulate (Monte Carlo tail experiment), calibrate (risk along a grid
of alternatives), dist (innovation-law queries).

Every run echoes its resolved configuration as a '#'-prefixed header line,
reals carry 17 significant digits, and line endings are LF.  Exit codes:
0 on success, 2 on usage errors, 1 on domain errors (the message names the
violated precondition).  HEAVYTAIL_THREADS caps the worker pool; results do
not depend on it.
"""

import argparse
import sys
from contextlib import contextmanager

import numpy as np

from .ar_quadform import ArModel, autocov_matrix, test_matrix
from .ar2_regions import region_grid, write_region_csv
from .monte_carlo import (DEFAULT_A_GRID, McConfig, calibrate_risk,
                          run_tail_experiment, write_risk_csv, write_tail_csv)
from .student_dist import (cdf, density, make_law, normal_quantile,
                           quantile_tail, survival, tail_constant,
                           upper_quantile)
from .tail_formulas import ar1_upper_tail, classify, evaluate


def _fmt(value):
    """Echo form of one resolved value: none / integer / 17-digit real."""
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return "%d" % value
    return format(float(value), ".17g")


def _config_line(cmd, pairs):
    return "config cmd=%s %s" % (cmd, " ".join("%s=%s" % (k, _fmt(v))
                                               for k, v in pairs))


@contextmanager
def _open_out(args):
    path = getattr(args, "out", None)
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh
    else:
        yield sys.stdout


def _model(args):
    theta = (args.a,) if args.b is None else (args.a, args.b)
    return ArModel(theta, args.n)


def _cmd_tail(args, fh):
    line = _config_line("tail", [("alpha", args.alpha), ("a", args.a),
                                 ("b", args.b), ("n", args.n), ("k", args.k),
                                 ("t", args.t)])
    fh.write("# %s\n" % line)
    if args.b is None:
        tail = ar1_upper_tail(args.a, args.n, args.k, args.alpha)
    else:
        tail = classify(autocov_matrix(_model(args), args.k), args.alpha)[1]
    coef = "none" if tail.coef is None else _fmt(tail.coef)
    fh.write("regime=%s coef=%s\n" % (tail.regime, coef))
    if tail.note:
        fh.write("# note: %s\n" % tail.note)
    if args.t is not None:
        raw = evaluate(tail, args.t)
        fh.write("t=%s p=%s raw=%s\n"
                 % (_fmt(args.t), _fmt(min(max(raw, 0.0), 1.0)), _fmt(raw)))


def _cmd_matrix(args, fh):
    line = _config_line("matrix", [("a", args.a), ("b", args.b),
                                   ("a0", args.a0), ("n", args.n),
                                   ("k", args.k)])
    fh.write("# %s\n" % line)
    if args.a0 is not None:
        if args.b is not None:
            raise ValueError("need an order-1 model with a reference a0")
        form = test_matrix(args.a, args.a0, args.n)
    else:
        form = autocov_matrix(_model(args), args.k)
    for row in form.entries:
        fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def _cmd_regions(args, fh):
    line = _config_line("regions", [("a-min", args.a_min), ("a-max", args.a_max),
                                    ("b-min", args.b_min), ("b-max", args.b_max),
                                    ("steps", args.steps), ("kmax", args.kmax)])
    rows = region_grid(args.a_min, args.a_max, args.b_min, args.b_max,
                       args.steps, kmax=args.kmax)
    write_region_csv(rows, fh, header_lines=[line])


def _cmd_simulate(args, fh):
    k = args.k
    if k is None and args.a0 is None:
        k = 1
    line = _config_line("simulate", [("alpha", args.alpha), ("a", args.a),
                                     ("b", args.b), ("a0", args.a0),
                                     ("n", args.n), ("k", k),
                                     ("replicas", args.replicas),
                                     ("seed", args.seed),
                                     ("t-min", args.t_min),
                                     ("t-max", args.t_max),
                                     ("points", args.points)])
    cfg = McConfig(model=_model(args), law=make_law(args.alpha), k=k,
                   a0=args.a0, replicas=args.replicas, seed=args.seed,
                   t_min=args.t_min, t_max=args.t_max, points=args.points)
    est = run_tail_experiment(cfg)
    write_tail_csv(est, fh, header_lines=[line])


def _cmd_calibrate(args, fh):
    custom = [args.a_min, args.a_max, args.steps]
    if any(v is not None for v in custom):
        if any(v is None for v in custom):
            raise ValueError("need all of --a-min, --a-max, --steps "
                             "for a custom grid")
        if not args.a_min < args.a_max:
            raise ValueError("need a_min < a_max")
        if args.steps < 2:
            raise ValueError("need steps >= 2")
        grid = [float(v) for v in
                np.linspace(args.a_min, args.a_max, args.steps)]
    else:
        grid = list(DEFAULT_A_GRID)
    line = _config_line("calibrate", [("alpha", args.alpha), ("a0", args.a0),
                                      ("n", args.n), ("eta", args.eta),
                                      ("replicas", args.replicas),
                                      ("seed", args.seed),
                                      ("a-min", args.a_min),
                                      ("a-max", args.a_max),
                                      ("steps", args.steps),
                                      ("grid-size", len(grid))])
    rows = calibrate_risk(grid, args.a0, args.n, args.alpha, args.eta,
                          replicas=args.replicas, seed=args.seed)
    write_risk_csv(rows, fh, header_lines=[line])


def _cmd_dist(args, fh):
    line = _config_line("dist", [("alpha", args.alpha), ("x", args.x),
                                 ("u", args.u)])
    fh.write("# %s\n" % line)
    law = make_law(args.alpha)
    fh.write("alpha=%s\n" % _fmt(law.alpha))
    fh.write("k_s=%s\n" % _fmt(law.k_s))
    fh.write("tail_constant=%s\n" % _fmt(tail_constant(law)))
    if args.x is not None:
        fh.write("density=%s\n" % _fmt(density(law, args.x)))
        fh.write("cdf=%s\n" % _fmt(cdf(law, args.x)))
        fh.write("survival=%s\n" % _fmt(survival(law, args.x)))
    if args.u is not None:
        fh.write("quantile_tail=%s\n" % _fmt(quantile_tail(law, args.u)))
        if args.u < 0.5:
            fh.write("upper_quantile=%s\n" % _fmt(upper_quantile(law, args.u)))
        fh.write("normal_quantile=%s\n" % _fmt(normal_quantile(args.u)))


def _add_out(sub):
    sub.add_argument("--out", help="write output to this file instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="heavytail",
        description="Finite-sample tail approximations for autocovariances "
                    "of AR processes with heavy-tailed innovations.")
    subs = parser.add_subparsers(dest="cmd", required=True)

    sub = subs.add_parser("tail", help="classify one statistic's tail regime")
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--a", type=float, required=True)
    sub.add_argument("--b", type=float, default=None)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", type=int, default=1)
    sub.add_argument("--t", type=float, default=None,
                     help="also evaluate the approximation at this threshold")
    _add_out(sub)
    sub.set_defaults(handler=_cmd_tail)

    sub = subs.add_parser("matrix", help="dump a quadratic-form matrix")
    sub.add_argument("--a", type=float, required=True)
    sub.add_argument("--b", type=float, default=None)
    sub.add_argument("--a0", type=float, default=None,
                     help="dump the test-statistic matrix for this reference")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", type=int, default=1)
    _add_out(sub)
    sub.set_defaults(handler=_cmd_matrix)

    sub = subs.add_parser("regions", help="scan the AR(2) parameter plane")
    sub.add_argument("--a-min", type=float, default=-2.0)
    sub.add_argument("--a-max", type=float, default=2.0)
    sub.add_argument("--b-min", type=float, default=-2.0)
    sub.add_argument("--b-max", type=float, default=1.0)
    sub.add_argument("--steps", type=int, default=41)
    sub.add_argument("--kmax", type=int, default=200)
    _add_out(sub)
    sub.set_defaults(handler=_cmd_regions)

    sub = subs.add_parser("simulate", help="Monte Carlo tail experiment")
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--a", type=float, required=True)
    sub.add_argument("--b", type=float, default=None)
    sub.add_argument("--a0", type=float, default=None,
                     help="simulate the test statistic instead of a lag")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", type=int, default=None,
                     help="autocovariance lag (default 1 without --a0)")
    sub.add_argument("--replicas", type=int, default=100_000)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--t-min", type=float, default=10.0)
    sub.add_argument("--t-max", type=float, default=1e8)
    sub.add_argument("--points", type=int, default=61)
    _add_out(sub)
    sub.set_defaults(handler=_cmd_simulate)

    sub = subs.add_parser("calibrate", help="risk along a grid of alternatives")
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--a0", type=float, default=0.5)
    sub.add_argument("--n", type=int, default=20)
    sub.add_argument("--eta", type=float, default=0.05)
    sub.add_argument("--replicas", type=int, default=100_000)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--a-min", type=float, default=None)
    sub.add_argument("--a-max", type=float, default=None)
    sub.add_argument("--steps", type=int, default=None)
    _add_out(sub)
    sub.set_defaults(handler=_cmd_calibrate)

    sub = subs.add_parser("dist", help="innovation-law queries")
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--x", type=float, default=None)
    sub.add_argument("--u", type=float, default=None)
    _add_out(sub)
    sub.set_defaults(handler=_cmd_dist)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code is None else int(exc.code)
    try:
        with _open_out(args) as fh:
            args.handler(args, fh)
        return 0
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
