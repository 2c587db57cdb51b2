"""Command-line front end.

Subcommands: prox, threshold, timing, counterexample, sweep, recover.
Reports go to stdout as CSV unless --out is given; several subcommands can
also render a figure next to the CSV via --fig.  Exit codes: 0 success,
1 validation error, 2 assertion failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench
from .penalties import KINDS, PenaltySpec, scaled_prox_values
from .pie import PieParams, prox_pie
from .sensing import MatrixKind, SignalSpec, gen_matrix, gen_signal, relative_error, trial_seeds
from .solver import IstaConfig, Problem, ista_solve, mu_max


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the contract here is 1 for any
    validation problem, so route parser errors through exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(1)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_spec(args) -> PenaltySpec:
    kind = args.penalty
    lam_default, shape_default = bench.TABLE3_PARAMS[kind]
    lam = lam_default if args.lam is None else args.lam
    if kind == "pie":
        shape = shape_default if args.sigma is None else args.sigma
    else:
        shape = shape_default if args.a is None else args.a
    return PenaltySpec(kind=kind, lam=lam, shape=shape)


def _matrix_kind(args) -> MatrixKind:
    if args.matrix == "dct":
        return MatrixKind.dct(args.F)
    return MatrixKind.gaussian()


def _cmd_prox(args) -> int:
    spec = _build_spec(args)
    if spec.kind == "pie":
        values = prox_pie(args.x0, PieParams(mu=args.mu, lam=spec.lam, sigma=spec.shape)).values
    elif spec.kind in ("scad", "mcp"):
        values = (float(scaled_prox_values(spec, args.mu, np.array([args.x0]))[0]),)
    else:
        from .penalties import prox_scalar

        values = prox_scalar(spec, args.mu * spec.lam, args.x0).values
    _emit(",".join(repr(v) for v in values) + "\n", args.out)
    return 0


def _cmd_threshold(args) -> int:
    if (args.mulambda is None) != (args.sigma is None):
        raise ValueError("--mulambda and --sigma must be given together")
    pairs = bench.TABLE1_PAIRS if args.mulambda is None else ((args.mulambda, args.sigma),)
    rows = bench.table1_rows(pairs)
    _emit(bench.table1_report(pairs), args.out)
    if args.fig:
        from .plots import save_threshold_figure

        save_threshold_figure([r[:4] for r in rows if r[4] == "ok"], args.fig)
    return 0


def _cmd_timing(args) -> int:
    _emit(bench.timing_bench(points=args.points, repeats=args.repeats), args.out)
    return 0


def _cmd_counterexample(args) -> int:
    checks = bench.counterexample_check()
    lines = ["label,passed,detail"]
    for label, passed, detail in checks:
        lines.append("%s,%s,%s" % (label, passed, detail))
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if all(p for _, p, _ in checks) else 2


def _cmd_sweep(args) -> int:
    trials = args.trials
    k_list = tuple(args.k) if args.k else None
    if args.full:
        trials = 100 if trials is None else trials
        k_list = bench.FULL_K if k_list is None else k_list
    else:
        trials = 20 if trials is None else trials
        k_list = bench.DESK_K if k_list is None else k_list
    cfg = bench.SweepConfig(
        matrix=_matrix_kind(args),
        m=args.m,
        n=args.n,
        k_list=k_list,
        trials=trials,
        penalties=tuple(bench.default_penalty(k) for k in args.penalty),
        mu_frac=args.mu_frac,
        eps=args.eps,
        maxiter=args.maxiter,
        seed=args.seed,
    )
    reports = bench.run_sweep(cfg, threads=args.threads)
    _emit(bench.reports_to_csv(reports), args.out)
    if args.fig:
        from .plots import save_sweep_figure

        save_sweep_figure(reports, args.fig)
    return 0


def _cmd_recover(args) -> int:
    spec = _build_spec(args)
    kind = _matrix_kind(args)
    seed_mat, seed_sig = trial_seeds(args.seed, args.k, 0)
    A = gen_matrix(kind, args.m, args.n, seed_mat)
    x = gen_signal(SignalSpec(n=args.n, k=args.k, seed=seed_sig))
    prob = Problem(A=A, b=A @ x, penalty=spec)
    mu = args.mu_frac * mu_max(A, spec)
    res = ista_solve(
        prob, IstaConfig(mu=mu, eps=args.eps, maxiter=args.maxiter, record_objective=False)
    )
    err = relative_error(res.x_final, x)
    _emit(
        "matrix,penalty,k,rel_error,iterations,success\n%s,%s,%d,%s,%d,%s\n"
        % (args.matrix, spec.kind, args.k, repr(err), res.iterations, err < 0.01),
        args.out,
    )
    if args.fig:
        from .plots import save_recover_figure

        save_recover_figure(x, res.x_final, args.fig)
    return 0


def _add_matrix_flags(p) -> None:
    p.add_argument("--matrix", choices=("gaussian", "dct"), default="gaussian")
    p.add_argument("--F", type=int, default=1, help="oversampling factor for dct matrices")
    p.add_argument("--m", type=int, default=128)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--mu-frac", dest="mu_frac", type=float, default=0.99)
    p.add_argument("--eps", type=float, default=1e-5)
    p.add_argument("--maxiter", type=int, default=3000)
    p.add_argument("--seed", type=int, default=0)


def _add_penalty_flags(p) -> None:
    p.add_argument("--penalty", choices=KINDS, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None, help="pie shape parameter")
    p.add_argument("--a", type=float, default=None, help="shape parameter for scad/mcp/log/tl1/cap")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pieprox", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prox", help="evaluate one prox point")
    _add_penalty_flags(p)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_prox)

    p = sub.add_parser("threshold", help="jump-threshold table rows")
    p.add_argument("--mulambda", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--fig", default=None)
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("timing", help="compare the three prox formulas")
    p.add_argument("--points", type=int, default=1_000_000)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_timing)

    p = sub.add_parser("counterexample", help="checks against the defective baseline formula")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_counterexample)

    p = sub.add_parser("sweep", help="success-rate experiment over sparsity levels")
    _add_matrix_flags(p)
    p.add_argument("--k", type=int, nargs="+", default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--penalty", choices=KINDS, nargs="+", required=True)
    p.add_argument("--full", action="store_true", help="trials=100 and the full k grid")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--fig", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("recover", help="single reconstruction, prints relative error")
    _add_matrix_flags(p)
    _add_penalty_flags(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out", default=None)
    p.add_argument("--fig", default=None)
    p.set_defaults(func=_cmd_recover)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1
    except AssertionError as exc:
        sys.stderr.write("assertion failed: %s\n" % exc)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
