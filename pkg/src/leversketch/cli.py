"""Command-line surface: solve, verify, bench, cost, leverage, sample.

Results go to standard output as JSON (17-significant-digit floats) or
CSV; failures emit a machine-readable JSON object on standard error and
exit with a documented code:

    0  success
    2  input file unusable (parse failure or content violating a precondition)
    3  dimension mismatch between inputs
    4  sketch rank collapse after all retries
    5  invalid flag value

Matrix files are header-less CSV, one row per line (see densemat).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bench, densemat, leverage, qcost, sketch, solve, verify
from . import errors
from ._jsonfmt import dumps
from .sketch import SketchConfig

EXIT_OK = 0
EXIT_MALFORMED_INPUT = 2
EXIT_DIMENSION_MISMATCH = 3
EXIT_RANK_COLLAPSE = 4
EXIT_BAD_FLAG = 5


class _FlagError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports flag problems instead of exiting itself."""

    def error(self, message):
        raise _FlagError(message)


def _emit_error(code: int, message: str) -> int:
    sys.stderr.write(dumps({"error": True, "code": code, "message": message}) + "\n")
    return code


def _load_matrix(path) -> densemat.DenseMatrix:
    try:
        return densemat.read_matrix_csv(path)
    except (OSError, ValueError) as exc:
        raise errors.MalformedInput(f"cannot read matrix from {path}: {exc}")


def _scores_mode(flag: str) -> str:
    return {"exact": "exact", "approx": "approximate"}[flag]


def _cmd_solve(args) -> int:
    A = _load_matrix(args.A)
    rhs_path = args.B if args.B is not None else args.b
    if rhs_path is None:
        raise _FlagError("one of --b or --B is required")
    B = _load_matrix(rhs_path)
    cfg = SketchConfig(seed=args.seed)
    mode = args.mode
    if mode == "ridge":
        if args.lam is None or args.lam <= 0:
            raise _FlagError(
                "ridge requires --lambda > 0 (route lambda = 0 to --mode linear)"
            )
        if B.cols != 1:
            raise errors.DimensionMismatch("ridge expects a single right-hand side")
        b = B.data[:, 0]
        problem = solve.RidgeProblem(A=A, b=b, lam=args.lam, eps=args.eps)
        sol = solve.solve_ridge(
            problem, cfg, scores_mode=_scores_mode(args.scores), eps0=args.eps0
        )
        oracle_obj = ratio = None
        if args.oracle:
            x_star = densemat.exact_ridge(A, b, args.lam)
            oracle_obj = solve.ridge_objective(A, b, args.lam, x_star)
            ratio = bench.objective_ratio(
                sol.objective, oracle_obj, float(np.linalg.norm(b) ** 2)
            )
    else:
        if args.lam is not None:
            raise _FlagError("--lambda only applies to --mode ridge")
        problem = solve.RegressionProblem(A=A, B=B, eps=args.eps, mode=mode)
        run = solve.solve_linear if mode == "linear" else solve.solve_multiple
        sol = run(problem, cfg, scores_mode=_scores_mode(args.scores), eps0=args.eps0)
        oracle_obj = ratio = None
        if args.oracle:
            x_star = densemat.exact_least_squares(A, B)
            oracle_obj = float(np.linalg.norm(A.data @ x_star.data - B.data) ** 2)
            ratio = bench.objective_ratio(
                sol.objective, oracle_obj, densemat.frobenius_norm(B) ** 2
            )
    if args.out:
        densemat.write_matrix_csv(sol.X, args.out)
    payload = solve.solution_to_json(
        sol, n=A.rows, d=A.cols, N=B.cols,
        oracle_objective=oracle_obj, ratio=ratio,
    )
    sys.stdout.write(dumps(payload) + "\n")
    return EXIT_OK


def _cmd_verify(args) -> int:
    A = _load_matrix(args.A)
    B = None
    if args.check in ("famp", "samp"):
        if args.B is None:
            raise _FlagError(f"--check {args.check} requires --B")
        B = _load_matrix(args.B)
    m = args.m if args.m is not None else sketch.recommended_m(A.cols, args.eps)
    reports, aggregate = verify.check_trials(
        args.check, A, B, args.eps, m, args.trials, args.seed,
        identity=args.identity, min_pass=args.min_pass,
    )
    payload = {
        "aggregate": verify.report_to_json(aggregate),
        "pass_fraction": 1.0 - aggregate.statistic,
        "trials": [verify.report_to_json(r) for r in reports],
    }
    sys.stdout.write(dumps(payload) + "\n")
    return EXIT_OK if aggregate.passed else 1


def _cmd_bench(args) -> int:
    try:
        with open(args.spec) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise errors.MalformedInput(f"cannot read bench spec {args.spec}: {exc}")
    try:
        spec = bench.BenchSpec(**raw)
    except (TypeError, ValueError) as exc:
        raise errors.MalformedInput(f"bad bench spec: {exc}")
    rows = bench.run_bench(spec)
    sys.stdout.write(bench.rows_to_csv(rows))
    return EXIT_OK


def _parse_sweep(text: str):
    parts = text.split(":")
    if len(parts) != 4 or parts[0] != "n":
        raise _FlagError("--sweep expects n:start:end:factor")
    try:
        start, end, factor = int(parts[1]), int(parts[2]), float(parts[3])
    except ValueError as exc:
        raise _FlagError(f"bad --sweep values: {exc}")
    if start < 1 or end < start or factor <= 1.0:
        raise _FlagError("--sweep needs 1 <= start <= end and factor > 1")
    values = []
    x = float(start)
    while x <= end:
        values.append(int(round(x)))
        x *= factor
    return values


def _cmd_cost(args) -> int:
    sd = None
    if args.sd_from is not None:
        if args.lam is None:
            raise _FlagError("--sd-from requires --lambda")
        M = _load_matrix(args.sd_from)
        fac = densemat.svd_factor(M)
        sd = leverage.statistical_dimension(fac.singular_values, args.lam)
    log_policy = {"none": "none", "single": "single_log"}[args.log]
    try:
        base = qcost.CostModelInputs(
            n=args.n, d=args.d, N=args.N, eps=args.eps, omega=args.omega,
            r=args.r, sd=sd, lam=args.lam, log_policy=log_policy,
        )
    except (errors.NonPositiveDimension, ValueError) as exc:
        raise _FlagError(str(exc))
    lines = ["marker," + ",".join(qcost.COST_CSV_COLUMNS)]
    n_star = qcost.crossover(base)
    if args.sweep:
        grid = _parse_sweep(args.sweep)
        if n_star is not None and n_star not in grid \
                and grid[0] <= n_star <= grid[-1]:
            grid = sorted(set(grid) | {n_star})
        for n in grid:
            inputs = qcost.CostModelInputs(
                n=n, d=args.d, N=args.N, eps=args.eps, omega=args.omega,
                r=args.r, sd=sd, lam=args.lam, log_policy=log_policy,
            )
            report = qcost.quantum_pipeline_cost(inputs)
            marker = "crossover" if n == n_star else ""
            lines.append(marker + "," + qcost.report_csv_row(report))
    else:
        report = qcost.quantum_pipeline_cost(base)
        marker = "crossover" if base.n == n_star else ""
        lines.append(marker + "," + qcost.report_csv_row(report))
    lines.append(f"# crossover_n_star={'NONE' if n_star is None else n_star}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_leverage(args) -> int:
    A = _load_matrix(args.A)
    if args.approx:
        profile = leverage.approx_leverage_scores(A, args.eps0, args.seed)
    else:
        profile = leverage.exact_leverage_scores(A)
    if args.out:
        leverage.write_profile_csv(profile, args.out)
    else:
        for i, s in enumerate(profile.scores):
            sys.stdout.write(f"{i},{s:.17g}\n")
    return EXIT_OK


def _cmd_sample(args) -> int:
    A = _load_matrix(args.A)
    profile = leverage.exact_leverage_scores(A)
    q = sketch.build_distribution(profile)
    m = args.m if args.m is not None else sketch.recommended_m(A.cols, args.eps)
    S = sketch.draw_sketch(q, m, args.seed)
    if args.out:
        sketch.write_sketch_csv(S, args.out)
    else:
        sys.stdout.write(sketch.sketch_csv_text(S))
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="leversketch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[], help="sketched regression solve")
    p.add_argument("--mode", required=True, choices=("linear", "multiple", "ridge"))
    p.add_argument("--A", required=True, help="design matrix CSV")
    p.add_argument("--b", help="right-hand side CSV (n x 1)")
    p.add_argument("--B", help="right-hand side CSV (n x N)")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scores", choices=("exact", "approx"), default="exact")
    p.add_argument("--eps0", type=float, default=leverage.DEFAULT_EPS0)
    p.add_argument("--oracle", action="store_true",
                   help="also run the exact solver and report the ratio")
    p.add_argument("--out", help="write the solution matrix CSV here")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="sketch contract checks over trials")
    p.add_argument("--check", required=True, choices=("se", "famp", "samp"))
    p.add_argument("--A", required=True)
    p.add_argument("--B")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--identity", action="store_true",
                   help="use the exact identity sketch in every trial")
    p.add_argument("--min-pass", dest="min_pass", type=float, default=0.95)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="seeded trial batch from a JSON spec")
    p.add_argument("spec", help="BenchSpec JSON file")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("cost", help="query/time cost model table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--sd-from", dest="sd_from",
                   help="matrix CSV whose statistical dimension replaces d")
    p.add_argument("--r", type=int, default=None, help="row sparsity (default d)")
    p.add_argument("--omega", type=float, default=qcost.DEFAULT_OMEGA)
    p.add_argument("--log", choices=("none", "single"), default="none")
    p.add_argument("--sweep", help="n:start:end:factor geometric grid over n")
    p.set_defaults(func=_cmd_cost)

    p = sub.add_parser("leverage", help="dump a leverage-score profile CSV")
    p.add_argument("--A", required=True)
    p.add_argument("--approx", action="store_true")
    p.add_argument("--eps0", type=float, default=leverage.DEFAULT_EPS0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_leverage)

    p = sub.add_parser("sample", help="dump a drawn sketch operator CSV")
    p.add_argument("--A", required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _FlagError as exc:
        return _emit_error(EXIT_BAD_FLAG, str(exc))
    except (errors.EpsOutOfRange, errors.Eps0OutOfRange, errors.NegativeLambda,
            ValueError) as exc:
        return _emit_error(EXIT_BAD_FLAG, str(exc))
    except errors.DimensionMismatch as exc:
        return _emit_error(EXIT_DIMENSION_MISMATCH, str(exc))
    except errors.SketchRankCollapse as exc:
        return _emit_error(EXIT_RANK_COLLAPSE, str(exc))
    except (errors.MalformedInput, errors.AllZeroMatrix, errors.AllZeroScores,
            errors.NotOrthonormal, errors.ZeroNormInput) as exc:
        return _emit_error(EXIT_MALFORMED_INPUT, str(exc))


if __name__ == "__main__":
    sys.exit(main())
