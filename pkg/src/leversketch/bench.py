"""Seeded benchmark harness: instance generators and trial batches.

A :class:`BenchSpec` pins everything a batch needs: the instance family,
its dimensions, the accuracy target, the trial count, and a base seed.
Trial t derives its own u64 seed from (base_seed, t), generates a fresh
instance, runs the sketched solver, and compares against the exact oracle.
Output content is deterministic for a fixed spec regardless of how many
worker threads ran the trials (wall-clock milliseconds are reported in
their own column and excluded from any determinism claim).
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from . import densemat, qcost, solve
from ._rng import derive_seed, stream
from .densemat import DenseMatrix
from .sketch import SketchConfig

GENERATORS = ("gaussian", "ill_conditioned", "coherent_rows")
THREADS_ENV_VAR = "LEVER_SKETCH_THREADS"
BENCH_CSV_HEADER = "trial,seed,m,ratio,passed,rows_classical,rows_quantum_model,wall_ms"

_ILL_COND_DECADES = 8.0
_COHERENT_ROW_SCALE = 1e6
DEFAULT_RESIDUAL_FRACTION = 0.5


@dataclass(frozen=True)
class BenchSpec:
    """One benchmark batch.

    ``lam`` (absolute) or ``lam_rel`` (multiplied by ||A||^2 per instance)
    switches the batch to ridge mode; ``scores_mode`` is "exact" or
    "approximate" with perturbation level ``eps0``.
    """

    generator: str
    n: int
    d: int
    N: int = 1
    eps: float = 0.25
    lam: float | None = None
    lam_rel: float | None = None
    trials: int = 100
    base_seed: int = 0
    scores_mode: str = "exact"
    eps0: float = 0.1

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.lam is not None and self.lam_rel is not None:
            raise ValueError("give at most one of lam and lam_rel")

    @property
    def is_ridge(self) -> bool:
        return self.lam is not None or self.lam_rel is not None


@dataclass(frozen=True)
class TrialRow:
    trial: int
    seed: int
    m: int
    ratio: float
    passed: bool
    rows_classical: int
    rows_quantum_model: float
    wall_ms: float


def design_matrix(generator: str, n: int, d: int, rng: np.random.Generator) -> DenseMatrix:
    """Draw an n-by-d design from the named family.

    gaussian: i.i.d. standard normal entries.  ill_conditioned: planted
    SVD with singular values decaying geometrically over 8 decades.
    coherent_rows: gaussian plus one heavy row that carries leverage
    close to 1, the stress case for uniform row sampling.
    """
    a = rng.standard_normal((n, d))
    if generator == "gaussian":
        return densemat.matrix(a)
    if generator == "ill_conditioned":
        u = np.linalg.qr(a)[0]
        v = np.linalg.qr(rng.standard_normal((d, d)))[0]
        s = np.logspace(0.0, -_ILL_COND_DECADES, d)
        return densemat.matrix(u @ (s[:, None] * v.T))
    if generator == "coherent_rows":
        heavy = rng.standard_normal(d)
        a[0] = _COHERENT_ROW_SCALE * heavy / np.linalg.norm(heavy)
        return densemat.matrix(a)
    raise ValueError(f"unknown generator {generator!r}")


def make_instance(
    generator: str,
    n: int,
    d: int,
    N: int,
    rng: np.random.Generator,
    residual_fraction: float = DEFAULT_RESIDUAL_FRACTION,
) -> tuple[DenseMatrix, DenseMatrix]:
    """Design plus targets B = A X + noise at the given residual fraction.

    The noise Frobenius norm is scaled to ``residual_fraction`` times
    ||A X||_F, so the optimal residual is well away from zero and
    objective ratios are well-conditioned.
    """
    A = design_matrix(generator, n, d, rng)
    x_planted = rng.standard_normal((d, N))
    ax = A.data @ x_planted
    noise = rng.standard_normal((n, N))
    scale = np.linalg.norm(noise)
    if scale > 0:
        noise *= residual_fraction * np.linalg.norm(ax) / scale
    return A, densemat.matrix(ax + noise)


def objective_ratio(candidate: float, oracle: float, scale_sq: float) -> float:
    """candidate/oracle with the consistent-system (oracle ~ 0) guard."""
    if oracle <= 1e-14 * scale_sq:
        return 1.0 if candidate <= 1e-12 * scale_sq else math.inf
    return candidate / oracle


def run_trial(spec: BenchSpec, t: int) -> TrialRow:
    """Run trial ``t`` of the batch (independent of every other trial)."""
    trial_seed = derive_seed(spec.base_seed, t)
    inst_rng = stream(trial_seed, 0)
    solver_seed = derive_seed(trial_seed, 1)
    t0 = time.perf_counter()
    A, B = make_instance(spec.generator, spec.n, spec.d, spec.N, inst_rng)
    cfg = SketchConfig(seed=solver_seed)
    if spec.is_ridge:
        lam = spec.lam
        if lam is None:
            lam = spec.lam_rel * densemat.spectral_norm(A) ** 2
        b = B.data[:, 0]
        problem = solve.RidgeProblem(A=A, b=b, lam=lam, eps=spec.eps)
        sol = solve.solve_ridge(
            problem, cfg, scores_mode=spec.scores_mode, eps0=spec.eps0
        )
        x_star = densemat.exact_ridge(A, b, lam)
        oracle = solve.ridge_objective(A, b, lam, x_star)
        scale_sq = float(np.linalg.norm(b) ** 2)
    else:
        mode = "linear" if spec.N == 1 else "multiple"
        problem = solve.RegressionProblem(A=A, B=B, eps=spec.eps, mode=mode)
        sol = solve.solve_multiple(
            problem, cfg, scores_mode=spec.scores_mode, eps0=spec.eps0
        )
        x_star = densemat.exact_least_squares(A, B)
        oracle = float(np.linalg.norm(A.data @ x_star.data - B.data) ** 2)
        scale_sq = densemat.frobenius_norm(B) ** 2
    ratio = objective_ratio(sol.objective, oracle, scale_sq)
    wall_ms = (time.perf_counter() - t0) * 1e3
    return TrialRow(
        trial=t,
        seed=trial_seed,
        m=sol.m_used,
        ratio=ratio,
        passed=ratio <= 1.0 + spec.eps,
        rows_classical=sol.ledger.total,
        rows_quantum_model=qcost.sampling_query_model(spec.n, sol.m_used),
        wall_ms=wall_ms,
    )


def worker_count() -> int:
    """Trial parallelism cap from LEVER_SKETCH_THREADS (0 or unset = auto)."""
    raw = os.environ.get(THREADS_ENV_VAR, "0")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}")
    if value < 0:
        raise ValueError(f"{THREADS_ENV_VAR} must be >= 0")
    return value if value > 0 else (os.cpu_count() or 1)


def run_bench(spec: BenchSpec) -> list[TrialRow]:
    """Run every trial of the batch, in parallel when allowed.

    Rows come back in trial order whatever the execution order was.
    BLAS pools are pinned to one thread for the duration: the factorization
    shapes here are tall and skinny, where BLAS threading is pure spin
    overhead, and trial-level threads would oversubscribe it anyway.
    """
    workers = min(worker_count(), spec.trials)
    with threadpool_limits(limits=1, user_api="blas"):
        if workers <= 1:
            return [run_trial(spec, t) for t in range(spec.trials)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda t: run_trial(spec, t), range(spec.trials)))


def rows_to_csv(rows: list[TrialRow], include_summary: bool = True) -> str:
    """Render trial rows as the bench CSV (header, rows, summary line)."""
    lines = [BENCH_CSV_HEADER]
    for r in rows:
        ratio = "inf" if math.isinf(r.ratio) else f"{r.ratio:.17g}"
        lines.append(
            f"{r.trial},{r.seed},{r.m},{ratio},{int(r.passed)},"
            f"{r.rows_classical},{r.rows_quantum_model:.17g},{r.wall_ms:.3f}"
        )
    if include_summary:
        passed = sum(1 for r in rows if r.passed)
        lines.append(
            f"# summary: trials={len(rows)} passed={passed} "
            f"pass_fraction={passed / len(rows):.17g}"
        )
    return "\n".join(lines) + "\n"


def strip_wall_ms(csv_text: str) -> str:
    """Drop the wall_ms column, leaving only deterministic content."""
    out = []
    for line in csv_text.splitlines():
        if line.startswith("#"):
            out.append(line)
        else:
            out.append(line.rsplit(",", 1)[0])
    return "\n".join(out) + "\n"
