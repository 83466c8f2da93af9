"""End-to-end sketch-and-solve regression: linear, multiple, and ridge.

The pipeline is: leverage scores of the design (exact, or multiplicatively
perturbed in approximate mode) -> sampling distribution -> m-row sketch ->
exact solve of the sketched problem.  The reported objective is always
evaluated on the FULL problem.  If a draw loses rank relative to the
design, the solver redraws with a derived seed up to 3 times before
raising.  Every run carries a :class:`~leversketch.qcost.QueryLedger`
with the exact classical row reads per stage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import densemat, leverage, qcost, sketch
from ._rng import derive_seed, stream
from .densemat import DenseMatrix
from .errors import DimensionMismatch, NegativeLambda, SketchRankCollapse
from .leverage import DEFAULT_EPS0
from .sketch import SketchConfig, SketchOperator

_MAX_RETRIES = 3

# stream-key tags: scores use (seed, _SCORES_KEY); sketch attempt k uses
# (seed, _SKETCH_KEY_BASE + k)
_SCORES_KEY = 101
_SKETCH_KEY_BASE = 200


@dataclass(frozen=True)
class RegressionProblem:
    """Least-squares instance min ||A X - B||_F with accuracy eps."""

    A: DenseMatrix
    B: DenseMatrix
    eps: float
    mode: str = "multiple"

    def __post_init__(self):
        if self.A.rows != self.B.rows:
            raise DimensionMismatch(
                f"A has {self.A.rows} rows, B has {self.B.rows}"
            )
        if not (0.0 < self.eps < 1.0):
            raise ValueError(f"eps must be in (0, 1), got {self.eps}")
        if self.mode not in ("linear", "multiple"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "linear" and self.B.cols != 1:
            raise DimensionMismatch("linear mode requires a single right-hand side")


@dataclass(frozen=True)
class RidgeProblem:
    """Ridge instance min ||A x - b||^2 + lam ||x||^2 with accuracy eps."""

    A: DenseMatrix
    b: np.ndarray
    lam: float
    eps: float

    def __post_init__(self):
        if self.lam <= 0:
            raise NegativeLambda(f"ridge requires lambda > 0, got {self.lam}")
        if not (0.0 < self.eps < 1.0):
            raise ValueError(f"eps must be in (0, 1), got {self.eps}")
        if np.asarray(self.b).reshape(-1).shape[0] != self.A.rows:
            raise DimensionMismatch("b length must equal A.rows")


@dataclass(frozen=True)
class RegressionSolution:
    """Sketched solution with its full-problem objective and run metadata."""

    mode: str
    X: DenseMatrix
    objective: float
    m_used: int
    retries: int
    seed: int
    ledger: qcost.QueryLedger
    eps: float
    lam: float | None = None

    @property
    def x(self) -> np.ndarray:
        """Solution as a vector (single right-hand side only)."""
        if self.X.cols != 1:
            raise ValueError("solution has multiple columns; use X")
        return self.X.data[:, 0]


def _scores(A, scores_mode, eps0, seed):
    if scores_mode == "exact":
        return leverage.exact_leverage_scores(A)
    if scores_mode == "approximate":
        return leverage.approx_leverage_scores(A, eps0, derive_seed(seed, _SCORES_KEY))
    raise ValueError(f"unknown scores mode {scores_mode!r}")


def _perturbed_ridge_scores(tau, eps0, seed):
    rng = stream(derive_seed(seed, _SCORES_KEY))
    return tau * rng.uniform(1.0 - eps0, 1.0 + eps0, size=tau.shape[0])


def _numerical_rank(a: np.ndarray) -> int:
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    tol = densemat.rank_tolerance(a.shape, s[0])
    return int(np.count_nonzero(s > tol))


def solve_multiple(
    p: RegressionProblem,
    cfg: SketchConfig | None = None,
    scores_mode: str = "exact",
    eps0: float = DEFAULT_EPS0,
    sketch_override: SketchOperator | None = None,
) -> RegressionSolution:
    """Sketched solve of min ||A X - B||_F.

    Draws m = recommended_m(d, eps) rows (or ``cfg.m`` when set) from the
    leverage distribution of A, solves the sketched problem exactly, and
    evaluates the objective on the full problem.  ``sketch_override``
    replaces the random draw (e.g. the identity sketch for oracle
    equivalence); no resampling happens in that case.

    Raises
    ------
    SketchRankCollapse
        If 3 redraws after the first attempt all lose rank.
    """
    cfg = cfg or SketchConfig()
    A, B = p.A, p.B
    n, d = A.shape
    ledger = qcost.QueryLedger()

    if sketch_override is not None:
        S = sketch_override
        SA = sketch.apply_sketch(S, A)
        SB = sketch.apply_sketch(S, B)
        ledger.record("sketch_apply", 2 * S.m)
        x = densemat.exact_least_squares(SA, SB)
        return _finish_plain(p, x, S.m, 0, cfg.seed, ledger)

    profile = _scores(A, scores_mode, eps0, cfg.seed)
    ledger.record("leverage_scores", n)
    q = sketch.build_distribution(profile)
    m = cfg.m if cfg.m is not None else sketch.recommended_m(
        d, p.eps, c_se=cfg.c_se, c_amp=cfg.c_amp
    )

    for attempt in range(1 + _MAX_RETRIES):
        S = sketch.draw_sketch(q, m, derive_seed(cfg.seed, _SKETCH_KEY_BASE + attempt))
        SA = sketch.apply_sketch(S, A)
        SB = sketch.apply_sketch(S, B)
        ledger.record("sketch_apply", 2 * m)
        if _numerical_rank(SA.data) >= profile.rank:
            x = densemat.exact_least_squares(SA, SB)
            return _finish_plain(p, x, m, attempt, cfg.seed, ledger)
    raise SketchRankCollapse(
        f"sketch lost rank in {1 + _MAX_RETRIES} consecutive draws (m={m})"
    )


def _finish_plain(p, x, m, retries, seed, ledger):
    objective = float(np.linalg.norm(p.A.data @ x.data - p.B.data) ** 2)
    ledger.record("objective", p.A.rows)
    return RegressionSolution(
        mode=p.mode, X=x, objective=objective, m_used=m, retries=retries,
        seed=seed, ledger=ledger, eps=p.eps,
    )


def solve_linear(
    p: RegressionProblem,
    cfg: SketchConfig | None = None,
    scores_mode: str = "exact",
    eps0: float = DEFAULT_EPS0,
    sketch_override: SketchOperator | None = None,
) -> RegressionSolution:
    """Sketched solve of min ||A x - b||_2 (single right-hand side)."""
    if p.B.cols != 1:
        raise DimensionMismatch("solve_linear requires exactly one right-hand side")
    if p.mode != "linear":
        p = RegressionProblem(A=p.A, B=p.B, eps=p.eps, mode="linear")
    return solve_multiple(
        p, cfg=cfg, scores_mode=scores_mode, eps0=eps0,
        sketch_override=sketch_override,
    )


def solve_ridge(
    p: RidgeProblem,
    cfg: SketchConfig | None = None,
    scores_mode: str = "exact",
    eps0: float = DEFAULT_EPS0,
    sketch_override: SketchOperator | None = None,
) -> RegressionSolution:
    """Sketched ridge solve of min ||A x - b||^2 + lam ||x||^2.

    Rows are sampled from the ridge score distribution (squared row norms
    of the top block of the orthonormal basis of [A; sqrt(lam) I]); only
    the n data rows are ever sampled, and the sample count scales with the
    statistical dimension.  The sketched subproblem is solved through the
    stacked system [SA; sqrt(lam) I] against [Sb; 0].
    """
    cfg = cfg or SketchConfig()
    A = p.A
    b = np.asarray(p.b, dtype=np.float64).reshape(-1)
    n, d = A.shape
    ledger = qcost.QueryLedger()

    if sketch_override is not None:
        S = sketch_override
        sa = A.data[S.indices] * S.weights[:, None]
        sb = b[S.indices] * S.weights
        ledger.record("sketch_apply", 2 * S.m)
        x = _solve_ridge_stacked(sa, sb, p.lam)
        return _finish_ridge(p, A, b, x, S.m, 0, cfg.seed, ledger)

    basis = leverage.ridge_basis(A, p.lam)
    ledger.record("ridge_basis", n)
    tau = basis.ridge_scores
    if scores_mode == "approximate":
        tau = _perturbed_ridge_scores(tau, eps0, cfg.seed) / (1.0 - eps0)
    elif scores_mode != "exact":
        raise ValueError(f"unknown scores mode {scores_mode!r}")
    q = tau / tau.sum()
    m = cfg.m if cfg.m is not None else sketch.recommended_m(
        d, p.eps, sd=basis.sd, c_se=cfg.c_se, c_amp=cfg.c_amp
    )

    for attempt in range(1 + _MAX_RETRIES):
        S = sketch.draw_sketch(q, m, derive_seed(cfg.seed, _SKETCH_KEY_BASE + attempt))
        sa = A.data[S.indices] * S.weights[:, None]
        sb = b[S.indices] * S.weights
        ledger.record("sketch_apply", 2 * m)
        # the sqrt(lam) block keeps the stacked design at full column rank,
        # so degeneracy cannot occur; the check mirrors the plain pipeline
        stacked = np.vstack([sa, np.sqrt(p.lam) * np.eye(d)])
        if _numerical_rank(stacked) >= d:
            x = _solve_ridge_stacked(sa, sb, p.lam)
            return _finish_ridge(p, A, b, x, m, attempt, cfg.seed, ledger)
    raise SketchRankCollapse(
        f"ridge sketch lost rank in {1 + _MAX_RETRIES} consecutive draws (m={m})"
    )


def _solve_ridge_stacked(sa: np.ndarray, sb: np.ndarray, lam: float) -> np.ndarray:
    d = sa.shape[1]
    stacked = np.vstack([sa, np.sqrt(lam) * np.eye(d)])
    rhs = np.concatenate([sb, np.zeros(d)])
    return np.linalg.lstsq(stacked, rhs, rcond=None)[0]


def ridge_objective(A: DenseMatrix, b: np.ndarray, lam: float, x: np.ndarray) -> float:
    bv = np.asarray(b, dtype=np.float64).reshape(-1)
    return float(
        np.linalg.norm(A.data @ x - bv) ** 2 + lam * np.linalg.norm(x) ** 2
    )


def _finish_ridge(p, A, b, x, m, retries, seed, ledger):
    objective = ridge_objective(A, b, p.lam, x)
    ledger.record("objective", A.rows)
    return RegressionSolution(
        mode="ridge", X=densemat.column_matrix(x), objective=objective,
        m_used=m, retries=retries, seed=seed, ledger=ledger, eps=p.eps,
        lam=p.lam,
    )


def solution_to_json(
    sol: RegressionSolution,
    n: int,
    d: int,
    N: int,
    oracle_objective: float | None = None,
    ratio: float | None = None,
) -> dict:
    """JSON-ready summary of a solver run."""
    out = {
        "mode": sol.mode,
        "n": n,
        "d": d,
        "N": N,
        "eps": sol.eps,
        "lambda": sol.lam,
        "m_used": sol.m_used,
        "retries": sol.retries,
        "seed": sol.seed,
        "objective": sol.objective,
        "oracle_objective": oracle_objective,
        "ratio": ratio,
        "row_queries_classical": sol.ledger.total,
        "row_queries_quantum_model": qcost.sampling_query_model(n, sol.m_used),
        "row_queries_by_stage": dict(sol.ledger.stages),
    }
    return out
