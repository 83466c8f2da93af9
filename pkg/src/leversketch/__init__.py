"""Leverage-score sketch-and-solve regression toolkit.

Sample rows of a tall least-squares problem proportionally to their
leverage scores, solve the small sketched problem exactly, and certify the
result against exact oracles.  Covers plain, multiple, and ridge
regression (the latter sampled by ridge scores and sized by the
statistical dimension), plus a row-query cost model comparing the measured
classical counts with square-root-type model formulas.
"""

from .densemat import (
    DenseMatrix,
    FactorizationBundle,
    exact_least_squares,
    exact_ridge,
    frobenius_norm,
    matrix,
    column_matrix,
    orthonormal_basis,
    read_matrix_csv,
    spectral_norm,
    svd_factor,
    write_matrix_csv,
)
from .leverage import (
    LeverageProfile,
    RidgeBasis,
    approx_leverage_scores,
    exact_leverage_scores,
    ridge_basis,
    statistical_dimension,
)
from .sketch import (
    SketchConfig,
    SketchOperator,
    apply_sketch,
    build_distribution,
    draw_sketch,
    identity_sketch,
    recommended_m,
)
from .verify import (
    VerificationReport,
    approx_ratio,
    check_famp,
    check_samp,
    check_se,
    check_trials,
)
from .solve import (
    RegressionProblem,
    RegressionSolution,
    RidgeProblem,
    solve_linear,
    solve_multiple,
    solve_ridge,
)
from .qcost import (
    CostModelInputs,
    CostReport,
    QueryLedger,
    crossover,
    quantum_pipeline_cost,
    tmat,
)
from .bench import BenchSpec, make_instance, run_bench

__version__ = "0.1.0"

__all__ = [
    "DenseMatrix",
    "FactorizationBundle",
    "LeverageProfile",
    "RidgeBasis",
    "SketchConfig",
    "SketchOperator",
    "VerificationReport",
    "RegressionProblem",
    "RegressionSolution",
    "RidgeProblem",
    "CostModelInputs",
    "CostReport",
    "QueryLedger",
    "BenchSpec",
    "matrix",
    "column_matrix",
    "orthonormal_basis",
    "svd_factor",
    "exact_least_squares",
    "exact_ridge",
    "spectral_norm",
    "frobenius_norm",
    "read_matrix_csv",
    "write_matrix_csv",
    "exact_leverage_scores",
    "approx_leverage_scores",
    "statistical_dimension",
    "ridge_basis",
    "build_distribution",
    "draw_sketch",
    "identity_sketch",
    "apply_sketch",
    "recommended_m",
    "check_se",
    "check_famp",
    "check_samp",
    "approx_ratio",
    "check_trials",
    "solve_linear",
    "solve_multiple",
    "solve_ridge",
    "tmat",
    "quantum_pipeline_cost",
    "crossover",
    "make_instance",
    "run_bench",
]
