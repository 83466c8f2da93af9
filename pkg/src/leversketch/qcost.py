"""Row-query and arithmetic cost model: classical counts vs quantum-model formulas.

Two kinds of numbers live here and are never mixed up:

* **Measured classical counts.**  A :class:`QueryLedger` accumulates the
  exact number of matrix rows read at each pipeline stage of a solver run.

* **Model values.**  The quantum-side numbers are closed-form leading
  terms with constant 1 (optionally times a single log factor), evaluated
  from (n, d, N, eps, r, omega, ...).  Nothing quantum is simulated; these
  are formula evaluations only.

Row-query model: reading the full matrix costs n queries (the classical
baseline); sampling m rows out of n in the quantum model costs
sqrt(n * m) queries, and the end-to-end pipelines cost sqrt(n * d) / eps
queries (sqrt(n * sd) / eps with a statistical dimension sd).  Arithmetic
is modeled by tmat(a, b, c) = s * t * u^(omega - 2) with u the smallest of
the three dimensions, normalized so tmat(n, n, n) = n^omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveDimension

DEFAULT_OMEGA = 2.372
_CROSSOVER_MAX_POW = 60

COST_CSV_COLUMNS = (
    "n", "d", "N", "eps", "lambda", "sd", "rows_classical", "rows_quantum",
    "time_quantum_terms", "log_policy",
)


@dataclass(frozen=True)
class CostModelInputs:
    """Instance parameters the cost formulas are evaluated at.

    ``r`` is the row sparsity (defaults to d, the dense case), ``omega``
    the matrix-multiplication exponent, ``m`` an explicit sample count
    (switches the query formula to sqrt(n * m)), ``sd`` a statistical
    dimension replacing d inside the square root (ridge), and
    ``log_policy`` either "none" (leading term, constant 1) or
    "single_log" (multiplied by log2(n + 2)).
    """

    n: int
    d: int
    N: int = 1
    eps: float = 0.1
    eps0: float = 0.1
    r: int | None = None
    omega: float = DEFAULT_OMEGA
    m: int | None = None
    sd: float | None = None
    lam: float | None = None
    log_policy: str = "none"

    def __post_init__(self):
        if self.n < 1 or self.d < 1 or self.N < 1:
            raise NonPositiveDimension("n, d, N must be positive")
        if not (0.0 < self.eps < 1.0):
            raise ValueError(f"eps must be in (0, 1), got {self.eps}")
        r = self.row_sparsity
        if not (1 <= r <= self.d):
            raise ValueError(f"row sparsity must satisfy 1 <= r <= d, got {r}")
        if not (2.0 <= self.omega <= 3.0):
            raise ValueError(f"omega must be in [2, 3], got {self.omega}")
        if self.log_policy not in ("none", "single_log"):
            raise ValueError(f"unknown log policy {self.log_policy!r}")

    @property
    def row_sparsity(self) -> int:
        return self.d if self.r is None else self.r


@dataclass
class QueryLedger:
    """Exact classical row-read counts, broken down by pipeline stage."""

    stages: dict[str, int] = field(default_factory=dict)

    def record(self, stage: str, rows: int) -> None:
        if rows < 0:
            raise ValueError("row counts are nonnegative")
        self.stages[stage] = self.stages.get(stage, 0) + int(rows)

    @property
    def total(self) -> int:
        return sum(self.stages.values())

    def merged(self, other: "QueryLedger") -> "QueryLedger":
        out = QueryLedger(dict(self.stages))
        for stage, rows in other.stages.items():
            out.record(stage, rows)
        return out


@dataclass(frozen=True)
class CostReport:
    """Classical vs quantum-model row queries plus arithmetic time terms.

    ``time_terms`` breaks the model time into named leading terms:
    ``sampling`` = r * sqrt(n * deff) / eps, ``pinv_per_eps`` =
    d^omega / eps, ``pinv`` = d^omega (the per-eps-free variant, reported
    side by side), and ``multiply`` = N * d^(omega - 1) / eps for N > 1.
    All model values are leading terms with constant 1, times the log
    factor when the single_log policy is on.
    """

    inputs: CostModelInputs
    rows_classical: float
    rows_quantum: float
    time_terms: dict[str, float]
    log_factor: float

    @property
    def time_quantum(self) -> float:
        terms = self.time_terms
        total = terms["sampling"] + terms["pinv_per_eps"]
        if "multiply" in terms:
            total += terms["multiply"]
        return total


def tmat(a: int, b: int, c: int, omega: float = DEFAULT_OMEGA) -> float:
    """Model time of multiplying an a-by-b matrix by a b-by-c matrix.

    Value is s * t * u^(omega - 2) with u = min(a, b, c) and s, t the other
    two dimensions, so tmat(n, n, n) = n^omega and the value is symmetric
    under every permutation of its arguments.  The divide rule
    tmat(a, b, c) = k * tmat(a/k, b, c) holds within the model as long as
    a/k does not drop below the current minimum dimension (the exponent
    switches to the new minimum past that boundary).

    Raises
    ------
    NonPositiveDimension
        If any dimension is < 1.
    """
    if a < 1 or b < 1 or c < 1:
        raise NonPositiveDimension(f"dimensions must be positive, got {(a, b, c)}")
    u, t, s = sorted((float(a), float(b), float(c)))
    return s * t * u ** (omega - 2.0)


def _log_factor(inputs: CostModelInputs) -> float:
    if inputs.log_policy == "single_log":
        return math.log2(inputs.n + 2.0)
    return 1.0


def quantum_pipeline_cost(inputs: CostModelInputs) -> CostReport:
    """Evaluate the model query and time formulas at ``inputs``.

    Queries: sqrt(n * m) when an explicit sample count m is given,
    otherwise sqrt(n * deff) / eps where deff is the statistical dimension
    if provided, else d.  Time terms as documented on :class:`CostReport`.
    """
    n, d, eps = inputs.n, inputs.d, inputs.eps
    lf = _log_factor(inputs)
    deff = float(d) if inputs.sd is None else float(inputs.sd)
    if inputs.m is not None:
        rows_quantum = math.sqrt(n * inputs.m) * lf
    else:
        rows_quantum = math.sqrt(n * deff) / eps * lf
    r = inputs.row_sparsity
    terms = {
        "sampling": r * math.sqrt(n * deff) / eps * lf,
        "pinv_per_eps": d ** inputs.omega / eps * lf,
        "pinv": d ** inputs.omega * lf,
    }
    if inputs.N > 1:
        terms["multiply"] = inputs.N * d ** (inputs.omega - 1.0) / eps * lf
    return CostReport(
        inputs=inputs,
        rows_classical=float(n),
        rows_quantum=rows_quantum,
        time_terms=terms,
        log_factor=lf,
    )


def sampling_query_model(n: int, m: int) -> float:
    """Model query count for drawing m of n rows: sqrt(n * m)."""
    if n < 1 or m < 1:
        raise NonPositiveDimension("n and m must be positive")
    return math.sqrt(n * m)


def crossover(inputs: CostModelInputs) -> int | None:
    """Smallest power-of-2 n where the model query count beats classical.

    Searches n = 2, 4, ..., 2^60 for rows_quantum(n) < n with d, eps and
    the log policy fixed from ``inputs``; returns None when no crossover
    exists below the bound.
    """
    for k in range(1, _CROSSOVER_MAX_POW + 1):
        n = 1 << k
        probe = CostModelInputs(
            n=n, d=inputs.d, N=inputs.N, eps=inputs.eps, eps0=inputs.eps0,
            r=inputs.r, omega=inputs.omega, sd=inputs.sd,
            log_policy=inputs.log_policy,
        )
        if quantum_pipeline_cost(probe).rows_quantum < n:
            return n
    return None


def report_to_json(report: CostReport) -> dict:
    i = report.inputs
    return {
        "n": i.n,
        "d": i.d,
        "N": i.N,
        "eps": i.eps,
        "lambda": i.lam,
        "sd": i.sd,
        "r": i.row_sparsity,
        "omega": i.omega,
        "m": i.m,
        "log_policy": i.log_policy,
        "rows_classical": report.rows_classical,
        "rows_quantum": report.rows_quantum,
        "time_quantum": report.time_quantum,
        "time_quantum_terms": dict(report.time_terms),
    }


def report_csv_row(report: CostReport) -> str:
    """One CSV line matching :data:`COST_CSV_COLUMNS`."""
    i = report.inputs
    terms = ";".join(f"{k}={v:.17g}" for k, v in report.time_terms.items())
    fields = [
        str(i.n), str(i.d), str(i.N), f"{i.eps:.17g}",
        "" if i.lam is None else f"{i.lam:.17g}",
        "" if i.sd is None else f"{i.sd:.17g}",
        f"{report.rows_classical:.17g}", f"{report.rows_quantum:.17g}",
        terms, i.log_policy,
    ]
    return ",".join(fields)
