"""Row-sampling sketch operators drawn from a leverage-score distribution.

A sketch is m rows sampled i.i.d. with replacement from a distribution q
over the n source rows, row t rescaled by 1 / sqrt(m * q_{i_t}).  Stored as
(index, weight) pairs, it applies to an n-row matrix in O(m * cols) work and
satisfies E[S^T S] = I, so sketched Gram matrices and products are unbiased.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from ._rng import stream
from .densemat import DenseMatrix, matrix
from .errors import AllZeroScores, DimensionMismatch, EpsOutOfRange
from .leverage import LeverageProfile

DEFAULT_C_SE = 40.0
DEFAULT_C_AMP = 40.0


@dataclass(frozen=True)
class SketchConfig:
    """Knobs for sketch construction.

    ``m`` overrides the recommended sample count when set.  ``c_se`` and
    ``c_amp`` are the multipliers on the d*log(d) and d/eps terms of the
    recommended count.  ``oversample_c`` is kept at 1 inside probabilities;
    all oversampling slack lives in the sample-count multipliers.
    """

    oversample_c: float = 1.0
    m: int | None = None
    c_se: float = DEFAULT_C_SE
    c_amp: float = DEFAULT_C_AMP
    seed: int = 0

    def __post_init__(self):
        if self.oversample_c < 1 or self.c_se < 1 or self.c_amp < 1:
            raise ValueError("sketch constants must be >= 1")
        if self.m is not None and self.m < 1:
            raise ValueError("explicit sample count must be >= 1")


@dataclass(frozen=True)
class SketchOperator:
    """m sampled (row index, weight) pairs over n source rows.

    Equivalent to the m-by-n selection-and-rescale map whose row t is
    ``weights[t] * e_{indices[t]}``.  ``q`` is the distribution the indices
    were drawn from; ``seed`` records the draw stream (None for handmade
    operators such as the identity sketch).
    """

    source_rows: int
    indices: np.ndarray
    weights: np.ndarray
    q: np.ndarray
    seed: int | None = None

    @property
    def m(self) -> int:
        return self.indices.shape[0]


def build_distribution(profile: LeverageProfile) -> np.ndarray:
    """Sampling distribution proportional to the profile's scores.

    Exact profiles normalize directly.  Approximate profiles are inflated
    by 1/(1 - eps0) before normalizing, so every probability dominates the
    corresponding exact-score probability up to a constant that is absorbed
    into the sample count.

    Raises
    ------
    AllZeroScores
        If no score is positive.
    """
    scores = np.asarray(profile.scores, dtype=np.float64)
    if not np.any(scores > 0):
        raise AllZeroScores("profile has no positive score")
    if profile.mode == "approximate":
        scores = scores / (1.0 - profile.eps0)
    q = scores / scores.sum()
    return q


def recommended_m(
    d: int,
    eps: float,
    sd: float | None = None,
    c_se: float = DEFAULT_C_SE,
    c_amp: float = DEFAULT_C_AMP,
) -> int:
    """Sample count for a (1 + eps) solve.

    Plain regression uses ceil(c_se * d * ln(d + 2) + c_amp * d / eps);
    when the statistical dimension ``sd`` is given (ridge), it replaces d
    in both terms.  Always at least 1.

    Raises
    ------
    EpsOutOfRange
        If ``eps`` is not in (0, 1).
    """
    if not (0.0 < eps < 1.0):
        raise EpsOutOfRange(f"eps must be in (0, 1), got {eps}")
    if d < 1:
        raise ValueError("d must be >= 1")
    dim = float(d) if sd is None else float(sd)
    m = math.ceil(c_se * dim * math.log(dim + 2.0) + c_amp * dim / eps)
    return max(1, m)


def draw_sketch(q: np.ndarray, m: int, seed: int) -> SketchOperator:
    """Draw m i.i.d. rows from ``q`` by inverse-CDF sampling.

    Deterministic given (q, m, seed); weights are 1 / sqrt(m * q_i).
    """
    q = np.asarray(q, dtype=np.float64)
    if m < 1:
        raise ValueError("m must be >= 1")
    cdf = np.cumsum(q)
    u = stream(seed).random(m)
    idx = np.searchsorted(cdf, u, side="right")
    idx = np.minimum(idx, q.shape[0] - 1)
    # a draw can only land on a zero-probability index through float
    # roundoff at interval edges; nudge back to the nearest positive one
    if np.any(q[idx] <= 0):
        positive = np.flatnonzero(q > 0)
        bad = q[idx] <= 0
        idx[bad] = positive[
            np.minimum(
                np.searchsorted(positive, idx[bad], side="right"),
                positive.size - 1,
            )
        ]
    w = 1.0 / np.sqrt(m * q[idx])
    idx.setflags(write=False)
    w.setflags(write=False)
    return SketchOperator(
        source_rows=q.shape[0], indices=idx, weights=w, q=q, seed=int(seed)
    )


def identity_sketch(n: int) -> SketchOperator:
    """The exact sketch taking every row once with weight 1.

    With m = n and q uniform the weights 1 / sqrt(m * q_i) are exactly 1,
    so S^T S = I holds with no sampling error.  Used to check that the
    sketched pipeline degenerates to the exact solvers.
    """
    q = np.full(n, 1.0 / n)
    idx = np.arange(n)
    w = np.ones(n)
    for arr in (q, idx, w):
        arr.setflags(write=False)
    return SketchOperator(source_rows=n, indices=idx, weights=w, q=q, seed=None)


def apply_sketch(S: SketchOperator, M: DenseMatrix) -> DenseMatrix:
    """Form S @ M as an m-row matrix without materializing S.

    Raises
    ------
    DimensionMismatch
        If ``M`` does not have ``S.source_rows`` rows.
    """
    if M.rows != S.source_rows:
        raise DimensionMismatch(
            f"sketch built for {S.source_rows} rows, matrix has {M.rows}"
        )
    return matrix(M.data[S.indices] * S.weights[:, None])


def sketch_csv_text(S: SketchOperator) -> str:
    """Samples as CSV lines ``t,row_index,weight``.

    The leading comment line records m, the draw seed, and a SHA-256 hash
    of the distribution bytes so files can be matched to their source.
    """
    q_hash = hashlib.sha256(np.ascontiguousarray(S.q).tobytes()).hexdigest()
    lines = [f"# m={S.m} seed={S.seed} q_sha256={q_hash}"]
    for t in range(S.m):
        lines.append(f"{t},{int(S.indices[t])},{S.weights[t]:.17g}")
    return "\n".join(lines) + "\n"


def write_sketch_csv(S: SketchOperator, path) -> None:
    with open(path, "w") as fh:
        fh.write(sketch_csv_text(S))
