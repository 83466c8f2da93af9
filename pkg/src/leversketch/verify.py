"""Checks that a drawn sketch actually delivers its contracts.

Three single-shot checks measure how far a sketch deviates from the exact
operator: the subspace-embedding deviation ||(SU)^T(SU) - I||, the
Frobenius-norm product error ||(SA)^T(SB) - A^T B||_F^2 relative to
||A||_F^2 ||B||_F^2, and the spectral-norm product error relative to
||A|| ||B||.  A fourth check compares a candidate solution's objective
against the exact-oracle objective.  Probability claims are assessed
empirically: :func:`check_trials` repeats a check over seeded independent
draws and reports the failure fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import densemat, leverage, sketch
from ._rng import derive_seed
from .densemat import DenseMatrix
from .errors import DimensionMismatch, NotOrthonormal, ZeroNormInput
from .sketch import SketchOperator

_ORTHO_TOL = 1e-8


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check: measured statistic against its threshold."""

    kind: str
    statistic: float
    threshold: float
    passed: bool
    trials: int = 1
    details: str = ""
    seed: int | None = None


def report_to_json(report: VerificationReport) -> dict:
    return {
        "kind": report.kind,
        "statistic": report.statistic,
        "threshold": report.threshold,
        "passed": report.passed,
        "trials": report.trials,
        "seed": report.seed,
        "details": report.details,
    }


def check_se(U: DenseMatrix, S: SketchOperator, eps: float) -> VerificationReport:
    """Subspace-embedding deviation of ``S`` on the orthonormal ``U``.

    The statistic is ||(SU)^T (SU) - I||; the m-by-k product SU is formed
    directly, never the n-by-n selection matrix.

    Raises
    ------
    NotOrthonormal
        If ``U^T U`` deviates from the identity by more than 1e-8.
    DimensionMismatch
        If ``U`` does not have ``S.source_rows`` rows.
    """
    u = U.data
    gram_dev = np.max(np.abs(u.T @ u - np.eye(U.cols)))
    if gram_dev > _ORTHO_TOL:
        raise NotOrthonormal(f"U^T U deviates from I by {gram_dev:.3e}")
    if U.rows != S.source_rows:
        raise DimensionMismatch(
            f"sketch built for {S.source_rows} rows, U has {U.rows}"
        )
    su = u[S.indices] * S.weights[:, None]
    stat = densemat.spectral_norm(densemat.matrix(su.T @ su - np.eye(U.cols)))
    return VerificationReport(
        kind="SE", statistic=stat, threshold=float(eps), passed=stat <= eps,
        seed=S.seed,
    )


def _product_deviation(A: DenseMatrix, B: DenseMatrix, S: SketchOperator) -> np.ndarray:
    if A.rows != B.rows or A.rows != S.source_rows:
        raise DimensionMismatch(
            f"rows disagree: A={A.rows}, B={B.rows}, sketch={S.source_rows}"
        )
    sa = A.data[S.indices] * S.weights[:, None]
    sb = B.data[S.indices] * S.weights[:, None]
    return sa.T @ sb - A.data.T @ B.data


def check_famp(
    A: DenseMatrix, B: DenseMatrix, S: SketchOperator, eps_prime: float
) -> VerificationReport:
    """Frobenius-norm product error of ``S`` on the pair (A, B).

    The statistic is ||(SA)^T(SB) - A^T B||_F^2 / (||A||_F^2 ||B||_F^2)
    and the pass threshold is eps_prime^2.

    Raises
    ------
    ZeroNormInput
        If either factor has zero Frobenius norm.
    DimensionMismatch
        If row counts disagree.
    """
    na, nb = densemat.frobenius_norm(A), densemat.frobenius_norm(B)
    if na == 0.0 or nb == 0.0:
        raise ZeroNormInput("both factors must have positive Frobenius norm")
    dev = _product_deviation(A, B, S)
    stat = float(np.linalg.norm(dev) ** 2) / (na * na * nb * nb)
    thr = eps_prime * eps_prime
    return VerificationReport(
        kind="FAMP", statistic=stat, threshold=thr, passed=stat <= thr,
        seed=S.seed,
    )


def check_samp(
    A: DenseMatrix, B: DenseMatrix, S: SketchOperator, eps_prime: float
) -> VerificationReport:
    """Spectral-norm product error of ``S`` on the pair (A, B).

    The statistic is ||(SA)^T(SB) - A^T B|| / (||A|| ||B||) and the pass
    threshold is eps_prime.  Errors as in :func:`check_famp`.
    """
    na, nb = densemat.spectral_norm(A), densemat.spectral_norm(B)
    if na == 0.0 or nb == 0.0:
        raise ZeroNormInput("both factors must have positive spectral norm")
    dev = _product_deviation(A, B, S)
    stat = densemat.spectral_norm(densemat.matrix(dev)) / (na * nb)
    return VerificationReport(
        kind="SAMP", statistic=stat, threshold=float(eps_prime),
        passed=stat <= eps_prime, seed=S.seed,
    )


def approx_ratio(
    A: DenseMatrix,
    B: DenseMatrix,
    X_candidate: DenseMatrix,
    X_oracle: DenseMatrix,
    threshold: float = math.inf,
) -> VerificationReport:
    """Candidate objective over oracle objective for ||A X - B||_F^2.

    When the oracle residual is numerically zero (consistent system) the
    ratio is 1 if the candidate residual is also numerically zero and +inf
    otherwise, flagged ConsistentSystemMiss in the details.

    Raises
    ------
    DimensionMismatch
        If the shapes are inconsistent.
    """
    if A.rows != B.rows or X_candidate.shape != X_oracle.shape \
            or X_candidate.rows != A.cols or X_candidate.cols != B.cols:
        raise DimensionMismatch("solution shapes inconsistent with A, B")
    b_sq = densemat.frobenius_norm(B) ** 2
    cand = float(np.linalg.norm(A.data @ X_candidate.data - B.data) ** 2)
    oracle = float(np.linalg.norm(A.data @ X_oracle.data - B.data) ** 2)
    details = ""
    if oracle <= 1e-14 * b_sq:
        if cand <= 1e-12 * b_sq:
            ratio = 1.0
        else:
            ratio = math.inf
            details = "ConsistentSystemMiss"
    else:
        ratio = cand / oracle
    return VerificationReport(
        kind="ratio", statistic=ratio, threshold=float(threshold),
        passed=ratio <= threshold, details=details,
    )


def check_trials(
    kind: str,
    A: DenseMatrix,
    B: DenseMatrix | None,
    eps: float,
    m: int,
    trials: int,
    base_seed: int,
    identity: bool = False,
    min_pass: float = 0.95,
) -> tuple[list[VerificationReport], VerificationReport]:
    """Repeat a sketch check over independent seeded draws.

    For kind "se" the target is the orthonormal basis of ``A``; for "famp"
    and "samp" the pair (A, B) is checked directly.  Sketches are drawn
    from the exact leverage distribution of ``A``; trial t uses the stream
    key derived from (base_seed, t).  With ``identity=True`` the exact
    identity sketch replaces every draw.

    Returns the per-trial reports and an aggregate report whose statistic
    is the empirical failure fraction, passing when at least a ``min_pass``
    fraction of trials passed.
    """
    if kind not in ("se", "famp", "samp"):
        raise ValueError(f"unknown check kind {kind!r}")
    if kind in ("famp", "samp") and B is None:
        raise ValueError(f"check {kind!r} needs a second matrix")
    profile = leverage.exact_leverage_scores(A)
    q = sketch.build_distribution(profile)
    u_mat = None
    if kind == "se":
        u_mat = densemat.orthonormal_basis(A).orthonormal_basis
    reports = []
    for t in range(trials):
        if identity:
            S = sketch.identity_sketch(A.rows)
        else:
            S = sketch.draw_sketch(q, m, derive_seed(base_seed, t))
        if kind == "se":
            rep = check_se(u_mat, S, eps)
        elif kind == "famp":
            rep = check_famp(A, B, S, eps)
        else:
            rep = check_samp(A, B, S, eps)
        reports.append(rep)
    failures = sum(1 for r in reports if not r.passed)
    fail_frac = failures / trials
    max_fail = 1.0 - min_pass
    aggregate = VerificationReport(
        kind=kind.upper(),
        statistic=fail_frac,
        threshold=max_fail,
        passed=fail_frac <= max_fail,
        trials=trials,
        details=f"{trials - failures}/{trials} trials passed",
        seed=base_seed,
    )
    return reports, aggregate
