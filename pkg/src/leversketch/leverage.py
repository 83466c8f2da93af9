"""Leverage scores, their simulated noisy estimates, and the ridge basis.

Exact leverage scores are squared row norms of an orthonormal basis of the
column space; they sum to the rank.  The "approximate" mode reproduces the
contract of a fast multiplicative estimator by perturbing each exact score
with an independent uniform factor in [1 - eps0, 1 + eps0]; everything
downstream consumes only that multiplicative guarantee.

For ridge regression the relevant basis is the first n rows of an
orthonormal basis of the stacked matrix [A; sqrt(lam) I].  It is computed
here directly from the SVD of A (never forming the stacked matrix): with
A = U diag(s) V^T and shrink factors 1/sqrt(s_i^2 + lam),

    U1 = U @ diag(s_i / sqrt(s_i^2 + lam)).

Its squared row norms are the ridge sampling scores, and their total is the
statistical dimension sum_i 1 / (1 + lam / s_i^2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import densemat
from ._rng import stream
from .densemat import DenseMatrix
from .errors import Eps0OutOfRange, NegativeLambda

DEFAULT_EPS0 = 0.1


@dataclass(frozen=True)
class LeverageProfile:
    """Per-row leverage scores of a matrix.

    ``mode`` is "exact" or "approximate"; in approximate mode every score
    sits within a (1 +- eps0) factor of the exact one.
    """

    scores: np.ndarray
    mode: str
    eps0: float
    rank: int
    score_sum: float

    @property
    def n(self) -> int:
        return self.scores.shape[0]


@dataclass(frozen=True)
class RidgeBasis:
    """Top block of the orthonormal basis of [A; sqrt(lam) I].

    ``u1`` is that n-by-k block, ``ridge_scores`` its squared row norms,
    ``sd`` the statistical dimension (equal to ||u1||_F^2), and ``shrink``
    the diagonal of (diag(s)^2 + lam I)^(-1/2) over the k positive
    singular values of A.
    """

    u1: DenseMatrix
    lam: float
    singular_values: np.ndarray
    sd: float
    ridge_scores: np.ndarray
    shrink: np.ndarray


def exact_leverage_scores(A: DenseMatrix) -> LeverageProfile:
    """Exact leverage scores sigma_i = ||U_{i,*}||^2 of ``A``.

    Raises
    ------
    AllZeroMatrix
        If ``A`` is the zero matrix.
    """
    fac = densemat.orthonormal_basis(A)
    u = fac.orthonormal_basis.data
    scores = np.einsum("ij,ij->i", u, u)
    scores.setflags(write=False)
    return LeverageProfile(
        scores=scores,
        mode="exact",
        eps0=0.0,
        rank=fac.rank,
        score_sum=float(scores.sum()),
    )


def approx_leverage_scores(A: DenseMatrix, eps0: float, seed: int) -> LeverageProfile:
    """Multiplicatively perturbed leverage scores.

    Each exact score is scaled by an independent uniform draw from
    [1 - eps0, 1 + eps0] taken from the stream keyed by ``seed``; the
    result is deterministic given (A, eps0, seed).

    Raises
    ------
    Eps0OutOfRange
        If ``eps0`` is not in (0, 1).
    """
    if not (0.0 < eps0 < 1.0):
        raise Eps0OutOfRange(f"eps0 must be in (0, 1), got {eps0}")
    exact = exact_leverage_scores(A)
    rng = stream(seed)
    factors = rng.uniform(1.0 - eps0, 1.0 + eps0, size=exact.n)
    scores = exact.scores * factors
    scores.setflags(write=False)
    return LeverageProfile(
        scores=scores,
        mode="approximate",
        eps0=eps0,
        rank=exact.rank,
        score_sum=float(scores.sum()),
    )


def statistical_dimension(singular_values, lam: float) -> float:
    """sum_i 1 / (1 + lam / s_i^2) over the given positive singular values.

    Raises
    ------
    NegativeLambda
        If ``lam`` is negative.
    """
    if lam < 0:
        raise NegativeLambda(f"lambda must be nonnegative, got {lam}")
    s = np.asarray(singular_values, dtype=np.float64)
    if s.size == 0 or np.any(s <= 0):
        raise ValueError("singular values must be positive")
    if np.any(np.diff(s) > 0):
        raise ValueError("singular values must be nonincreasing")
    return float(np.sum(1.0 / (1.0 + lam / (s * s))))


def ridge_basis(A: DenseMatrix, lam: float) -> RidgeBasis:
    """Ridge sampling basis of ``A`` for regularization weight ``lam`` > 0.

    Raises
    ------
    NegativeLambda
        If ``lam`` is not strictly positive (route lam = 0 to the plain
        least-squares pipeline instead).
    AllZeroMatrix
        If ``A`` is the zero matrix.
    """
    if lam <= 0:
        raise NegativeLambda(f"ridge basis requires lambda > 0, got {lam}")
    fac = densemat.svd_factor(A)
    s = fac.singular_values
    shrink = 1.0 / np.sqrt(s * s + lam)
    u1 = fac.orthonormal_basis.data * (s * shrink)[None, :]
    tau = np.einsum("ij,ij->i", u1, u1)
    tau.setflags(write=False)
    return RidgeBasis(
        u1=densemat.matrix(u1),
        lam=float(lam),
        singular_values=s,
        sd=statistical_dimension(s, lam),
        ridge_scores=tau,
        shrink=shrink,
    )


def write_profile_csv(profile: LeverageProfile, path) -> None:
    """Write a profile as CSV lines ``row_index,score``."""
    with open(path, "w") as fh:
        for i, score in enumerate(profile.scores):
            fh.write(f"{i},{score:.17g}\n")


def ridge_summary(basis: RidgeBasis) -> dict:
    """JSON-ready summary of a ridge basis."""
    return {
        "lambda": basis.lam,
        "sd": basis.sd,
        "spectral_norm_u1": densemat.spectral_norm(basis.u1),
        "frob_sq_u1": float(np.sum(basis.ridge_scores)),
    }


def write_ridge_summary_json(basis: RidgeBasis, path) -> None:
    with open(path, "w") as fh:
        json.dump(ridge_summary(basis), fh, indent=2)
        fh.write("\n")
