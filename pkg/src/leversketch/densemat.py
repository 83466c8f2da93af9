"""Dense matrix data model, factorizations, norms, and exact solvers.

The :class:`DenseMatrix` wrapper carries the row-sparsity metadata used by
the cost model and guarantees finite 64-bit entries.  The exact
least-squares and ridge solvers in this module are the oracles that the
sketched solvers are verified against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import AllZeroMatrix, DimensionMismatch, NegativeLambda

_EPS = 2.0 ** -52

# Full SVD below this min-dimension, power iteration above (see spectral_norm).
_SPECTRAL_SVD_CUTOFF = 512
_POWER_TOL = 1e-10
_POWER_MAX_ITER = 10_000


@dataclass(frozen=True)
class DenseMatrix:
    """Real n-by-d matrix with row-sparsity metadata.

    ``data`` is a read-only float64 array of shape ``(rows, cols)``;
    ``row_sparsity`` is the maximum number of nonzero entries in any row
    (0 only for the all-zero matrix).
    """

    data: np.ndarray
    row_sparsity: int

    def __post_init__(self):
        a = self.data
        if a.ndim != 2 or a.dtype != np.float64:
            raise ValueError("data must be a 2-d float64 array")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("matrix must have at least one row and one column")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def is_zero(self) -> bool:
        return self.row_sparsity == 0


def matrix(values) -> DenseMatrix:
    """Build a :class:`DenseMatrix` from any 2-d array-like of reals."""
    a = np.array(values, dtype=np.float64, order="C", copy=True)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    r = int(np.max(np.count_nonzero(a, axis=1))) if a.size else 0
    a.setflags(write=False)
    return DenseMatrix(data=a, row_sparsity=r)


def column_matrix(values) -> DenseMatrix:
    """Build an n-by-1 :class:`DenseMatrix` from a 1-d vector."""
    v = np.asarray(values, dtype=np.float64).reshape(-1, 1)
    return matrix(v)


@dataclass(frozen=True)
class FactorizationBundle:
    """Orthonormal-basis factorization of a matrix.

    Either the QR route (``right_factor`` set) or the SVD route
    (``singular_values`` and ``right_singular`` set) populates the bundle;
    the unused route's fields are ``None``.  ``orthonormal_basis`` is n-by-k
    with orthonormal columns, k the numerical rank.
    """

    orthonormal_basis: DenseMatrix
    rank: int
    right_factor: np.ndarray | None = None
    singular_values: np.ndarray | None = None
    right_singular: np.ndarray | None = None


def _require_nonzero(A: DenseMatrix) -> None:
    if A.is_zero():
        raise AllZeroMatrix("operation requires a nonzero matrix")


def rank_tolerance(shape: tuple[int, int], sigma_max: float) -> float:
    """Singular values at or below this are treated as zero."""
    return max(shape) * _EPS * sigma_max


def orthonormal_basis(A: DenseMatrix) -> FactorizationBundle:
    """Orthonormal basis of the column space of ``A`` via QR.

    Uses column-pivoted QR to detect the numerical rank k; for full
    column rank the factor pair is canonicalized so that the diagonal of R
    is positive and ``U @ R`` reconstructs ``A``.  For rank-deficient input
    the returned ``right_factor`` has its columns restored to the original
    order, so ``U @ R`` still reconstructs ``A`` (R is then triangular only
    up to the pivoting permutation).

    Raises
    ------
    AllZeroMatrix
        If every entry of ``A`` is zero.
    """
    _require_nonzero(A)
    a = A.data
    q, r, piv = scipy.linalg.qr(a, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = rank_tolerance(A.shape, diag[0]) if diag.size else 0.0
    k = int(np.count_nonzero(diag > tol))
    if k == a.shape[1]:
        # full column rank: plain QR, sign-fixed for a canonical factor pair
        q, r = np.linalg.qr(a)
        signs = np.where(np.diag(r) < 0, -1.0, 1.0)
        q = q * signs[None, :]
        r = r * signs[:, None]
    else:
        q = q[:, :k]
        r = r[:k, :]
        inv_piv = np.argsort(piv)
        r = r[:, inv_piv]
    return FactorizationBundle(
        orthonormal_basis=matrix(q),
        rank=k,
        right_factor=np.ascontiguousarray(r),
    )


def svd_factor(A: DenseMatrix) -> FactorizationBundle:
    """Thin SVD of ``A`` truncated at the numerical rank.

    Returns U (n-by-k), the k positive singular values in nonincreasing
    order, and V (d-by-k) with ``U @ diag(s) @ V.T`` reconstructing ``A``.

    Raises
    ------
    AllZeroMatrix
        If every entry of ``A`` is zero.
    """
    _require_nonzero(A)
    u, s, vt = np.linalg.svd(A.data, full_matrices=False)
    tol = rank_tolerance(A.shape, s[0])
    k = int(np.count_nonzero(s > tol))
    return FactorizationBundle(
        orthonormal_basis=matrix(u[:, :k]),
        rank=k,
        singular_values=s[:k].copy(),
        right_singular=np.ascontiguousarray(vt[:k, :].T),
    )


def exact_least_squares(A: DenseMatrix, B: DenseMatrix) -> DenseMatrix:
    """Minimizer of ||A X - B||_F, computed exactly.

    Thin QR when ``A`` has full column rank; otherwise the minimum-
    Frobenius-norm solution via SVD.

    Raises
    ------
    DimensionMismatch
        If ``A`` and ``B`` have different row counts.
    """
    if A.rows != B.rows:
        raise DimensionMismatch(
            f"A has {A.rows} rows, B has {B.rows}"
        )
    a, b = A.data, B.data
    if not A.is_zero():
        fac = orthonormal_basis(A)
        if fac.rank == A.cols:
            u, r = fac.orthonormal_basis.data, fac.right_factor
            x = scipy.linalg.solve_triangular(r, u.T @ b)
            return matrix(x)
    # rank-deficient (or all-zero): minimum-norm solution
    x = np.linalg.lstsq(a, b, rcond=None)[0]
    return matrix(x)


def exact_ridge(A: DenseMatrix, b: np.ndarray, lam: float) -> np.ndarray:
    """Minimizer of ||A x - b||^2 + lam * ||x||^2, computed exactly.

    Solved through the stacked system [A; sqrt(lam) I] against [b; 0],
    which has full column rank for lam > 0.  For lam = 0 this delegates to
    :func:`exact_least_squares`.

    Raises
    ------
    NegativeLambda
        If ``lam`` is negative.
    DimensionMismatch
        If ``b`` does not have ``A.rows`` entries.
    """
    if lam < 0:
        raise NegativeLambda(f"lambda must be nonnegative, got {lam}")
    bv = np.asarray(b, dtype=np.float64).reshape(-1)
    if bv.shape[0] != A.rows:
        raise DimensionMismatch(f"A has {A.rows} rows, b has {bv.shape[0]}")
    if lam == 0.0:
        return exact_least_squares(A, column_matrix(bv)).data[:, 0].copy()
    d = A.cols
    stacked = np.vstack([A.data, np.sqrt(lam) * np.eye(d)])
    rhs = np.concatenate([bv, np.zeros(d)])
    q, r = np.linalg.qr(stacked)
    return scipy.linalg.solve_triangular(r, q.T @ rhs)


def spectral_norm(M: DenseMatrix) -> float:
    """Largest singular value of ``M``.

    Exact (full SVD) when min(rows, cols) <= 512; power iteration on the
    Gram matrix otherwise, with tolerance 1e-10 and at most 10^4 rounds.
    """
    a = M.data
    if M.is_zero():
        return 0.0
    if min(a.shape) <= _SPECTRAL_SVD_CUTOFF:
        return float(np.linalg.svd(a, compute_uv=False)[0])
    return _power_iteration_norm(a)


def _power_iteration_norm(a: np.ndarray) -> float:
    # iterate on the smaller Gram factor; deterministic seeded start
    g = a if a.shape[0] <= a.shape[1] else a.T
    rng = np.random.default_rng(0x5EC7)
    v = rng.standard_normal(g.shape[0])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(_POWER_MAX_ITER):
        w = g @ (g.T @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        new_sigma = np.sqrt(nw)
        v = w / nw
        if abs(new_sigma - sigma) <= _POWER_TOL * max(new_sigma, 1.0):
            return float(new_sigma)
        sigma = new_sigma
    return float(sigma)


def frobenius_norm(M: DenseMatrix) -> float:
    return float(np.linalg.norm(M.data))


def write_matrix_csv(M: DenseMatrix, path) -> None:
    """Write ``M`` as header-less CSV, one matrix row per line.

    Values carry 17 significant digits, so reading the file back
    reproduces every entry bit-for-bit.
    """
    np.savetxt(path, M.data, fmt="%.17g", delimiter=",")


def read_matrix_csv(path) -> DenseMatrix:
    """Read a matrix written by :func:`write_matrix_csv`."""
    a = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    return matrix(a)
