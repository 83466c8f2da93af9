"""Ridge regression: regularization shrinks the rows you need.

The effective size of a ridge problem is the statistical dimension
sd = sum_i 1/(1 + lam/s_i^2), which falls as lam grows.  Sampling by the
ridge scores (squared row norms of the top block of the orthonormal basis
of [A; sqrt(lam) I]) sizes the sketch by sd instead of d, so stronger
regularization means fewer sampled rows for the same (1 + eps) guarantee.
"""

import numpy as np

from leversketch import (
    RidgeProblem,
    SketchConfig,
    exact_ridge,
    make_instance,
    ridge_basis,
    spectral_norm,
    statistical_dimension,
    svd_factor,
)
from leversketch.solve import ridge_objective, solve_ridge

rng = np.random.default_rng(5)
n, d, eps = 8192, 16, 0.25
A, B = make_instance("gaussian", n, d, 1, rng)
b = B.data[:, 0]
sn2 = spectral_norm(A) ** 2
s = svd_factor(A).singular_values

print(f"n={n}, d={d}, ||A||^2 = {sn2:.1f}")
print()
print("lam/||A||^2   sd_lam(A)   m used   ratio vs exact ridge")
for frac in (0.001, 0.01, 0.1, 1.0, 10.0):
    lam = frac * sn2
    sd = statistical_dimension(s, lam)
    problem = RidgeProblem(A=A, b=b, lam=lam, eps=eps)
    sol = solve_ridge(problem, SketchConfig(seed=1))
    oracle = ridge_objective(A, b, lam, exact_ridge(A, b, lam))
    print(f"{frac:<13g} {sd:<11.3f} {sol.m_used:<8d} {sol.objective / oracle:.6f}")

print()
rb = ridge_basis(A, 0.1 * sn2)
print(f"identity check at lam = 0.1*||A||^2: ||U1||_F^2 = "
      f"{float(np.sum(rb.ridge_scores)):.6f} vs sd = {rb.sd:.6f}")
print(f"||U1|| = {spectral_norm(rb.u1):.6f} vs "
      f"1/sqrt(1 + lam/s1^2) = {1 / np.sqrt(1 + 0.1 * sn2 / s[0] ** 2):.6f}")
