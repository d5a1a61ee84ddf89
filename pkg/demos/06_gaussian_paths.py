# %% [markdown]
# Gaussian processes from p.d. kernels
#
# Exact finite-dimensional sampling through a Cholesky factor. Every path has
# its own counter-based stream, so results do not depend on how they are split.

# %%
import numpy as np

from pdext.gp import (CovKernel, PathEnsemble, cov_matrix, ito_isometry_check, ou_from_bm,
                      random_power_series_charfn, sample_paths)

m = 10_000

# %%
t = np.linspace(1 / 64, 1 - 1 / 64, 20)
for k in (CovKernel("bm"), CovKernel("bridge"), CovKernel("fbm", hurst=0.7)):
    ens = sample_paths(k, t, m, seed=7)
    err = np.max(np.abs(ens.empirical_cov() - cov_matrix(k, t)))
    print(f"{k.label:9s} max covariance error {err:.4f} (5/sqrt(m) = {5 / np.sqrt(m):.2f})")

# %%
# e^{-x} B(e^{2x}) is stationary with covariance e^{-|x-y|}
x = np.linspace(0, 1, 6)
ou = ou_from_bm(sample_paths(CovKernel("bm"), np.exp(2 * x), m, seed=1))
print(np.round(ou.empirical_cov()[0], 3), "vs", np.round(np.exp(-x), 3))

# %%
p = np.linspace(0, 1, 65)
ens = sample_paths(CovKernel("bm"), p[1:], m, seed=3)
full = PathEnsemble(p, np.hstack([np.zeros((m, 1)), ens.paths]), 3, "bm")
chk = ito_isometry_check(lambda s: s, p, full)
print(f"Ito: {chk.lhs:.4f} vs {chk.rhs:.4f}  z = {chk.z_score:.2f}")

# %%
chk = random_power_series_charfn(1 / 3, 100_000, np.linspace(-10, 10, 41), seed=0)
print("random power series, sup error:", chk.sup_error)
