# %% [markdown]
# Reproducing kernel spaces
#
# Membership of xi in H_F means sup |<psi, xi>|^2 / ||F_psi||^2 is finite. On a
# grid this is a generalized Rayleigh quotient; we watch it under refinement.

# %%
import numpy as np

from pdext import Interval, PdFunction, catalog_measure
from pdext.rkhs import (TestFunction, boundary_reproducing, deficiency_integral, greens_residual,
                        hf_inner, membership_test)

F3 = PdFunction.catalog("F3")

# %%
for label, xi in [("e^-x", lambda x: np.exp(-x)), ("1", np.ones_like),
                  ("step", lambda x: (x > 0.5).astype(float))]:
    res = membership_test(F3, xi, Interval(0, 1))
    print(f"{label:5s} {res.verdict:16s} quotients {np.round(res.history, 3)}")

# %%
# inner products are double integrals against F(x - y)
phi, psi = TestFunction.gaussian(0.4, 0.05), TestFunction.gaussian(0.6, 0.07)
print("<F_phi, F_psi> =", hf_inner(F3, phi, psi))

# %%
# e^{-|x|} is the Green's function of (1 - d^2/dx^2)/2
print("Green residual:", greens_residual("F3", TestFunction.bump(0.5, 0.3), 1024))
p = np.polynomial.Polynomial([0.5, -1.0, 2.0])
print("boundary formula error:", boundary_reproducing("F3", 0.3, p, p.deriv()).error)

# %%
d = deficiency_integral(1.0, catalog_measure("F3"))
print("deficiency integral:", d.value, "indices", d.second_moment_indices)
