# %% [markdown]
# Spectra of the integral operators
#
# T_F phi(x) = integral of phi(y) F(x - y) over (0, a). Nystrom on a midpoint
# grid gives eigenvalues to O(h^2); the trace is exactly a F(0).

# %%
import numpy as np

from pdext import CATALOG_IDS, GridSpec, Kernel, PdFunction
from pdext.mercer import discretize, eigensystem, mercer, rank_one_split
from pdext.polya import build_spline_extension

# %%
# min(x, y) on (0, 1/2): eigenvalues 1/((2n-1) pi)^2
grid = GridSpec.on(0.5, 2000)
D = eigensystem(discretize(Kernel.minimum(), grid), grid)
k = np.arange(1, 6)
print("computed:", D.eigenvalues[:5])
print("exact:   ", 1 / ((2 * k - 1) * np.pi) ** 2)

# %%
for ident in CATALOG_IDS:
    F = PdFunction.catalog(ident)
    D = mercer(F, F.a, 1024)
    print(f"{ident}: trace {D.trace:.6f}  a F(0) {F.a:.6f}  top {D.eigenvalues[0]:.5f}")

# %%
# the tent splits as twice the Brownian kernel plus a rank-two correction
r = rank_one_split(512)
print("split residual:", r.residual, " L eigenvalues:", r.L_eigenvalues)

# %%
# spectrum of the e^{-|x|} extension on (0, 2)
E = build_spline_extension(PdFunction.catalog("F3"))
print("extension spectrum:", np.round(mercer(E, 2.0, 2000).eigenvalues[:5], 4))
