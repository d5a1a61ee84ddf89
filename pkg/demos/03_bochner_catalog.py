# %% [markdown]
# Spectral measures of the catalog
#
# Each catalog function is the Fourier transform of a finite measure. We check
# that numerically, then look at the moment diagnostics that separate the
# unique-extension cases from the rest.

# %%
import numpy as np

from pdext import CATALOG_IDS, PdFunction, catalog_measure
from pdext.bochner import (MomentSequence, bochner_transform, carleman_diagnostic, convolve,
                           moment, second_moment_index_diagnostic, verify_ext)

# %%
for ident in CATALOG_IDS:
    F, mu = PdFunction.catalog(ident), catalog_measure(ident)
    res = verify_ext(F, mu)
    idx = second_moment_index_diagnostic(mu)
    print(f"{ident}: sup error {res.sup_error:.1e}  second moment index {idx.indices}")

# %%
# heavy tails show up as infinite moments
print("Cauchy second moment:", moment(catalog_measure("F3"), 2))
print("Gauss second moment:", moment(catalog_measure("F5"), 2))

# %%
# products of p.d. functions come from convolved measures
mu = convolve(catalog_measure("F3"), catalog_measure("F3"))
x = np.linspace(-1, 1, 5)
print("Cauchy*Cauchy transform:", np.round(bochner_transform(mu, x).real, 6))
print("e^{-2|x|}:             ", np.round(np.exp(-2 * np.abs(x)), 6))

# %%
# Carleman: Gaussian moments pin the measure down, log-normal ones do not
gauss = [0.0 if n % 2 else float(np.prod(np.arange(n - 1, 0, -2))) for n in range(21)]
print("Gaussian:", carleman_diagnostic(MomentSequence(gauss)).verdict)
print("log-normal:", carleman_diagnostic(MomentSequence.from_log([n * n / 2 for n in range(21)])).verdict)
