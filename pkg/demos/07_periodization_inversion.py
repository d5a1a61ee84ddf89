# %% [markdown]
# Periodization and inversion
#
# Sampling the transform of e^{-|x|} on the integers gives Fourier weights of a
# periodic p.d. function; windowing changes the weights but keeps them positive.
# The inversion formula recovers interval masses from transform values.

# %%
import math

import numpy as np

from pdext import PdFunction
from pdext.bochner import circle_fourier_coefficients, invert, periodize

F3 = PdFunction.catalog("F3")

# %%
w = periodize(F3, "none", 10_000)
print("sum of weights:", w.total.real, " coth(1/2):", 1 / math.tanh(0.5))
box = periodize(F3, "unit_box", 100)
print("windowed weights positive:", box.positive, " smallest:", np.min(box.weights))

# %%
c = circle_fourier_coefficients(lambda x: np.exp(-np.abs(x)), 4)
print("coefficients on the circle:", np.round(c.real, 6))

# %%
r = invert(lambda x: np.exp(-np.abs(x)), (-1.0, 2.0))
print("Cauchy mass of (-1, 2):", r.value, " exact:", (math.atan(2) + math.atan(1)) / math.pi)
