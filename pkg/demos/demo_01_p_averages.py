"""
p-averages of a handful of numbers
==================================

The p-average of a finite set minimises ``sum |s_j - c|**p``.  It slides from
the median (p = 1) through the mean (p = 2) to the midrange (p = inf).
"""

import numpy as np

from gameplap import INF, SampleSet, p_average
from gameplap.paverage import q_derivative

values = [0.0, 0.5, 1.0, 7.0]
for p in (1, 1.5, 2, 3, 5, 10, 50, INF):
    print(f"p = {p:>4}:  A_p = {p_average(SampleSet(values, p)):.6f}")

# %%
# Away from the closed forms the average is the root of the derivative of
# the objective, which is monotone in ``c``.
s = SampleSet(values, 3)
a = p_average(s)
print("derivative at the average:", q_derivative(a, s))
print("derivative just left/right:", q_derivative(a - 1e-3, s), q_derivative(a + 1e-3, s))

# %%
# Shifting every value shifts the average, and it never leaves the data range.
rng = np.random.default_rng(0)
data = rng.uniform(-10, 10, 6)
for p in (1.5, 4.0, INF):
    base = p_average(SampleSet(data, p))
    moved = p_average(SampleSet(data + 3.25, p))
    print(f"p={p}: shift error {moved - base - 3.25:.1e}, in range: {data.min() <= base <= data.max()}")
