"""
A natural extension that is not a first return
==============================================

Grouping regular continued fraction digits as [k, 1, ..., 1, l] gives an
interval map g whose natural extension stacks into a tower.  The tower
levels are horizontal strips with Fibonacci-ratio endpoints that close in
on the golden ratio.
"""

# %%
from geoflow.variants import GOLDEN, fib_matrix_power, strip

for n in range(2, 10):
    s = strip(n)
    print(f"n={n}: ({s.lo}, {s.hi}]  width {float(s.length):.2e}")
print("golden ratio", GOLDEN)

# %%
# Powers of (0 1; 1 1) carry consecutive Fibonacci numbers.
print(fib_matrix_power(10))

# %%
# Sampled points of each partition set land in their strip.
import numpy as np

from geoflow.variants import tower_level

rng = np.random.default_rng(0)
counts = {}
for x, y in rng.uniform(0, 1, (20_000, 2)):
    n, top = tower_level((x, y))
    if n >= 2:
        assert top.y in strip(n)
    counts[n] = counts.get(n, 0) + 1
print(dict(sorted(counts.items())))
