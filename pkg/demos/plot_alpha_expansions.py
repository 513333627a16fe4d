"""
Alpha-expansions and their natural extension
============================================

A short tour of the alpha-continued fraction maps: digits, convergents,
the planar extension and its Lebesgue-measure model.
"""

# %%
# Digits and convergents
# ----------------------
# Exact input (a ``Fraction``) gives exact digits.  The regular continued
# fraction is alpha = 1; alpha = 1/2 is the nearest-integer expansion.
from fractions import Fraction

from geoflow.cf import expand, reconstruct

x = Fraction(355, 113) - 3
for alpha in (Fraction(1), Fraction(1, 2)):
    e = expand(alpha, x, 20)
    print(f"alpha = {alpha}: digits {[tuple(d) for d in e.digits]}")
    print("  convergents", [str(reconstruct(e, k)) for k in range(1, len(e) + 1)])

# %%
# Fewer digits are needed at alpha = 1/2: the nearest-integer expansion
# skips some of the regular convergents.

# %%
# The planar extension
# --------------------
# The second coordinate records the past of the orbit, so the planar map is
# invertible.  Points stay in [alpha - 1, alpha] x [0, 1].
import math

import numpy as np

from geoflow.natext import orbit_array, orbit_raster, mu_area, write_pgm
from geoflow.cf import into_interval

alpha = 0.5
x0 = into_interval(alpha, math.e / 10)[0]
xs, ys = orbit_array(alpha, (x0, 0.0), 100_000)
print("x range", xs.min(), xs.max(), " y range", ys.min(), ys.max())

# %%
# The orbit fills out the domain.  Its mu-area (mu has density
# (1 + xy)^-2) is estimated from the hit statistics of a raster.
r = orbit_raster(alpha, (x0, 0.0), 2_000_000, 512)
est = mu_area(r)
print(f"mu-area at alpha = {alpha}: {est.value:.5f} +- {est.stderr:.1e} ({est.method})")
write_pgm(r, "domain_alpha_half.pgm")

# %%
# Lebesgue model
# --------------
# Conjugating by (x, y) -> (x, y/(1 + xy)) turns mu into Lebesgue measure.
# The check below is exact.
from geoflow.natext import conjugate_Z, planar_step, sigma_step

p = (Fraction(-2, 5), Fraction(1, 3))
a = Fraction(1, 2)
print(conjugate_Z(planar_step(a, p)) == sigma_step(a, conjugate_Z(p)))
