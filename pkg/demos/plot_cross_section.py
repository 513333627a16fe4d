"""
The cross-section and its return map
====================================

Points of the two-sheeted section lift to matrices.  Flowing a lift for
the return time and multiplying by an integer matrix lands on the lift of
the image point, which is what makes the return map a first return of the
geodesic flow on the modular surface.
"""

# %%
from fractions import Fraction

from geoflow.section import SectionPoint, lift, phi_step, project, verify_flow_identity

alpha = Fraction(1, 2)
p = SectionPoint(Fraction(-2, 5), Fraction(1, 7), +1)
print("lift", lift(p), "det", lift(p).det())

# %%
# The identity is checked in exact arithmetic.  With x negative the sheet
# is kept; with x positive it flips.
r = verify_flow_identity(alpha, p)
print("multiplier", r.multiplier, "image", r.target, "ok", r.ok)
print(phi_step(alpha, p) == r.target)

# %%
# Projection to the planar domain forgets the sheet and intertwines the
# return map with the planar extension.
from geoflow.natext import planar_step

print(project(phi_step(alpha, p)) == planar_step(alpha, project(p)))

# %%
# A sampled suite over many exact points, as the command line runs it.
from geoflow.suites import flow_suite

res = flow_suite(alpha, 2000, seed=7)
print(res.to_dict())
