"""
Rosen fractions and Hecke groups
================================

The same construction works for the Hecke triangle groups, where the
translation is by lambda_q = 2 cos(pi/q).
"""

# %%
import math

from geoflow.rosen import hecke_entropy_report, hecke_generators, hecke_lambda, unit_tangent_volume

for q in (3, 4, 5, 6, 8):
    T, S = hecke_generators(q)
    print(f"q={q}: lambda={hecke_lambda(q):.6f}, trace(TS)={float((T @ S).trace()):.6f}")

# %%
# Entropy times area is half the volume of the unit tangent bundle.
for q in (3, 4, 5, 6):
    r = hecke_entropy_report(q, 0.5, n=2_000_000, resolution=512)
    print(f"q={q}: product {r.product:.5f}, half volume {unit_tangent_volume(q) / 2:.5f}, "
          f"rel.err {r.rel_error:.1e}")

# %%
# For q = 4 and 6 lambda is a square root, and the matrix identities are
# checked exactly in the quadratic field.
from fractions import Fraction

from geoflow.quadratic import QuadraticNumber
from geoflow.rosen import rosen_flow_verify
from geoflow.section import SectionPoint

p = SectionPoint(QuadraticNumber(0, Fraction(3, 10), 2), Fraction(1, 3), 1)
r = rosen_flow_verify(4, Fraction(1, 2), p)
print(r.multiplier, r.ok)
