"""
Determinant-signed variants
===========================

Replacing 1/|x| by -1/x gives maps whose branches all have determinant +1;
using +1/x gives determinant -1.  Their natural extension domains look
very different: the first appear connected, the second breaks into pieces.
"""

# %%
import math

from geoflow.natext import count_components, write_pgm
from geoflow.variants import variant_raster

seed = (math.e / 10, 0.0)
for kind, alpha in [("positive", 0.2), ("positive", 0.3), ("positive", 0.6), ("negative", 0.2)]:
    r = variant_raster(kind, alpha, seed, 200_000, 512)
    name = f"{kind}_{alpha}.pgm"
    write_pgm(r, name)
    print(f"{kind:8s} alpha={alpha}: y in [{r.bounds.y0:.3f}, {r.bounds.y1:.3f}], "
          f"{count_components(r)} component(s) -> {name}")

# %%
# Connectivity is judged on the occupied cells after closing one-cell
# sampling holes; tiny specks are ignored.
