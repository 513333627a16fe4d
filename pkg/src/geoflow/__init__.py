"""alpha-continued fractions, their natural extensions, and cross-sections of
the geodesic flow on the modular surface and on Hecke triangle surfaces."""

__version__ = "0.1.0"

from geoflow.cf import (Digit, DomainError, Expansion, OrbitTerminated, DegenerateTruncation,
                        digit, step, expand, reconstruct)
from geoflow.matrix import Mat2, SingularityError, equal_pm
from geoflow.natext import (Estimate, PlanarPoint, Raster, planar_step, sigma_step, conjugate_Z,
                            inverse_Z, orbit, rasterize, mu_area)
from geoflow.section import SectionPoint, lift, flow, return_time, phi_step, project, verify_flow_identity

__all__ = [
    "Digit", "DomainError", "Expansion", "OrbitTerminated", "DegenerateTruncation",
    "digit", "step", "expand", "reconstruct",
    "Mat2", "SingularityError", "equal_pm",
    "Estimate", "PlanarPoint", "Raster", "planar_step", "sigma_step", "conjugate_Z",
    "inverse_Z", "orbit", "rasterize", "mu_area",
    "SectionPoint", "lift", "flow", "return_time", "phi_step", "project", "verify_flow_identity",
]
