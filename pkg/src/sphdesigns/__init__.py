"""Geodesic design cycles and hybrid designs on spheres.

Submodules: ``orthogroup`` (reflection groups, Molien series), ``polytope``
(catalog and edge graphs), ``cycles`` (Euler and great-circle cycles),
``quad`` (moments and certification), ``invariants`` (invariant
polynomials), ``hybrid`` (balancing factors and assembled designs) and
``cli``.
"""
from .cycles import euler_cycle, great_circle_cycle
from .errors import DesignError
from .hybrid import build_hybrid, elementary_hybrids
from .kernels import BACKEND
from .orthogroup import get_group, molien_dims
from .polytope import build_polytope, catalog, lookup
from .quad import certify_design, weighted_point_cubature

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DesignError",
    "build_hybrid",
    "build_polytope",
    "catalog",
    "certify_design",
    "elementary_hybrids",
    "euler_cycle",
    "get_group",
    "great_circle_cycle",
    "lookup",
    "molien_dims",
    "weighted_point_cubature",
]
