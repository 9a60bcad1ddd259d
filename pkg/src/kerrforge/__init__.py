"""Kerr-type optical-geometry metrics: construction and machine verification."""

__version__ = "0.1.0"

from .geometry import (
    ChartPoint,
    MetricConfig,
    SphericalPoint,
    assemble_metric,
    beta_tilde_o,
    classical_kerr_metric,
    conformal_factor,
    general_beta_solution,
    sigma_of,
)
from .disksolve import SolveGrid, fd_elliptic_solve
from .potentials import (
    GridPotential,
    HolomorphicPotential,
    SeriesPotential,
    check_sign_condition,
    hyperbolic_potential,
    rotate_reduce,
    spherical_potential,
)
from .tensor import (
    christoffel_closed,
    christoffel_fd,
    kretschmann,
    ricci_coordinate_fd,
    riemann_frame,
)
from .verification import (
    kerr_chart_map,
    nogo_discriminant,
    verify_background_flat,
    verify_kerr_match,
    verify_ricci_flat,
    verify_schwarzschild_analog,
)

__all__ = [
    "ChartPoint",
    "SphericalPoint",
    "MetricConfig",
    "conformal_factor",
    "sigma_of",
    "beta_tilde_o",
    "general_beta_solution",
    "assemble_metric",
    "classical_kerr_metric",
    "SeriesPotential",
    "HolomorphicPotential",
    "GridPotential",
    "SolveGrid",
    "fd_elliptic_solve",
    "spherical_potential",
    "hyperbolic_potential",
    "rotate_reduce",
    "check_sign_condition",
    "christoffel_fd",
    "christoffel_closed",
    "riemann_frame",
    "ricci_coordinate_fd",
    "kretschmann",
    "verify_ricci_flat",
    "verify_background_flat",
    "verify_kerr_match",
    "verify_schwarzschild_analog",
    "nogo_discriminant",
    "kerr_chart_map",
]
