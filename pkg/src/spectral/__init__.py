"""Spectral core: periodic grids, fields, dealiased products and norms"""

from .grid import (
    DyadicProfile,
    FieldTrajectory,
    GridSpec,
    SpectralField,
    TimeGrid,
    conjugate_coefficients,
    forward_transform,
    inverse_transform,
)
from .norms import (
    dyadic_profile,
    dyadic_scales,
    energy,
    eta,
    from_density,
    homogeneous_norm,
    l2_norm,
    lebesgue_norm,
    littlewood_paley,
    lp_symbol,
    mass,
    scaling_transform,
    sobolev_norm,
    spacetime_norm,
    sup_norm,
    to_density,
)
from .products import (
    dealiased_product_arrays,
    pointwise_cubic,
    trajectory_cubic,
    trajectory_trilinear,
    trilinear_product,
    truncate_to_retained,
)

__all__ = [
    "DyadicProfile",
    "FieldTrajectory",
    "GridSpec",
    "SpectralField",
    "TimeGrid",
    "conjugate_coefficients",
    "forward_transform",
    "inverse_transform",
    "dyadic_profile",
    "dyadic_scales",
    "energy",
    "eta",
    "from_density",
    "homogeneous_norm",
    "l2_norm",
    "lebesgue_norm",
    "littlewood_paley",
    "lp_symbol",
    "mass",
    "scaling_transform",
    "sobolev_norm",
    "spacetime_norm",
    "sup_norm",
    "to_density",
    "dealiased_product_arrays",
    "pointwise_cubic",
    "trajectory_cubic",
    "trajectory_trilinear",
    "trilinear_product",
    "truncate_to_retained",
]
