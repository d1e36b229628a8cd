"""Expansion towers and the alpha_k exponent calculus"""

from .alpha import (
    RegularityParams,
    SigmaPrediction,
    alpha,
    alpha_closed_form,
    alpha_sequence,
    predicted_sigma,
    s_infinity,
    scaling_critical_regularity,
    step_count_for,
    threshold,
)
from .towers import (
    FULL_Z_MAX_DEPTH,
    ExpansionSet,
    ExpansionVariant,
    build_z_terms,
    build_zeta_terms,
    expansion_pieces,
    forcing_sum,
    ordered_triples,
    zeta_forcing,
)

__all__ = [
    "RegularityParams",
    "SigmaPrediction",
    "alpha",
    "alpha_closed_form",
    "alpha_sequence",
    "predicted_sigma",
    "s_infinity",
    "scaling_critical_regularity",
    "step_count_for",
    "threshold",
    "FULL_Z_MAX_DEPTH",
    "ExpansionSet",
    "ExpansionVariant",
    "build_z_terms",
    "build_zeta_terms",
    "expansion_pieces",
    "forcing_sum",
    "ordered_triples",
    "zeta_forcing",
]
