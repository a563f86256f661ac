"""Minimal surfaces in R^3: classical Weierstrass data and their spinorial counterpart."""

from spinform.weierstrass.classical import (
    CATALOG,
    HolomorphicPair,
    catalog_pair,
    classical_weierstrass,
    holomorphy_residual,
    isotropy_residual,
    minimal_surface_residuals,
    pair_from_functions,
    scene_pair,
    weierstrass_form,
)
from spinform.weierstrass.spinor import (
    cauchy_riemann_residuals,
    conformal_factor,
    dxi_tilde_residual,
    f_tilde,
    f_tilde_residual,
    spinor_components,
    spinor_to_weierstrass,
    weierstrass_roundtrip,
    xi_tilde,
)

__all__ = [
    # Classical representation
    "CATALOG",
    "HolomorphicPair",
    "catalog_pair",
    "classical_weierstrass",
    "holomorphy_residual",
    "isotropy_residual",
    "minimal_surface_residuals",
    "pair_from_functions",
    "scene_pair",
    "weierstrass_form",
    # Spinor side
    "conformal_factor",
    "xi_tilde",
    "f_tilde",
    "f_tilde_residual",
    "dxi_tilde_residual",
    "spinor_components",
    "spinor_to_weierstrass",
    "cauchy_riemann_residuals",
    "weierstrass_roundtrip",
]
