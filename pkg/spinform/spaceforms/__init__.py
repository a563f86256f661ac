"""Spinorial representation of submanifolds of the sphere and of hyperbolic space."""

from spinform.spaceforms.ambient import (
    AmbientModel,
    ambient_model,
    dF_consistency,
    hyperboloid_to_poincare,
    immersion_spaceform,
    poincare_to_hyperboloid,
    spaceform_isometry_and_II,
)

__all__ = [
    "AmbientModel",
    "ambient_model",
    "immersion_spaceform",
    "dF_consistency",
    "spaceform_isometry_and_II",
    # Hyperbolic models
    "hyperboloid_to_poincare",
    "poincare_to_hyperboloid",
]
