"""Generalized Killing spinor equation: transport, solver, holonomy and curvature."""

from spinform.killing.curvature import (
    curvature_action,
    curvature_action_field,
    holonomy_curvature_defect,
    modified_curvature_field,
    plaquette_curvature,
    second_form_terms,
    spinor_curvature,
    spinor_curvature_field,
)
from spinform.killing.lift import adapted_frames, spinor_from_immersion
from spinform.killing.solver import (
    SpinorField,
    holonomy_residual,
    killing_residual,
    path_independence,
    plaquette_holonomy,
    solve_killing,
    sweep,
)
from spinform.killing.transport import (
    killing_coefficient,
    killing_coefficients,
    second_form_bivectors,
    transport,
    transport_edge,
)

__all__ = [
    # Transport
    "killing_coefficient",
    "killing_coefficients",
    "second_form_bivectors",
    "transport",
    "transport_edge",
    # Solver
    "SpinorField",
    "solve_killing",
    "sweep",
    "holonomy_residual",
    "killing_residual",
    "path_independence",
    "plaquette_holonomy",
    # Curvature
    "curvature_action",
    "curvature_action_field",
    "spinor_curvature",
    "spinor_curvature_field",
    "modified_curvature_field",
    "plaquette_curvature",
    "second_form_terms",
    "holonomy_curvature_defect",
    # Lifted fields
    "adapted_frames",
    "spinor_from_immersion",
]
