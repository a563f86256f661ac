"""Reconstruction of immersions from spinor fields and their verification."""

from spinform.immersion.export import obj_text, write_obj
from spinform.immersion.hypersurface import (
    ShapeOperatorProvider,
    clp_field,
    friedrich_residual,
    hypersurface_lift,
)
from spinform.immersion.reconstruct import (
    ImmersionResult,
    coordinate_xi,
    d_xi_residual,
    integrate_one_form,
    integrate_xi,
    xi,
    xi_frames,
)
from spinform.immersion.verify import (
    dirac_residual,
    gauss_map,
    gauss_map_residual,
    mean_curvature_vector,
    principal_curvatures,
    reference_distance,
    verify_isometry,
    verify_second_fundamental_form,
)

__all__ = [
    # Reconstruction
    "ImmersionResult",
    "xi",
    "xi_frames",
    "coordinate_xi",
    "d_xi_residual",
    "integrate_one_form",
    "integrate_xi",
    # Verification
    "verify_isometry",
    "verify_second_fundamental_form",
    "dirac_residual",
    "gauss_map",
    "gauss_map_residual",
    "mean_curvature_vector",
    "principal_curvatures",
    "reference_distance",
    # Hypersurfaces
    "ShapeOperatorProvider",
    "hypersurface_lift",
    "clp_field",
    "friedrich_residual",
    # Export
    "obj_text",
    "write_obj",
]
