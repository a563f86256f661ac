"""Scenes and discrete patch geometry: frames, connections, curvature, GCR residuals."""

from spinform.geometry.curvature import (
    Curvatures,
    codazzi_tensor,
    curvatures,
    frame_curvature,
    gcr_residuals,
)
from spinform.geometry.patch import DiscretePatch, bstar, build_patch, second_form_at
from spinform.geometry.scenes import (
    AMBIENTS,
    PROVIDERS,
    Scene,
    SceneProvider,
    make_provider,
    register_provider,
)

__all__ = [
    # Scenes
    "AMBIENTS",
    "PROVIDERS",
    "Scene",
    "SceneProvider",
    "make_provider",
    "register_provider",
    # Patch
    "DiscretePatch",
    "bstar",
    "build_patch",
    "second_form_at",
    # Curvature
    "Curvatures",
    "codazzi_tensor",
    "curvatures",
    "frame_curvature",
    "gcr_residuals",
]
