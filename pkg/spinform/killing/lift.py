"""Spinor fields lifted from known immersions.

For an immersion F with adapted frame (dF(e_1), ..., dF(e_p), n_1, ..., n_q[, F]) the gauge
component of the spinor field is the spin lift g of the rotation taking the standard basis to
that frame, so that ξ(e_i) = Ad(g^{-1})e_i = dF(e_i). The ± ambiguity of the lift is resolved by
continuity along the canonical sweep.
"""

from typing import Optional, Tuple

import numpy as np

from spinform.clifford.multivector import Multivector, SpinElement
from spinform.clifford.spin import spin_lift
from spinform.core.base import SolverConfig
from spinform.core.constants import FRAME_CONTINUITY_THRESHOLD
from spinform.core.exceptions import FrameDiscontinuityError, SceneError
from spinform.geometry.patch import GHOST_LAYERS, DiscretePatch, extended_grid
from spinform.killing.solver import SpinorField, sweep_index
from spinform.utils.logging import get_logger
from spinform.utils.math import grid_gradients

logger = get_logger(__name__)


def adapted_frames(patch: DiscretePatch, orthonormalize: bool = True) -> np.ndarray:
    """Rows (dF(e_1), ..., dF(e_p), n_1, ..., n_q[, F]) per node.

    Tangent images come from centered differences of the embedding on the ghost-padded grid.
    With ``orthonormalize`` the stacked frame of a Euclidean or spherical scene is replaced by
    its nearest orthogonal matrix (polar factor); hyperbolic frames are returned as sampled.

    Returns
    -------
    np.ndarray
        Frames of shape S + (m, m) with m the ambient dimension.

    Raises
    ------
    SceneError
        If the scene has no embedding or the frame is negatively oriented.
    """
    scene = patch.scene
    if not scene.provider.has_embedding:
        raise SceneError(f"Scene {scene.name!r} provides no reference embedding")
    crop = (slice(GHOST_LAYERS, -GHOST_LAYERS),) * patch.p
    positions_ext = np.asarray(scene.provider.embedding(extended_grid(scene)), dtype=float)
    d_positions = grid_gradients(positions_ext, patch.spacings)[crop]
    tangents = np.einsum("...ik,...km->...im", patch.frame, d_positions)
    rows = [tangents, np.asarray(scene.reference_normals(), dtype=float)]
    if patch.kappa != 0:
        positions = np.asarray(scene.reference_positions(), dtype=float)
        rows.append(positions[..., None, :])
    frames = np.concatenate(rows, axis=-2)
    if not orthonormalize or patch.kappa == -1:
        return frames

    u, _, vt = np.linalg.svd(frames)
    frames = u @ vt
    det = np.linalg.det(frames)
    if np.any(det < 0):
        node = np.unravel_index(np.argmin(det), det.shape)
        raise SceneError(
            f"Scene {scene.name!r}: adapted frame is negatively oriented at node "
            f"{tuple(int(i) for i in node)}"
        )
    return frames


def _fix_signs(
    values: np.ndarray,
    base_node: Tuple[int, ...],
    threshold: float = FRAME_CONTINUITY_THRESHOLD,
) -> None:
    """Flip lifted values in place so neighbours along the sweep agree in sign."""
    p = len(base_node)
    for k in range(p):
        n = values.shape[k]
        b = base_node[k]
        for step, targets in ((1, range(b + 1, n)), (-1, range(b - 1, -1, -1))):
            for i in targets:
                prev = sweep_index(base_node, range(p), k, i - step)
                cur = sweep_index(base_node, range(p), k, i)
                current = values[cur]
                dots = np.sum(current * values[prev], axis=-1)
                bad = np.abs(dots) < threshold
                if np.any(bad):
                    free = iter(np.argwhere(np.atleast_1d(bad))[0])
                    node = tuple(
                        int(next(free)) if isinstance(ix, slice) else int(ix) for ix in cur
                    )
                    raise FrameDiscontinuityError(
                        f"Lifted frame jumps between neighbours (overlap {dots.min():.3f})",
                        node=node,
                    )
                values[cur] = current * np.where(dots < 0, -1.0, 1.0)[..., None]


def spinor_from_immersion(
    patch: DiscretePatch, config: Optional[SolverConfig] = None
) -> SpinorField:
    """Spinor field representing the reference embedding of a scene.

    Parameters
    ----------
    patch : DiscretePatch
        Patch of a scene with an explicit embedding in R^n or S^n.
    config : SolverConfig, optional
        Supplies the base node for sign continuity.

    Returns
    -------
    SpinorField
        Field with ``source == "immersion"``.

    Raises
    ------
    ValueError
        For hyperbolic scenes (the Lorentzian spin lift is not supported).
    SceneError
        If the scene has no embedding.
    FrameDiscontinuityError
        If neighbouring lifts are nearly orthogonal, so no consistent sign exists.
    """
    config = config or SolverConfig()
    if patch.kappa == -1:
        raise ValueError("spinor_from_immersion supports Euclidean and spherical ambients")
    frames = adapted_frames(patch)
    values = np.zeros(patch.shape + (patch.algebra.size,))
    for node in np.ndindex(*patch.shape):
        values[node] = spin_lift(frames[node], patch.signature).coeffs
    base_node = config.resolve_base_node(patch.shape)
    _fix_signs(values, base_node)
    values.setflags(write=False)
    base_value = SpinElement(Multivector(patch.signature, values[base_node]))
    logger.info(f"Lifted adapted frames of {patch.scene.name!r} to a spinor field")
    return SpinorField(
        patch, values, base_node, base_value, patch.kappa, config, source="immersion"
    )
