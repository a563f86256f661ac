"""Curvature tensors of a discrete patch and the Gauss, Codazzi and Ricci residuals.

Curvature is assembled from the connection forms on coordinate planes,

    ⟨R(∂_x, ∂_y) e_i, e_l⟩ = ∂_x ω_y[i, l] - ∂_y ω_x[i, l] + (ω_y ω_x - ω_x ω_y)[i, l],

with R(X, Y) = ∇_X∇_Y - ∇_Y∇_X - ∇_[X,Y]. Frame versions contract the coordinate slots with E.
"""

from typing import NamedTuple

import numpy as np

from spinform.core.constants import RES_CODAZZI, RES_GAUSS, RES_RICCI
from spinform.geometry.patch import DiscretePatch
from spinform.utils.logging import get_logger
from spinform.utils.math import grid_gradients
from spinform.utils.results import ResidualReport

logger = get_logger(__name__)


class Curvatures(NamedTuple):
    """Curvature of the tangent and normal connections.

    Attributes
    ----------
    tangent : np.ndarray
        ⟨R^T(X, Y) e_j, e_k⟩, shape S + (p, p, p, p) indexed [X, Y, j, k].
    normal : np.ndarray
        ⟨R^N(X, Y) n_c, n_d⟩, shape S + (p, p, q, q) indexed [X, Y, c, d].
    """

    tangent: np.ndarray
    normal: np.ndarray


def connection_curvature(patch: DiscretePatch) -> np.ndarray:
    """Full (tangent and normal) curvature on coordinate planes, S + (p, p, n, n)."""
    omega = patch.omega
    d_omega = grid_gradients(omega, patch.spacings)  # [..., k, x, i, j] = ∂_k ω_x[i, j]
    k_axis = omega.ndim - 3
    exterior = d_omega - np.swapaxes(d_omega, k_axis, k_axis + 1)
    yx = np.einsum("...yij,...xjl->...xyil", omega, omega)
    xy = np.einsum("...xij,...yjl->...xyil", omega, omega)
    return exterior + yx - xy


def curvatures(patch: DiscretePatch) -> Curvatures:
    """R^T and R^N on coordinate planes, expressed in the orthonormal frames."""
    p = patch.p
    full = connection_curvature(patch)
    return Curvatures(full[..., :p, :p], full[..., p:, p:])


def frame_curvature(patch: DiscretePatch) -> Curvatures:
    """⟨R^T(e_a, e_b) e_j, e_k⟩ and ⟨R^N(e_a, e_b) n_c, n_d⟩ at every node.

    Examples
    --------
    The sectional curvature of the tangent plane of a surface is
    ``frame_curvature(patch).tangent[..., 0, 1, 1, 0]``.
    """
    coordinate = curvatures(patch)
    E = patch.frame
    tangent = np.einsum("...ax,...by,...xyjk->...abjk", E, E, coordinate.tangent)
    normal = np.einsum("...ax,...by,...xycd->...abcd", E, E, coordinate.normal)
    return Curvatures(tangent, normal)


def covariant_second_form(patch: DiscretePatch) -> np.ndarray:
    """(∇̃_{∂_k} B)(e_i, e_j) in normal-frame components, indexed [k, a, i, j]."""
    p = patch.p
    b = patch.b
    omega_t = patch.omega[..., :p, :p]
    omega_n = patch.omega[..., p:, p:]
    db = grid_gradients(b, patch.spacings)
    return (
        db
        + np.einsum("...kca,...cij->...kaij", omega_n, b)
        - np.einsum("...kil,...alj->...kaij", omega_t, b)
        - np.einsum("...kjl,...ail->...kaij", omega_t, b)
    )


def codazzi_tensor(patch: DiscretePatch) -> np.ndarray:
    """(∇̃_{e_x} B)(e_y, e_j) - (∇̃_{e_y} B)(e_x, e_j), indexed [x, y, a, j]."""
    nabla_b = covariant_second_form(patch)
    directional = np.einsum("...xk,...kayj->...xyaj", patch.frame, nabla_b)
    return directional - np.einsum("...xyaj->...yxaj", directional)


def gauss_defect(patch: DiscretePatch, tangent_frame: np.ndarray) -> np.ndarray:
    """R^T - (B* terms) - ambient curvature, frame components [a, b, j, k]."""
    p = patch.p
    b = patch.b
    quadratic = np.einsum("...cbj,...cak->...abjk", b, b) - np.einsum(
        "...caj,...cbk->...abjk", b, b
    )
    delta = np.eye(p)
    ambient = patch.kappa * (
        np.einsum("bj,ak->abjk", delta, delta) - np.einsum("aj,bk->abjk", delta, delta)
    )
    return tangent_frame - quadratic - ambient


def ricci_defect(patch: DiscretePatch, normal_frame: np.ndarray) -> np.ndarray:
    """R^N - (B B* terms), frame components [a, b, c, d]."""
    b = patch.b
    quadratic = np.einsum("...cbl,...dal->...abcd", b, b) - np.einsum(
        "...cal,...dbl->...abcd", b, b
    )
    return normal_frame - quadratic


def _node_max(values: np.ndarray, grid_ndim: int) -> np.ndarray:
    axes = tuple(range(grid_ndim, values.ndim))
    if not axes:
        return np.abs(values)
    return np.abs(values).max(axis=axes)


def gcr_residuals(patch: DiscretePatch) -> ResidualReport:
    """Per-node max-norm defects of the Gauss, Codazzi and Ricci equations.

    The Gauss equation carries the constant-curvature term κ(⟨Y,Z⟩X - ⟨X,Z⟩Y) for space-form
    scenes; the Codazzi and Ricci equations have no ambient term in a space form.

    Parameters
    ----------
    patch : DiscretePatch
        Built patch.

    Returns
    -------
    ResidualReport
        Entries ``gauss``, ``codazzi`` and ``ricci``.
    """
    grid_ndim = patch.p
    frame = frame_curvature(patch)
    report = ResidualReport()
    report.add(RES_GAUSS, _node_max(gauss_defect(patch, frame.tangent), grid_ndim))
    report.add(RES_CODAZZI, _node_max(codazzi_tensor(patch), grid_ndim))
    report.add(RES_RICCI, _node_max(ricci_defect(patch, frame.normal), grid_ndim))
    logger.debug(f"GCR residuals for {patch.scene.name!r}: {report}")
    return report
