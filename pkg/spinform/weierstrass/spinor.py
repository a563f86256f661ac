"""Weierstrass data from a spinor field on a surface in R^3.

On a surface (p = 2) the complex structure J rotates the oriented orthonormal frame by +90°,
J e_1 = e_2 and J e_2 = -e_1. The complexified form ξ̃(X) = ξ(X) - iξ(JX) is C-linear and
dξ̃(∂_x, ∂_y) = 2i √det(g) ξ(H), so ξ̃ is closed exactly on minimal surfaces.

Even elements of Cl_3 are read as pairs of complex numbers: φ = α + βe₁e₂ + γe₁e₃ + δe₂e₃ gives
z₁ = -α + iβ and z₂ = -δ + iγ. In conformal coordinates with metric μ²(dx² + dy²) the
Weierstrass data of a minimal surface are then h = 2μz₁² and g = -i z̄₂ / z₁.
"""

from typing import Optional, Tuple

import numpy as np

from spinform.core.constants import (
    POLE_TOLERANCE,
    RES_CR_Z1,
    RES_CR_Z2,
    RES_DXI_TILDE,
    RES_F_TILDE,
    RES_ROUNDTRIP,
)
from spinform.core.exceptions import PoleError
from spinform.immersion.reconstruct import (
    ImmersionResult,
    integrate_xi,
    plaquette_circulation,
    xi_frames,
)
from spinform.killing.solver import SpinorField
from spinform.utils.logging import get_logger
from spinform.utils.math import procrustes_align
from spinform.utils.results import ResidualReport
from spinform.weierstrass.classical import (
    HolomorphicPair,
    classical_weierstrass,
    holomorphy_residual,
    isotropy_residual,
)

logger = get_logger(__name__)

# blade indices of e1e2, e1e3, e2e3
_E12, _E13, _E23 = 0b011, 0b101, 0b110

CONFORMALITY_WARNING = 1e-8
MINIMALITY_WARNING = 1e-6


def _check_surface(field: SpinorField, codimension_one: bool = False) -> None:
    patch = field.patch
    if patch.p != 2:
        raise ValueError(f"ξ̃ is defined on surfaces, got p = {patch.p}")
    if patch.kappa != 0:
        raise ValueError("ξ̃ is defined for surfaces of Euclidean space")
    if codimension_one and patch.q != 1:
        raise ValueError(f"Weierstrass data need a surface in R^3, got q = {patch.q}")


def conformal_factor(field: SpinorField) -> np.ndarray:
    """μ = √g_xx, warning when the coordinates are not conformal."""
    metric = field.patch.metric
    scale = np.abs(metric).max()
    defect = np.maximum(
        np.abs(metric[..., 0, 1]), np.abs(metric[..., 0, 0] - metric[..., 1, 1])
    ).max()
    if defect > CONFORMALITY_WARNING * scale:
        logger.warning(
            f"Coordinates of {field.patch.scene.name!r} are not conformal "
            f"(defect {defect:.2e}); μ = √g_xx is only the x-scale"
        )
    return np.sqrt(metric[..., 0, 0])


def xi_tilde(field: SpinorField) -> np.ndarray:
    """ξ̃(∂_k) = ξ(∂_k) - iξ(J∂_k) per node, complex, S + (2, N).

    Raises
    ------
    ValueError
        If the field does not live on a surface of Euclidean space.
    """
    _check_surface(field)
    patch = field.patch
    frames = xi_frames(field)
    xi1, xi2 = frames[..., None, 0, :], frames[..., None, 1, :]
    L = patch.coframe
    xi_d = L[..., :, 0, None] * xi1 + L[..., :, 1, None] * xi2
    xi_jd = -L[..., :, 1, None] * xi1 + L[..., :, 0, None] * xi2
    return xi_d - 1j * xi_jd


def f_tilde(field: SpinorField, method: str = "xi_tilde") -> np.ndarray:
    """f̃ = ξ̃(∂_x), either from ξ̃ or as μ(ξ(e_1) - iξ(e_2)).

    Parameters
    ----------
    field : SpinorField
        Field on a surface of Euclidean space.
    method : str
        ``"xi_tilde"`` or ``"frame"``.
    """
    if method == "xi_tilde":
        return xi_tilde(field)[..., 0, :]
    if method == "frame":
        _check_surface(field)
        frames = xi_frames(field)
        mu = conformal_factor(field)
        return mu[..., None] * (frames[..., 0, :] - 1j * frames[..., 1, :])
    raise ValueError(f"Unknown method {method!r}; expected 'xi_tilde' or 'frame'")


def f_tilde_residual(field: SpinorField) -> ResidualReport:
    """Nodewise agreement of the two evaluations of f̃."""
    defect = f_tilde(field, "xi_tilde") - f_tilde(field, "frame")
    report = ResidualReport()
    report.add(RES_F_TILDE, np.abs(defect).max(axis=-1))
    return report


def mean_curvature_image(field: SpinorField) -> np.ndarray:
    """ξ(H) = Σ_a ½ tr(b_a) ξ(n_a) per node, S + (N,)."""
    patch = field.patch
    frames = xi_frames(field)
    traces = 0.5 * np.einsum("...ajj->...a", patch.b)
    return np.einsum("...a,...am->...m", traces, frames[..., 2 : 2 + patch.q, :])


def dxi_tilde_residual(field: SpinorField) -> ResidualReport:
    """Discrete dξ̃ per plaquette against 2i√det(g) ξ(H) averaged over its corners."""
    _check_surface(field)
    patch = field.patch
    lhs = plaquette_circulation(xi_tilde(field), patch, 0, 1)
    rhs_nodes = 2j * np.sqrt(np.linalg.det(patch.metric))[..., None] * mean_curvature_image(field)
    rhs = 0.25 * (
        rhs_nodes[:-1, :-1] + rhs_nodes[1:, :-1] + rhs_nodes[:-1, 1:] + rhs_nodes[1:, 1:]
    )
    report = ResidualReport()
    report.add(RES_DXI_TILDE, np.abs(lhs - rhs).max(axis=-1))
    return report


def spinor_components(field: SpinorField) -> Tuple[np.ndarray, np.ndarray]:
    """(z₁, z₂) of the field at every node."""
    _check_surface(field, codimension_one=True)
    v = field.values
    z1 = -v[..., 0] + 1j * v[..., _E12]
    z2 = -v[..., _E23] + 1j * v[..., _E13]
    return z1, z2


def spinor_to_weierstrass(
    field: SpinorField, mu: Optional[np.ndarray] = None
) -> HolomorphicPair:
    """Weierstrass data h = 2μz₁², g = -i z̄₂/z₁ of a minimal surface.

    Parameters
    ----------
    field : SpinorField
        Field on a surface in R^3 in conformal coordinates.
    mu : np.ndarray, optional
        Conformal factor; √g_xx by default.

    Returns
    -------
    HolomorphicPair
        Grid samples of (h, g) without closed forms.

    Raises
    ------
    PoleError
        If z₁ vanishes at a node.
    """
    z1, z2 = spinor_components(field)
    patch = field.patch
    if mu is None:
        mu = conformal_factor(field)
    mean = np.abs(np.einsum("...ajj->...", patch.b)).max()
    if mean > MINIMALITY_WARNING:
        logger.warning(
            f"{patch.scene.name!r} is not minimal (|tr B| up to {mean:.2e}); "
            "the extracted data do not generate it"
        )
    small = np.abs(z1) < POLE_TOLERANCE
    if np.any(small):
        node = tuple(int(i) for i in np.argwhere(small)[0])
        raise PoleError("z1 vanishes; the Weierstrass data are not defined", node=node)
    coords = patch.coords
    return HolomorphicPair(
        z=coords[..., 0] + 1j * coords[..., 1],
        h=2.0 * mu * z1**2,
        g=-1j * np.conj(z2) / z1,
        spacings=(patch.spacings[0], patch.spacings[1]),
        name=f"{patch.scene.name}+spinor",
    )


def cauchy_riemann_residuals(
    field: SpinorField, mu: Optional[np.ndarray] = None
) -> ResidualReport:
    """Discrete ∂/∂z̄ of √μ z₁ and of √μ z̄₂."""
    z1, z2 = spinor_components(field)
    if mu is None:
        mu = conformal_factor(field)
    spacings = (field.patch.spacings[0], field.patch.spacings[1])
    root = np.sqrt(mu)
    report = holomorphy_residual(root * z1, spacings, RES_CR_Z1)
    return report.merge(holomorphy_residual(root * np.conj(z2), spacings, RES_CR_Z2))


def weierstrass_roundtrip(
    field: SpinorField, spinor_result: Optional[ImmersionResult] = None
) -> Tuple[ImmersionResult, ResidualReport]:
    """Spinor field → (h, g) → classical surface, aligned onto the spinor surface.

    Returns
    -------
    Tuple[ImmersionResult, ResidualReport]
        Aligned classical surface and a report with the Cauchy-Riemann residuals, isotropy and
        the nodewise ``roundtrip_distance``.
    """
    if spinor_result is None:
        spinor_result = integrate_xi(field)
    pair = spinor_to_weierstrass(field)
    base = (field.base_node[0], field.base_node[1])
    classical = classical_weierstrass(pair, base_node=base)
    Q, t, _ = procrustes_align(classical.positions, spinor_result.positions)
    aligned = classical.transformed(Q, t)
    report = cauchy_riemann_residuals(field).merge(isotropy_residual(pair))
    report.add(
        RES_ROUNDTRIP, np.linalg.norm(aligned.positions - spinor_result.positions, axis=-1)
    )
    logger.info(
        f"Weierstrass round trip on {field.patch.scene.name!r}: "
        f"{report[RES_ROUNDTRIP].max:.3e}"
    )
    return aligned, report
