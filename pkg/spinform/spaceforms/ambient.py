"""Immersions into the sphere Sⁿ ⊂ R^{n+1} and the hyperboloid ℍⁿ ⊂ R^{n,1}.

With ν = e_{n+1} the extra generator, the solved field gives the immersion pointwise as
F = ⟨⟨ν·φ, φ⟩⟩ = Ad([φ]^{-1})ν, so no integration is needed. ν is parallel for the patch
connection and ⟨ν, ν⟩ = κ, which makes ⟨F, F⟩ = κ an exact identity on every node.
"""

from dataclasses import dataclass

import numpy as np

from spinform.clifford.algebra import Signature
from spinform.core.constants import (
    RES_DF,
    RES_LORENTZ_NORM,
    RES_PRINCIPAL,
    RES_UNIT_NORM,
)
from spinform.geometry.patch import DiscretePatch
from spinform.immersion.reconstruct import ImmersionResult, coordinate_xi, xi_frames
from spinform.immersion.verify import (
    principal_curvatures,
    verify_isometry,
    verify_second_fundamental_form,
)
from spinform.killing.solver import SpinorField
from spinform.utils.logging import get_logger
from spinform.utils.math import grid_gradients
from spinform.utils.results import ResidualReport

logger = get_logger(__name__)


@dataclass(frozen=True)
class AmbientModel:
    """A space form of curvature κ = ±1 as a quadric in a flat space of one dimension more.

    Attributes
    ----------
    kappa : int
        +1 for Sⁿ, -1 for ℍⁿ.
    n : int
        Dimension of the space form.
    signature : Signature
        Cl_{n+1} for the sphere, Cl_{n,1} for the hyperboloid.
    """

    kappa: int
    n: int
    signature: Signature

    @property
    def nu_index(self) -> int:
        """Blade index of ν = e_{n+1}."""
        return 1 << self.n

    @property
    def nu(self) -> np.ndarray:
        """Ambient components of ν."""
        out = np.zeros(self.n + 1)
        out[-1] = 1.0
        return out

    @property
    def metric(self) -> np.ndarray:
        return np.array(self.signature.metric, dtype=float)

    def inner(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """⟨u, v⟩ in the flat ambient of the quadric."""
        return np.sum(np.asarray(u) * np.asarray(v) * self.metric, axis=-1)


def ambient_model(kappa: int, n: int) -> AmbientModel:
    """Build the model of Sⁿ (κ = 1) or ℍⁿ (κ = -1).

    Raises
    ------
    ValueError
        If κ is not ±1 or n < 2.
    """
    if kappa not in (1, -1):
        raise ValueError(f"Space forms have κ = ±1, got {kappa}")
    if n < 2:
        raise ValueError(f"Space form dimension must be at least 2, got {n}")
    signature = Signature.euclidean(n + 1) if kappa == 1 else Signature.lorentzian(n)
    return AmbientModel(kappa=kappa, n=n, signature=signature)


def _model(patch: DiscretePatch) -> AmbientModel:
    if patch.kappa == 0:
        raise ValueError(f"Scene {patch.scene.name!r} is Euclidean; use integrate_xi")
    return ambient_model(patch.kappa, patch.p + patch.q)


def immersion_spaceform(field: SpinorField) -> ImmersionResult:
    """F = τ[φ]·ν·[φ] at every node.

    Parameters
    ----------
    field : SpinorField
        Field solved with the κ-term of the matching space form.

    Returns
    -------
    ImmersionResult
        Positions on the quadric with the norm residual (``unit_norm`` for Sⁿ,
        ``lorentz_norm`` for ℍⁿ) in the report.

    Raises
    ------
    ValueError
        If the scene is Euclidean or the field was solved with another κ.
    """
    patch = field.patch
    model = _model(patch)
    if field.kappa != model.kappa:
        raise ValueError(
            f"Field solved with κ = {field.kappa} on a scene with κ = {model.kappa}"
        )
    frames = xi_frames(field)
    p, q = patch.p, patch.q
    positions = frames[..., model.n, :].copy()

    report = ResidualReport()
    norms = model.inner(positions, positions)
    name = RES_UNIT_NORM if model.kappa == 1 else RES_LORENTZ_NORM
    report.add(name, np.abs(norms - model.kappa))
    if model.kappa == -1 and np.any(positions[..., -1] <= 0):
        logger.warning(f"Part of {patch.scene.name!r} lies on the lower sheet of the hyperboloid")
    logger.info(f"Evaluated F = ⟨⟨ν·φ, φ⟩⟩ on {patch.scene.name!r}")
    return ImmersionResult(
        positions=positions,
        xi_samples=frames[..., :p, :].copy(),
        normal_samples=frames[..., p : p + q, :].copy(),
        report=report,
        field=field,
    )


def dF_consistency(field: SpinorField, result: ImmersionResult) -> ResidualReport:
    """Finite-difference dF(∂_k) against ξ(∂_k) = ⟨⟨∂_k·φ, φ⟩⟩."""
    patch = field.patch
    _model(patch)
    dF = grid_gradients(result.positions, patch.spacings)
    defect = dF - coordinate_xi(field)
    report = ResidualReport()
    report.add(RES_DF, np.abs(defect).max(axis=(-2, -1)))
    return report


def spaceform_isometry_and_II(result: ImmersionResult, patch: DiscretePatch) -> ResidualReport:
    """First and second fundamental forms of F inside the space form.

    For hypersurfaces the principal curvatures of F are compared with the eigenvalues of B as
    well.
    """
    _model(patch)
    report = verify_isometry(result, patch).merge(verify_second_fundamental_form(result, patch))
    if patch.q == 1:
        measured = principal_curvatures(result, patch)
        expected = np.linalg.eigvalsh(patch.b[..., 0, :, :])
        report.add(RES_PRINCIPAL, np.abs(measured - expected).max(axis=-1))
    return report


# =============================================================================
# Hyperbolic models
# =============================================================================


def hyperboloid_to_poincare(points: np.ndarray) -> np.ndarray:
    """Upper hyperboloid sheet (time last) to the Poincaré ball: y = x / (1 + x_{n+1}).

    Raises
    ------
    ValueError
        If a point is not on the upper sheet.
    """
    points = np.asarray(points, dtype=float)
    time = points[..., -1]
    if np.any(time <= 0):
        raise ValueError("Points must lie on the upper sheet of the hyperboloid")
    return points[..., :-1] / (1.0 + time)[..., None]


def poincare_to_hyperboloid(points: np.ndarray) -> np.ndarray:
    """Inverse of ``hyperboloid_to_poincare``.

    Raises
    ------
    ValueError
        If a point is outside the open unit ball.
    """
    points = np.asarray(points, dtype=float)
    r2 = np.sum(points**2, axis=-1)
    if np.any(r2 >= 1.0):
        raise ValueError("Points must lie in the open unit ball")
    scale = 1.0 / (1.0 - r2)
    return np.concatenate([2.0 * points * scale[..., None], ((1.0 + r2) * scale)[..., None]], -1)
