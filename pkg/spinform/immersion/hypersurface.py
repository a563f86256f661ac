"""Hypersurfaces of R^{p+1} given by a shape operator, and the Cl_p form of their spinor fields.

A symmetric shape operator T sets B(X, Y) = ⟨T(X), Y⟩ν. Under the isomorphism Cl_p ≅ Cl⁰_{p+1}
the Killing equation of the solved field becomes ∇_Xψ = -½ T(X)·ψ in Cl_p, whose trace is the
Dirac equation Dψ = (p/2)Hψ with H = tr(T)/p.
"""

from typing import Callable, Union

import numpy as np

from spinform.clifford.algebra import Signature, get_algebra
from spinform.clifford.spin import fields_from_cl_p, fields_to_cl_p
from spinform.core.constants import RES_FRIEDRICH, RES_NORMALIZED
from spinform.geometry.patch import SYMMETRY_TOLERANCE
from spinform.geometry.scenes import Scene, SceneProvider
from spinform.killing.solver import SpinorField
from spinform.utils.math import grid_gradients
from spinform.utils.results import ResidualReport

OperatorField = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


class ShapeOperatorProvider(SceneProvider):
    """A provider whose second fundamental form comes from a shape operator.

    T is given as a mixed tensor T^k_l in coordinates, either as a constant (p, p) array or as
    a callable on coordinates returning (..., p, p); then h_kl = g_km T^m_l.
    """

    name = "shape_operator"
    oracle = "none"

    def __init__(self, base: SceneProvider, operator: OperatorField) -> None:
        if base.q != 1 or base.ambient != "euclidean":
            raise ValueError("Shape operators describe hypersurfaces of Euclidean space (q = 1)")
        self.base = base
        self.operator = operator
        self.p = base.p  # type: ignore[misc]
        self.default_domain = base.default_domain  # type: ignore[misc]

    def _operator(self, coords: np.ndarray) -> np.ndarray:
        if callable(self.operator):
            T = np.asarray(self.operator(coords), dtype=float)
        else:
            T = np.broadcast_to(
                np.asarray(self.operator, dtype=float), coords.shape[:-1] + (self.p, self.p)
            )
        if T.shape != coords.shape[:-1] + (self.p, self.p):
            raise ValueError(f"Shape operator must have shape (..., {self.p}, {self.p})")
        return T

    def metric(self, coords: np.ndarray) -> np.ndarray:
        return self.base.metric(coords)

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        h = np.matmul(self.metric(coords), self._operator(coords))
        if not np.allclose(h, np.swapaxes(h, -1, -2), atol=SYMMETRY_TOLERANCE):
            raise ValueError("Shape operator is not symmetric with respect to the metric")
        return h[..., None, :, :]


def hypersurface_lift(scene: Scene, operator: OperatorField) -> Scene:
    """Scene with the metric of ``scene`` and B(X, Y) = ⟨T(X), Y⟩ν.

    Parameters
    ----------
    scene : Scene
        Hypersurface scene (q = 1, Euclidean ambient) providing the metric.
    operator : np.ndarray or callable
        Shape operator T^k_l in coordinates.

    Returns
    -------
    Scene
        New scene sharing domain and resolution; it has no reference embedding.

    Raises
    ------
    ValueError
        If the scene is not a Euclidean hypersurface or T is not symmetric.
    """
    provider = ShapeOperatorProvider(scene.provider, operator)
    # evaluate once so asymmetric operators fail here rather than during patch building
    provider.second_form(scene.grid())
    return Scene(
        name=f"{scene.name}+shape_operator",
        provider=provider,
        domain=scene.domain,
        resolution=scene.resolution,
        description=f"{scene.name} with a prescribed shape operator",
        pipeline=scene.pipeline,
        tolerances=dict(scene.tolerances),
    )


def clp_field(field: SpinorField) -> np.ndarray:
    """ψ, the Cl_p image of the solved field, shape S + (2^p,)."""
    _check_hypersurface(field)
    return fields_to_cl_p(field.values, field.patch.p)


def _check_hypersurface(field: SpinorField) -> None:
    if field.patch.q != 1 or field.kappa != 0:
        raise ValueError("The Cl_p picture needs a hypersurface of Euclidean space")


def friedrich_residual(field: SpinorField) -> ResidualReport:
    """Dψ - (p/2)Hψ for ψ in Cl_p, and the normalization of ψ.

    The normalization check maps ψ back to Cl⁰_{p+1} and measures τ(g)g - 1 in the canonical
    gauge of the patch.

    Returns
    -------
    ResidualReport
        Entries ``friedrich_dirac`` and ``normalized``.
    """
    _check_hypersurface(field)
    patch = field.patch
    p = patch.p
    algebra = get_algebra(Signature.euclidean(p))
    psi = clp_field(field)
    # tangent bivectors e_ie_j are fixed by the isomorphism, so σ maps componentwise
    sigma = fields_to_cl_p(patch.sigma, p)
    derivative = grid_gradients(psi, patch.spacings)
    covariant = derivative + algebra.product(sigma, psi[..., None, :])
    frame_derivative = np.einsum("...jk,...ks->...js", patch.frame, covariant)
    generators = algebra.vectors(np.eye(p))
    dirac = np.sum(algebra.product(generators, frame_derivative), axis=-2)
    trace = np.einsum("...jj->...", patch.b[..., 0, :, :])
    rhs = 0.5 * trace[..., None] * psi

    report = ResidualReport()
    report.add(RES_FRIEDRICH, np.abs(dirac - rhs).max(axis=-1))
    scalar, rest = patch.algebra.spin_defect(fields_from_cl_p(psi, p))
    report.add(RES_NORMALIZED, np.maximum(np.abs(scalar - 1.0), rest))
    return report
