"""Discrete patch: frames, connection forms and the second fundamental form on a grid.

The tangent frame is the Gram-Schmidt frame of the coordinate fields in axis order, computed as
E = L^{-1} with g = L Lᵀ the Cholesky factorization. Rows of E hold the coordinate components
of e_i; conversely ∂_k = Σ_i L[k, i] e_i.

Connection forms use the convention ω_k[i, j] = ⟨∇_{∂_k} e_i, e_j⟩ over the combined
(tangent, normal) frame, and the spin connection is σ(∂_k) = ½ Σ_{i<j} ω_k[i, j] e_ie_j, so that
[σ(X), e_j] = ∇_X e_j.

The metric is sampled on the grid padded by two ghost layers, so Christoffel symbols and frame
derivatives use centered stencils at every node and their errors vary smoothly up to the
boundary. Curvatures, which differentiate ω once more, then stay second order everywhere.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from spinform.clifford.algebra import CliffordAlgebra, Signature, get_algebra
from spinform.core.exceptions import DegenerateMetricError, SceneError
from spinform.geometry.scenes import Scene
from spinform.utils.logging import get_logger
from spinform.utils.math import grid_gradients

logger = get_logger(__name__)

SYMMETRY_TOLERANCE = 1e-10
GHOST_LAYERS = 2


@dataclass(frozen=True, eq=False)
class DiscretePatch:
    """Geometric data of a scene sampled on its grid.

    Array shapes use S = (resolution,)*p for the grid, p tangent and q normal directions and
    N generators of the algebra.

    Attributes
    ----------
    scene : Scene
        Source scene.
    coords : np.ndarray
        Node coordinates, S + (p,).
    metric : np.ndarray
        g_ij, S + (p, p).
    christoffel : np.ndarray
        Γ^m_{kl}, S + (p, p, p) indexed [m, k, l].
    frame : np.ndarray
        E, S + (p, p); row i holds the coordinate components of e_i.
    coframe : np.ndarray
        L = E^{-1}, S + (p, p); ∂_k = Σ_i L[k, i] e_i.
    omega : np.ndarray
        Connection forms ω_k[i, j] over tangent then normal directions, S + (p, p+q, p+q).
    second_form : np.ndarray
        Coordinate components h^a_ij, S + (q, p, p).
    b : np.ndarray
        Frame components b[a, i, j] = ⟨B(e_i, e_j), n_a⟩, S + (q, p, p).
    sigma : np.ndarray
        Spin connection bivectors σ(∂_k), S + (p, 2^N).
    b_vectors : np.ndarray
        B(e_i, e_j) as grade-1 coefficient arrays, S + (p, p, 2^N).
    """

    scene: Scene
    coords: np.ndarray
    metric: np.ndarray
    christoffel: np.ndarray
    frame: np.ndarray
    coframe: np.ndarray
    omega: np.ndarray
    second_form: np.ndarray
    b: np.ndarray
    sigma: np.ndarray
    b_vectors: np.ndarray

    @property
    def p(self) -> int:
        return self.scene.p

    @property
    def q(self) -> int:
        return self.scene.q

    @property
    def kappa(self) -> int:
        return self.scene.kappa

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.scene.shape

    @property
    def spacings(self) -> Tuple[float, ...]:
        return self.scene.spacings

    @property
    def signature(self) -> Signature:
        return self.scene.signature

    @property
    def algebra(self) -> CliffordAlgebra:
        return get_algebra(self.scene.signature)

    @property
    def nu_index(self) -> int:
        """Blade index of ν = e_{n+1} (space-form scenes only)."""
        if self.kappa == 0:
            raise ValueError("Euclidean scenes have no ν generator")
        return 1 << (self.p + self.q)

    def normal_blade(self, a: int) -> int:
        """Blade index of the normal generator n_{a+1} = e_{p+a+1}."""
        return 1 << (self.p + a)

    def tangent_vectors(self, node: Tuple[int, ...], X: np.ndarray) -> np.ndarray:
        """Frame components of a coordinate vector X at a node."""
        return np.asarray(X, dtype=float) @ self.coframe[node]


def _check_metric(metric: np.ndarray) -> None:
    if not np.allclose(metric, np.swapaxes(metric, -1, -2), atol=SYMMETRY_TOLERANCE):
        raise SceneError("Metric is not symmetric")
    eigenvalues = np.linalg.eigvalsh(metric)
    smallest = eigenvalues[..., 0]
    if not np.all(np.isfinite(smallest)) or np.any(smallest <= 0):
        node = np.unravel_index(np.argmin(np.nan_to_num(smallest, nan=-np.inf)), smallest.shape)
        raise DegenerateMetricError(
            f"Metric is not positive definite (smallest eigenvalue {smallest[node]:.3e})",
            node=tuple(int(i) for i in node),
        )


def christoffel_symbols(metric: np.ndarray, spacings: Tuple[float, ...]) -> np.ndarray:
    """Γ^m_{kl} from finite differences of g, indexed [..., m, k, l]."""
    dg = grid_gradients(metric, spacings)  # [..., k, i, j] = ∂_k g_ij
    lower = 0.5 * (
        np.einsum("...krl->...rkl", dg) + np.einsum("...lrk->...rkl", dg) - dg
    )
    return np.einsum("...mr,...rkl->...mkl", np.linalg.inv(metric), lower)


def tangent_connection(
    frame: np.ndarray,
    metric: np.ndarray,
    christoffel: np.ndarray,
    spacings: Tuple[float, ...],
) -> np.ndarray:
    """ω_k[i, j] = ⟨∇_{∂_k} e_i, e_j⟩ for the tangent frame, antisymmetrized."""
    dE = grid_gradients(frame, spacings)  # [..., k, i, m] = ∂_k E[i, m]
    coefficients = dE + np.einsum("...il,...mkl->...kim", frame, christoffel)
    omega = np.einsum("...kim,...mr,...jr->...kij", coefficients, metric, frame)
    return 0.5 * (omega - np.swapaxes(omega, -1, -2))


def extended_grid(scene: Scene) -> np.ndarray:
    """Scene grid padded by ``GHOST_LAYERS`` nodes on every side."""
    axes = []
    for axis, spacing in zip(scene.axes(), scene.spacings):
        pad = spacing * np.arange(1, GHOST_LAYERS + 1)
        axes.append(np.concatenate([axis[0] - pad[::-1], axis, axis[-1] + pad]))
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)


def build_patch(scene: Scene) -> DiscretePatch:
    """Sample a scene and compute frames, connections and the second fundamental form.

    Parameters
    ----------
    scene : Scene
        Scene to discretize.

    Returns
    -------
    DiscretePatch
        Immutable patch data.

    Raises
    ------
    DegenerateMetricError
        If the metric is not positive definite at some node.
    SceneError
        If the provider returns an asymmetric metric or second fundamental form, or arrays of
        the wrong shape.
    """
    p, q = scene.p, scene.q
    spacings = scene.spacings
    coords = scene.grid()
    grid_shape = coords.shape[:-1]
    provider = scene.provider
    crop = (slice(GHOST_LAYERS, -GHOST_LAYERS),) * p

    extended = extended_grid(scene)
    metric_ext = np.asarray(provider.metric(extended), dtype=float)
    h = np.asarray(provider.second_form(coords), dtype=float)
    nabla_normal = np.asarray(provider.normal_connection(coords), dtype=float)
    for label, arr, tail, shape in (
        ("metric", metric_ext, (p, p), extended.shape[:-1]),
        ("second_form", h, (q, p, p), grid_shape),
        ("normal_connection", nabla_normal, (p, q, q), grid_shape),
    ):
        if arr.shape != shape + tail:
            raise SceneError(
                f"Provider {provider.name!r} returned {label} of shape {arr.shape}, "
                f"expected {shape + tail}"
            )
    _check_metric(metric_ext[crop])
    try:
        _check_metric(metric_ext)
    except DegenerateMetricError as exc:
        raise DegenerateMetricError(
            "Metric degenerates just outside the domain; shrink the domain"
        ) from exc
    if not np.allclose(h, np.swapaxes(h, -1, -2), atol=SYMMETRY_TOLERANCE):
        raise SceneError(f"Provider {provider.name!r}: second fundamental form is not symmetric")

    coframe_ext = np.linalg.cholesky(metric_ext)
    frame_ext = np.linalg.inv(coframe_ext)
    christoffel_ext = christoffel_symbols(metric_ext, spacings)
    omega_t = tangent_connection(frame_ext, metric_ext, christoffel_ext, spacings)[crop]
    metric = metric_ext[crop].copy()
    christoffel = christoffel_ext[crop].copy()
    frame = frame_ext[crop].copy()
    coframe = coframe_ext[crop].copy()

    omega = np.zeros(grid_shape + (p, p + q, p + q))
    omega[..., :p, :p] = omega_t
    omega[..., p:, p:] = 0.5 * (nabla_normal - np.swapaxes(nabla_normal, -1, -2))

    b = np.einsum("...ik,...akl,...jl->...aij", frame, h, frame)

    algebra = get_algebra(scene.signature)
    n_gen = algebra.n
    padded = np.zeros(grid_shape + (p, n_gen, n_gen))
    padded[..., : p + q, : p + q] = omega
    sigma = algebra.bivectors(padded)
    components = np.zeros(grid_shape + (p, p, n_gen))
    components[..., p : p + q] = np.moveaxis(b, -3, -1)
    b_vectors = algebra.vectors(components)

    defect = np.einsum("...ik,...kl,...jl->...ij", frame, metric, frame) - np.eye(p)
    logger.debug(f"Frame orthonormality defect {np.abs(defect).max():.2e}")
    logger.info(
        f"Built patch {scene.name!r}: grid {grid_shape}, p={p}, q={q}, "
        f"ambient={scene.ambient}, algebra {scene.signature}"
    )

    arrays = (coords, metric, christoffel, frame, coframe, omega, h, b, sigma, b_vectors)
    for arr in arrays:
        arr.setflags(write=False)
    return DiscretePatch(scene, *arrays)


def bstar(
    patch: DiscretePatch, X: np.ndarray, N: np.ndarray, node: Tuple[int, ...]
) -> np.ndarray:
    """Adjoint B*(X, N) with ⟨B(X, Y), N⟩ = ⟨Y, B*(X, N)⟩.

    Parameters
    ----------
    patch : DiscretePatch
        Built patch.
    X : np.ndarray
        Tangent vector in orthonormal frame components, shape (p,).
    N : np.ndarray
        Normal vector in orthonormal normal-frame components, shape (q,).
    node : Tuple[int, ...]
        Grid node.

    Returns
    -------
    np.ndarray
        Frame components of B*(X, N), shape (p,).
    """
    return np.einsum("i,aik,a->k", np.asarray(X, float), patch.b[node], np.asarray(N, float))


def second_form_at(
    patch: DiscretePatch, X: np.ndarray, Y: np.ndarray, node: Tuple[int, ...]
) -> np.ndarray:
    """Normal-frame components of B(X, Y) for frame-component tangent vectors."""
    return np.einsum("i,aij,j->a", np.asarray(X, float), patch.b[node], np.asarray(Y, float))
