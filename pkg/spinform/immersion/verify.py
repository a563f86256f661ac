"""Checks of a reconstructed immersion against the Gauss data it was built from."""

from typing import Optional, Tuple

import numpy as np

from spinform.clifford.algebra import CliffordAlgebra
from spinform.clifford.multivector import Multivector
from spinform.core.constants import (
    RES_DIRAC,
    RES_GAUSS_MAP_LIFT,
    RES_GAUSS_MAP_TANGENT,
    RES_ISOMETRY,
    RES_NORMAL_CONNECTION,
    RES_REFERENCE,
    RES_SECOND_FORM,
)
from spinform.core.exceptions import SceneError
from spinform.geometry.patch import DiscretePatch
from spinform.immersion.reconstruct import ImmersionResult, ambient_metric
from spinform.killing.lift import adapted_frames
from spinform.killing.solver import SpinorField
from spinform.utils.logging import get_logger
from spinform.utils.math import grid_gradients, grid_hessian, procrustes_align
from spinform.utils.results import ResidualReport

logger = get_logger(__name__)


def _inner(patch: DiscretePatch, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.sum(u * v * ambient_metric(patch), axis=-1)


def _tangents(result: ImmersionResult, patch: DiscretePatch) -> np.ndarray:
    """∂_kF by finite differences, S + (p, m)."""
    return grid_gradients(result.positions, patch.spacings)


def _node_max(values: np.ndarray, p: int) -> np.ndarray:
    axes = tuple(range(p, values.ndim))
    return np.abs(values).max(axis=axes) if axes else np.abs(values)


def first_fundamental_form(result: ImmersionResult, patch: DiscretePatch) -> np.ndarray:
    """⟨∂_kF, ∂_lF⟩ in the ambient metric, S + (p, p)."""
    d = _tangents(result, patch)
    return _inner(patch, d[..., :, None, :], d[..., None, :, :])


def verify_isometry(result: ImmersionResult, patch: DiscretePatch) -> ResidualReport:
    """Compare the first fundamental form of F with g."""
    report = ResidualReport()
    defect = first_fundamental_form(result, patch) - patch.metric
    report.add(RES_ISOMETRY, _node_max(defect, patch.p))
    return report


def second_fundamental_form(result: ImmersionResult, patch: DiscretePatch) -> np.ndarray:
    """h_F[a, k, l] = ⟨∂_k∂_lF, ξ(n_a)⟩, S + (q, p, p).

    The normal fields are ξ(n_a); inside a space form they are orthogonal to F as well, so the
    projection measures the second fundamental form within the space form.
    """
    hessian = grid_hessian(result.positions, patch.spacings)  # S + (p, p, m)
    normals = result.normal_samples
    return _inner(patch, hessian[..., None, :, :, :], normals[..., :, None, None, :])


def verify_second_fundamental_form(
    result: ImmersionResult, patch: DiscretePatch
) -> ResidualReport:
    """Compare B_F with B and the normal connection of F with ∇'.

    Returns
    -------
    ResidualReport
        Entries ``second_fundamental_form`` and ``normal_connection``.
    """
    p = patch.p
    report = ResidualReport()
    defect = second_fundamental_form(result, patch) - patch.second_form
    report.add(RES_SECOND_FORM, _node_max(defect, p))
    normals = result.normal_samples
    d_normals = grid_gradients(normals, patch.spacings)  # S + (p, q, m)
    connection = _inner(patch, d_normals[..., :, :, None, :], normals[..., None, None, :, :])
    expected = patch.omega[..., p:, p:]
    report.add(RES_NORMAL_CONNECTION, _node_max(connection - expected, p))
    return report


def mean_curvature_vector(result: ImmersionResult, patch: DiscretePatch) -> np.ndarray:
    """H_F = (1/p) Σ_a (g^{kl} h_F[a, k, l]) ξ(n_a) from finite differences of F."""
    h = second_fundamental_form(result, patch)
    traces = np.einsum("...kl,...akl->...a", np.linalg.inv(patch.metric), h) / patch.p
    return np.einsum("...a,...am->...m", traces, result.normal_samples)


def principal_curvatures(result: ImmersionResult, patch: DiscretePatch) -> np.ndarray:
    """Eigenvalues of the shape operator of F for hypersurfaces, ascending, S + (p,).

    Raises
    ------
    ValueError
        If the patch has more than one normal direction.
    """
    if patch.q != 1:
        raise ValueError(f"Principal curvatures need q = 1, got q = {patch.q}")
    h = second_fundamental_form(result, patch)[..., 0, :, :]
    frame_h = np.einsum("...ik,...kl,...jl->...ij", patch.frame, h, patch.frame)
    return np.linalg.eigvalsh(0.5 * (frame_h + np.swapaxes(frame_h, -1, -2)))


# =============================================================================
# Spinor identities
# =============================================================================


def dirac_residual(field: SpinorField) -> ResidualReport:
    """Dφ - (p/2)(H - κν)·φ with Dφ = Σ_j e_j·∇_{e_j}φ.

    ∇ acts on gauge components as ∂ + σ; the right-hand side is ½ Σ_j B(e_j, e_j)·φ - (p/2)κ ν·φ.
    """
    patch = field.patch
    algebra = patch.algebra
    p = patch.p
    values = field.values
    derivative = grid_gradients(values, patch.spacings)  # S + (p, size)
    covariant = derivative + algebra.product(patch.sigma, values[..., None, :])
    frame_derivative = np.einsum("...jk,...ks->...js", patch.frame, covariant)
    generators = algebra.vectors(np.eye(algebra.n)[:p])  # (p, size)
    dirac = np.sum(algebra.product(generators, frame_derivative), axis=-2)

    trace = np.einsum("...jjs->...s", patch.b_vectors)
    rhs = 0.5 * algebra.product(trace, values)
    if field.kappa != 0:
        nu = np.zeros(algebra.size)
        nu[patch.nu_index] = 1.0
        rhs = rhs - 0.5 * p * field.kappa * algebra.product(nu, values)
    report = ResidualReport()
    report.add(RES_DIRAC, np.abs(dirac - rhs).max(axis=-1))
    return report


def volume_index(p: int) -> int:
    """Blade index of ω = e_1···e_p."""
    return (1 << p) - 1


def gauss_map_field(field: SpinorField) -> np.ndarray:
    """χ(φ) = τ(φ)·e_1···e_p·φ at every node."""
    algebra = field.patch.algebra
    omega = np.zeros(algebra.size)
    omega[volume_index(field.patch.p)] = 1.0
    return algebra.product(algebra.reverse(field.values), algebra.product(omega, field.values))


def gauss_map(field: SpinorField, node: Tuple[int, ...]) -> Multivector:
    """Unit p-blade χ(φ) = ⟨⟨ω·φ, φ⟩⟩ representing the tangent plane at a node."""
    phi = field.value(node).value
    omega = Multivector(field.signature, np.eye(field.signature.size)[volume_index(field.patch.p)])
    return phi.reverse() * omega * phi


def _blade_product(algebra: CliffordAlgebra, vectors: np.ndarray) -> np.ndarray:
    """Clifford product v_1···v_p of grade-1 arrays stacked on axis -2."""
    out = vectors[..., 0, :]
    for i in range(1, vectors.shape[-2]):
        out = algebra.product(out, vectors[..., i, :])
    return out


def gauss_map_residual(field: SpinorField, result: ImmersionResult) -> ResidualReport:
    """Gauss map checks: χ(φ) against ξ(e_1)···ξ(e_p) and against the tangents of F.

    Returns
    -------
    ResidualReport
        ``gauss_map_lift`` (exact identity) and ``gauss_map_tangent`` (finite differences).
    """
    patch = field.patch
    algebra = patch.algebra
    chi = gauss_map_field(field)
    xi_vectors = algebra.vectors(result.xi_samples)
    lift = _blade_product(algebra, xi_vectors)
    tangents = np.einsum("...ik,...km->...im", patch.frame, _tangents(result, patch))
    tangent_blade = _blade_product(algebra, algebra.vectors(tangents))
    report = ResidualReport()
    report.add(RES_GAUSS_MAP_LIFT, np.abs(chi - lift).max(axis=-1))
    report.add(RES_GAUSS_MAP_TANGENT, np.abs(chi - tangent_blade).max(axis=-1))
    return report


# =============================================================================
# Reference comparison
# =============================================================================


def hyperbolic_alignment(
    result: ImmersionResult, patch: DiscretePatch, node: Tuple[int, ...]
) -> Tuple[np.ndarray, np.ndarray]:
    """Lorentz map taking the reconstructed frame at ``node`` onto the reference frame there."""
    reference = adapted_frames(patch, orthonormalize=False)[node]
    field_frame = np.concatenate(
        [
            result.xi_samples[node],
            result.normal_samples[node],
            result.positions[node][None, :],
        ]
    )
    # Λ · field_frame[r] = reference[r] for every row r
    Q = np.linalg.solve(field_frame, reference).T
    return Q, np.zeros(Q.shape[0])


def reference_distance(
    result: ImmersionResult, patch: DiscretePatch, node: Optional[Tuple[int, ...]] = None
) -> Tuple[ImmersionResult, ResidualReport]:
    """Align to the scene's reference embedding and report the largest distance.

    Euclidean and spherical reconstructions are aligned by the best proper rigid motion
    (Procrustes); hyperbolic ones by the Lorentz map matching the frames at the base node.

    Returns
    -------
    Tuple[ImmersionResult, ResidualReport]
        Aligned result and a report with ``reference_distance``.

    Raises
    ------
    SceneError
        If the scene has no reference embedding.
    """
    scene = patch.scene
    reference = scene.reference_positions()
    if reference is None:
        raise SceneError(f"Scene {scene.name!r} has no reference embedding")
    if patch.kappa == -1:
        if node is None and result.field is not None:
            node = result.field.base_node
        elif node is None:
            node = tuple(n // 2 for n in scene.shape)
        Q, t = hyperbolic_alignment(result, patch, node)
    else:
        Q, t, _ = procrustes_align(result.positions, reference)
    aligned = result.transformed(Q, t)
    report = ResidualReport()
    report.add(RES_REFERENCE, np.linalg.norm(aligned.positions - reference, axis=-1))
    logger.info(
        f"Distance to the reference of {scene.name!r}: {report[RES_REFERENCE].max:.3e}"
    )
    return aligned, report
