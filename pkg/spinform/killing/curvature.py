"""Curvature of the modified spinor connection.

The modified connection ∇' = ∇ + ½ Σ_j e_j·B(·, e_j) - (κ/2)·ν·(·) has curvature

    Ω(X, Y) = R^Σ(X, Y) - E(X, Y),

where R^Σ is the curvature of the spin connection and E collects the terms produced by the
second fundamental form,

    E(X, Y) = -½ Σ_j e_j·((∇̃_X B)(Y, e_j) - (∇̃_Y B)(X, e_j)) + 𝒜 + ℬ - (κ/2)·X∧Y,

with 𝒜 built from B*(X, B(Y, e_j)) on the tangent bivectors and ℬ from B(X, B*(Y, n_k)) on the
normal bivectors. Ω vanishes identically exactly when the Gauss, Codazzi and Ricci equations hold.

Field-level functions take coordinate vectors X, Y of shape (p,) or broadcastable to S + (p,)
and return coefficient arrays of shape S + (2^N,).
"""

from typing import Dict, Optional, Tuple

import numpy as np

from spinform.clifford.multivector import Multivector
from spinform.geometry.curvature import codazzi_tensor, connection_curvature
from spinform.geometry.patch import DiscretePatch
from spinform.killing.solver import SpinorField, plaquette_holonomy
from spinform.killing.transport import killing_coefficients


def _frame_components(patch: DiscretePatch, X: np.ndarray) -> np.ndarray:
    """Orthonormal-frame components Σ_k X_k L[k, :] of a coordinate vector."""
    return np.einsum("...k,...ki->...i", np.asarray(X, dtype=float), patch.coframe)


def _padded(patch: DiscretePatch, matrices: np.ndarray, offset: int) -> np.ndarray:
    """Embed square blocks into N×N matrices starting at generator ``offset``."""
    n_gen = patch.algebra.n
    size = matrices.shape[-1]
    out = np.zeros(matrices.shape[:-2] + (n_gen, n_gen))
    out[..., offset : offset + size, offset : offset + size] = matrices
    return out


def spinor_curvature_field(patch: DiscretePatch, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """R^Σ(X, Y) = ½ Σ_{j<k} ⟨R(X, Y)e_j, e_k⟩ e_je_k over tangent and normal frames."""
    full = connection_curvature(patch)  # [..., x, y, i, l]
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    planes = np.einsum("...x,...y,...xyil->...il", X, Y, full)
    return patch.algebra.bivectors(_padded(patch, planes, 0))


def codazzi_term(patch: DiscretePatch, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """-½ Σ_j e_j·((∇̃_X B)(Y, e_j) - (∇̃_Y B)(X, e_j))."""
    p, q = patch.p, patch.q
    x = _frame_components(patch, X)
    y = _frame_components(patch, Y)
    codazzi = np.einsum("...x,...y,...xyaj->...aj", x, y, codazzi_tensor(patch))
    out = np.zeros(codazzi.shape[:-2] + (patch.algebra.size,))
    for a in range(q):
        for j in range(p):
            # e_j n_a is already in increasing generator order
            out[..., (1 << j) | patch.normal_blade(a)] = -0.5 * codazzi[..., a, j]
    return out


def _directional_second_form(patch: DiscretePatch, X: np.ndarray) -> np.ndarray:
    """B(X, ·) as a matrix BX[c, k] = ⟨B(X, e_k), n_c⟩."""
    return np.einsum("...i,...cik->...ck", _frame_components(patch, X), patch.b)


def second_form_terms(patch: DiscretePatch, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """𝒜 + ℬ, the terms quadratic in B, as coefficient arrays.

    The tangent part reads ½ Σ_{j<k} (⟨B(X, e_k), B(Y, e_j)⟩ - ⟨B(Y, e_k), B(X, e_j)⟩) e_je_k and
    the normal part ½ Σ_{k<l} ⟨B(X, B*(Y, n_k)) - B(Y, B*(X, n_k)), n_l⟩ n_kn_l.
    """
    bx = _directional_second_form(patch, X)
    by = _directional_second_form(patch, Y)
    tangent = np.einsum("...ck,...cj->...jk", bx, by) - np.einsum("...ck,...cj->...jk", by, bx)
    normal = np.einsum("...lm,...km->...kl", bx, by) - np.einsum("...lm,...km->...kl", by, bx)
    algebra = patch.algebra
    return algebra.bivectors(_padded(patch, tangent, 0)) + algebra.bivectors(
        _padded(patch, normal, patch.p)
    )


def ambient_term(patch: DiscretePatch, X: np.ndarray, Y: np.ndarray, kappa: int) -> np.ndarray:
    """-(κ/2)·X∧Y with X∧Y = ½(XY - YX) on the tangent frame."""
    x = _frame_components(patch, X)
    y = _frame_components(patch, Y)
    wedge = x[..., :, None] * y[..., None, :] - y[..., :, None] * x[..., None, :]
    # bivectors() carries a factor ½, X∧Y = Σ_{i<j} (x_i y_j - x_j y_i) e_ie_j
    return -0.5 * kappa * patch.algebra.bivectors(_padded(patch, 2.0 * wedge, 0))


def curvature_action_field(
    patch: DiscretePatch, X: np.ndarray, Y: np.ndarray, kappa: Optional[int] = None
) -> np.ndarray:
    """E(X, Y) at every node."""
    kappa = patch.kappa if kappa is None else kappa
    out = codazzi_term(patch, X, Y) + second_form_terms(patch, X, Y)
    if kappa != 0:
        out = out + ambient_term(patch, X, Y, kappa)
    return out


def modified_curvature_field(
    patch: DiscretePatch, X: np.ndarray, Y: np.ndarray, kappa: Optional[int] = None
) -> np.ndarray:
    """Ω(X, Y) = R^Σ(X, Y) - E(X, Y) at every node."""
    return spinor_curvature_field(patch, X, Y) - curvature_action_field(patch, X, Y, kappa)


def curvature_action(
    patch: DiscretePatch, node: Tuple[int, ...], X: np.ndarray, Y: np.ndarray
) -> Multivector:
    """The second-fundamental-form part E(X, Y) of the spinor curvature at a node.

    Parameters
    ----------
    patch : DiscretePatch
        Built patch.
    node : Tuple[int, ...]
        Grid node.
    X, Y : np.ndarray
        Coordinate vectors, shape (p,).

    Returns
    -------
    Multivector
        Even element E(X, Y); zero when B = 0 on a Euclidean scene.
    """
    return Multivector(patch.signature, curvature_action_field(patch, X, Y)[tuple(node)])


def spinor_curvature(
    patch: DiscretePatch, node: Tuple[int, ...], X: np.ndarray, Y: np.ndarray
) -> Multivector:
    """Curvature R^Σ(X, Y) of the spin connection at a node."""
    return Multivector(patch.signature, spinor_curvature_field(patch, X, Y)[tuple(node)])


def plaquette_curvature(
    patch: DiscretePatch, a: int, b: int, kappa: Optional[int] = None
) -> np.ndarray:
    """Ω(∂_a, ∂_b) averaged over the four corners of every plaquette in the (a, b) plane."""
    X = np.zeros(patch.p)
    Y = np.zeros(patch.p)
    X[a] = 1.0
    Y[b] = 1.0
    omega = modified_curvature_field(patch, X, Y, kappa)
    out = 0.0
    for da in (0, 1):
        for db in (0, 1):
            index = [slice(None)] * patch.p
            index[a] = slice(da, None if da else -1)
            index[b] = slice(db, None if db else -1)
            out = out + 0.25 * omega[tuple(index)]
    return out


def holonomy_curvature_defect(field: SpinorField) -> Dict[Tuple[int, int], np.ndarray]:
    """Per-plaquette difference between holonomy density and curvature.

    A loop of coordinate area h_a h_b based at the plaquette center returns
    1 - h_a h_b Ω(∂_a, ∂_b) + O(h⁴). Loops are computed from the lower corner, so they are first
    moved to the center by the half-diagonal transport V ≈ 1 + ½(h_a A(∂_a) + h_b A(∂_b)),
    V⁻¹(loop - 1)V, before (1 - loop) / (h_a h_b) is compared with Ω.

    Returns
    -------
    Dict[Tuple[int, int], np.ndarray]
        Max-norm of the difference per plaquette, keyed by plane (a, b).
    """
    patch = field.patch
    algebra = patch.algebra
    coefficients = killing_coefficients(patch, field.kappa)
    defects = {}
    for (a, b), loop in plaquette_holonomy(field).items():
        lower: list = [slice(None)] * patch.p
        lower[a] = slice(0, -1)
        lower[b] = slice(0, -1)
        corner = coefficients[tuple(lower)]
        ha, hb = patch.spacings[a], patch.spacings[b]
        diagonal = ha * corner[..., a, :] + hb * corner[..., b, :]
        deviation = loop.copy()
        deviation[..., 0] -= 1.0
        centered = deviation + 0.5 * (
            algebra.product(deviation, diagonal) - algebra.product(diagonal, deviation)
        )
        density = -centered / (ha * hb)
        omega = plaquette_curvature(patch, a, b, field.kappa)
        defects[(a, b)] = np.abs(density - omega).max(axis=-1)
    return defects
