"""Killing coefficient and edge transport of spinor values.

The modified connection ∇' acts on gauge components by

    dφ(X) = -A(X)·φ,    A(X) = σ(X) + ½ Σ_j e_j·B(X, e_j) - (κ/2)·X·ν,

so a ∇'-parallel section solves the generalized Killing equation. A(X) is a bivector, hence
τ(A) = -A and the exact flow preserves τ(φ)φ = 1.
"""

from typing import Optional, Tuple

import numpy as np

from spinform.clifford.multivector import Multivector, SpinElement
from spinform.core.constants import DEFAULT_SUBSTEPS, RENORMALIZATION_TOLERANCE
from spinform.core.exceptions import SpinGroupError
from spinform.geometry.patch import DiscretePatch
from spinform.utils.math import rk4_step


def second_form_bivectors(patch: DiscretePatch) -> np.ndarray:
    """K(∂_k) = ½ Σ_j e_j·B(∂_k, e_j) at every node, S + (p, 2^N)."""
    algebra = patch.algebra
    p = patch.p
    # B(∂_k, e_j) = Σ_i L[k, i] B(e_i, e_j)
    b_coord = np.einsum("...ki,...ijs->...kjs", patch.coframe, patch.b_vectors)
    out = np.zeros(b_coord.shape[:-2] + (algebra.size,))
    for j in range(p):
        e_j = np.zeros(algebra.size)
        e_j[1 << j] = 1.0
        out += 0.5 * algebra.product(e_j, b_coord[..., j, :])
    return out


def coordinate_vectors(patch: DiscretePatch) -> np.ndarray:
    """∂_k as grade-1 elements in the orthonormal frame, S + (p, 2^N)."""
    algebra = patch.algebra
    components = np.zeros(patch.coframe.shape[:-1] + (algebra.n,))
    components[..., : patch.p] = patch.coframe
    return algebra.vectors(components)


def killing_coefficients(patch: DiscretePatch, kappa: Optional[int] = None) -> np.ndarray:
    """A(∂_k) at every node, S + (p, 2^N).

    Parameters
    ----------
    patch : DiscretePatch
        Built patch.
    kappa : int, optional
        Ambient curvature used for the ν-term; defaults to the scene's. Passing 0 on a
        space-form patch drops the ν-term.
    """
    kappa = patch.kappa if kappa is None else kappa
    coefficients = patch.sigma + second_form_bivectors(patch)
    if kappa != 0:
        algebra = patch.algebra
        nu = np.zeros(algebra.size)
        nu[patch.nu_index] = 1.0
        x_nu = algebra.product(coordinate_vectors(patch), nu)
        coefficients = coefficients - 0.5 * kappa * x_nu
    return coefficients


def killing_coefficient(
    patch: DiscretePatch,
    node: Tuple[int, ...],
    direction: np.ndarray,
    kappa: Optional[int] = None,
) -> Multivector:
    """Left-multiplication coefficient A(X) at a node for a coordinate vector X.

    Parameters
    ----------
    patch : DiscretePatch
        Built patch.
    node : Tuple[int, ...]
        Grid node.
    direction : np.ndarray
        Coordinate components of X, shape (p,).
    kappa : int, optional
        Ambient curvature override.

    Returns
    -------
    Multivector
        The bivector A(X); transport reads dφ/dt = -A(γ')·φ.
    """
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (patch.p,):
        raise ValueError(f"Direction needs {patch.p} coordinate components")
    coefficients = killing_coefficients(patch, kappa)[tuple(node)]
    return Multivector(patch.signature, direction @ coefficients)


def renormalize(values: np.ndarray, patch: DiscretePatch, tolerance: float) -> np.ndarray:
    """Scale values back onto τ(g)g = 1.

    Raises
    ------
    SpinGroupError
        If the non-scalar part of τ(g)g exceeds ``tolerance`` anywhere.
    """
    scalar, rest = patch.algebra.spin_defect(values)
    worst = float(np.max(rest)) if np.size(rest) else 0.0
    if worst > tolerance or np.any(scalar <= 0) or not np.all(np.isfinite(values)):
        raise SpinGroupError(
            f"Transport left the spin group: non-scalar part of τ(g)g is {worst:.3e} "
            f"(tolerance {tolerance:.1e}); the scene data is likely inconsistent"
        )
    return values / np.sqrt(scalar)[..., None]


def transport(
    values: np.ndarray,
    start: np.ndarray,
    end: np.ndarray,
    patch: DiscretePatch,
    substeps: int = DEFAULT_SUBSTEPS,
    tolerance: float = RENORMALIZATION_TOLERANCE,
) -> np.ndarray:
    """Transport arrays of values along edges with linearly interpolated coefficients.

    Parameters
    ----------
    values : np.ndarray
        Spin values at the edge starts, shape (..., 2^N).
    start, end : np.ndarray
        Edge-scaled coefficients A(γ') at the start and end nodes (already multiplied by the
        signed edge length), shape (..., 2^N).
    patch : DiscretePatch
        Patch providing the algebra.
    substeps : int
        RK4 steps per edge.
    tolerance : float
        Renormalization tolerance.

    Returns
    -------
    np.ndarray
        Renormalized values at the edge ends.
    """
    algebra = patch.algebra
    left_start = -algebra.left_matrix(start)
    left_end = -algebra.left_matrix(end)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        generator = (1.0 - t) * left_start + t * left_end
        return np.einsum("...kb,...b->...k", generator, y)

    step = 1.0 / substeps
    y = np.asarray(values, dtype=float)
    for i in range(substeps):
        y = rk4_step(rhs, i * step, step, y)
    return renormalize(y, patch, tolerance)


def transport_edge(
    phi: SpinElement,
    patch: DiscretePatch,
    edge: Tuple[Tuple[int, ...], int, int],
    substeps: int = DEFAULT_SUBSTEPS,
    kappa: Optional[int] = None,
) -> SpinElement:
    """Transport one spin value along a grid edge.

    Parameters
    ----------
    phi : SpinElement
        Value at the start node.
    patch : DiscretePatch
        Built patch.
    edge : Tuple[Tuple[int, ...], int, int]
        ``(node, axis, step)`` with step +1 or -1.
    substeps : int
        RK4 steps.
    kappa : int, optional
        Ambient curvature override.

    Returns
    -------
    SpinElement
        Value at the neighbouring node.

    Raises
    ------
    ValueError
        If the edge leaves the grid.
    SpinGroupError
        If renormalization fails.
    """
    node, axis, step = edge
    node = tuple(int(i) for i in node)
    if step not in (1, -1) or not 0 <= axis < patch.p:
        raise ValueError(f"Invalid edge {edge}")
    target = list(node)
    target[axis] += step
    if not all(0 <= i < n for i, n in zip(target, patch.shape)):
        raise ValueError(f"Edge {edge} leaves the grid {patch.shape}")
    coefficients = killing_coefficients(patch, kappa)
    length = step * patch.spacings[axis]
    start = length * coefficients[node][axis]
    end = length * coefficients[tuple(target)][axis]
    value = transport(phi.coeffs, start, end, patch, substeps)
    return SpinElement(Multivector(patch.signature, value))
