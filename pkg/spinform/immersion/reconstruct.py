"""The representation formula: ξ(X) = ⟨⟨X·φ, φ⟩⟩ and F = ∫ξ.

ξ is evaluated on gauge components as τ[φ]·[X]·[φ] = Ad([φ]^{-1})[X]; with the generators of
the algebra identified with the ambient coordinates it is an ambient vector. F is integrated by
the trapezoidal rule along the same sweep used for the spinor field, with F(base) = 0.
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from spinform.clifford.algebra import CliffordAlgebra
from spinform.clifford.multivector import Multivector
from spinform.core.constants import ALGEBRA_TOLERANCE, RES_CLOSEDNESS, RES_PATH
from spinform.geometry.patch import DiscretePatch
from spinform.killing.solver import SpinorField
from spinform.utils.logging import get_logger
from spinform.utils.math import cumulative_along
from spinform.utils.results import ResidualReport, evaluate_gates

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class ImmersionResult:
    """Reconstructed immersion of a patch.

    Attributes
    ----------
    positions : np.ndarray
        F per node, S + (m,) with m = N the number of generators.
    xi_samples : np.ndarray
        ξ(e_i) per node, S + (p, m).
    normal_samples : np.ndarray
        ξ(n_a) per node, S + (q, m).
    report : ResidualReport
        Residuals recorded while building the result.
    field : SpinorField, optional
        Source spinor field; None for classically generated surfaces.
    rigid_alignment : Tuple[np.ndarray, np.ndarray], optional
        (rotation, translation) applied by ``transformed``.
    """

    positions: np.ndarray
    xi_samples: np.ndarray
    normal_samples: np.ndarray
    report: ResidualReport
    field: Optional[SpinorField] = None
    rigid_alignment: Optional[Tuple[np.ndarray, np.ndarray]] = None

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.positions.shape[:-1]

    def transformed(self, Q: np.ndarray, t: np.ndarray) -> "ImmersionResult":
        """Apply x ↦ Qx + t to positions and Q to the frame samples."""
        return replace(
            self,
            positions=self.positions @ Q.T + t,
            xi_samples=self.xi_samples @ Q.T,
            normal_samples=self.normal_samples @ Q.T,
            rigid_alignment=(Q, t),
        )


def ambient_metric(patch: DiscretePatch) -> np.ndarray:
    """Diagonal ε of the ambient inner product on the generator span."""
    return np.array(patch.signature.metric, dtype=float)


def adjoint_images(algebra: CliffordAlgebra, values: np.ndarray) -> np.ndarray:
    """Row r holds Ad(φ^{-1})e_{r+1} = τ(φ)e_{r+1}φ, shape (..., N, N)."""
    basis = algebra.vectors(np.eye(algebra.n))
    right = algebra.product(basis, values[..., None, :])
    images = algebra.product(algebra.reverse(values)[..., None, :], right)
    return algebra.vector_part(images)


def xi_frames(field: SpinorField) -> np.ndarray:
    """ξ of every generator at every node, S + (N, N)."""
    return adjoint_images(field.patch.algebra, field.values)


def coordinate_xi(field: SpinorField, frames: Optional[np.ndarray] = None) -> np.ndarray:
    """ξ(∂_k) = Σ_i L[k, i] ξ(e_i), S + (p, N)."""
    patch = field.patch
    frames = xi_frames(field) if frames is None else frames
    return np.einsum("...ki,...im->...km", patch.coframe, frames[..., : patch.p, :])


def xi(
    field: SpinorField, node: Tuple[int, ...], X: Union[Multivector, Sequence[float]]
) -> np.ndarray:
    """ξ(X) = grade-1 part of τ[φ]·[X]·[φ] at a node.

    Parameters
    ----------
    field : SpinorField
        Solved or lifted field.
    node : Tuple[int, ...]
        Grid node.
    X : Multivector or sequence of float
        Grade-1 element, or its components on (e_1, ..., e_p, n_1, ..., n_q[, ν]).

    Returns
    -------
    np.ndarray
        Ambient components of ξ(X).

    Raises
    ------
    SpinGroupError
        If the field value at ``node`` is not a spin element.
    ValueError
        If X is not a vector or ξ(X) leaves grade 1.
    """
    phi = field.value(node)
    if not isinstance(X, Multivector):
        components = np.zeros(field.signature.dim)
        given = np.asarray(X, dtype=float)
        if given.ndim != 1 or given.size > components.size:
            raise ValueError(f"Expected at most {components.size} vector components")
        components[: given.size] = given
        X = Multivector.vector(field.signature, components)
    if not X.is_grade(1):
        raise ValueError("ξ takes grade-1 arguments")
    value = phi.value.reverse() * X * phi.value
    if not value.is_grade(1, tol=ALGEBRA_TOLERANCE * max(1.0, X.max_norm())):
        raise ValueError("ξ(X) left grade 1; the field value is not in the spin group")
    return value.vector_part.copy()


def plaquette_circulation(
    one_form: np.ndarray, patch: DiscretePatch, a: int, b: int
) -> np.ndarray:
    """Trapezoidal circulation of a coordinate 1-form around (a, b) plaquettes per unit area."""
    p = patch.p

    def corner(da: int, db: int, k: int) -> np.ndarray:
        index = [slice(None)] * p
        index[a] = slice(da, None if da else -1)
        index[b] = slice(db, None if db else -1)
        return one_form[tuple(index)][..., k, :]

    ha, hb = patch.spacings[a], patch.spacings[b]
    circulation = (
        0.5 * ha * (corner(0, 0, a) + corner(1, 0, a))
        + 0.5 * hb * (corner(1, 0, b) + corner(1, 1, b))
        - 0.5 * ha * (corner(0, 1, a) + corner(1, 1, a))
        - 0.5 * hb * (corner(0, 0, b) + corner(0, 1, b))
    )
    return circulation / (ha * hb)


def d_xi_residual(field: SpinorField) -> ResidualReport:
    """Discrete exterior derivative of ξ over every plaquette (closedness of ξ)."""
    patch = field.patch
    one_form = coordinate_xi(field)
    densities = [
        np.abs(plaquette_circulation(one_form, patch, a, b)).max(axis=-1).ravel()
        for a in range(patch.p)
        for b in range(a + 1, patch.p)
    ]
    report = ResidualReport()
    report.add(RES_CLOSEDNESS, np.concatenate(densities) if densities else np.zeros(1))
    return report


def integrate_one_form(
    one_form: np.ndarray,
    spacings: Sequence[float],
    base_node: Tuple[int, ...],
    order: Sequence[int],
) -> np.ndarray:
    """Trapezoidal integral of a coordinate 1-form along the sweep in ``order``.

    Parameters
    ----------
    one_form : np.ndarray
        Values ω(∂_k), shape S + (p, m).
    spacings : Sequence[float]
        Grid spacing per axis.
    base_node : Tuple[int, ...]
        Node where the integral vanishes.
    order : Sequence[int]
        Axis order of the sweep.

    Returns
    -------
    np.ndarray
        Integral of shape S + (m,).
    """
    p = len(spacings)
    result: Union[float, np.ndarray] = 0.0
    done: List[int] = []
    for axis in order:
        # Line integrals along ``axis`` start on the hyperplane swept so far.
        index = tuple(
            slice(None) if ax == axis or ax in done else base_node[ax] for ax in range(p)
        )
        component = one_form[index][..., axis, :]
        reduced_axis = sum(1 for ax in done if ax < axis)
        running = cumulative_along(component, spacings[axis], reduced_axis)
        running = running - np.take(running, [base_node[axis]], axis=reduced_axis)
        # Broadcast back over the axes that are not yet free.
        shape = [
            one_form.shape[ax] if (ax == axis or ax in done) else 1 for ax in range(p)
        ]
        result = result + running.reshape(tuple(shape) + running.shape[-1:])
        done.append(axis)
    return np.broadcast_to(result, one_form.shape[:p] + one_form.shape[-1:]).copy()


def integrate_xi(field: SpinorField) -> ImmersionResult:
    """Integrate F = ∫ξ with F(base) = 0.

    The reversed-axis sweep is integrated as well; the nodewise discrepancy is recorded as
    ``path_independence`` next to the closedness residual ``d_xi``.

    Parameters
    ----------
    field : SpinorField
        Solved or lifted field.

    Returns
    -------
    ImmersionResult
        Positions, ξ samples and a report with ``d_xi`` and ``path_independence``.
    """
    patch = field.patch
    frames = xi_frames(field)
    one_form = coordinate_xi(field, frames)
    report = d_xi_residual(field)
    _, failures = evaluate_gates(report, max(patch.spacings), patch.scene.tolerances)
    if failures:
        logger.warning(
            f"ξ is not closed on {patch.scene.name!r} "
            f"(d_xi max {report[RES_CLOSEDNESS].max:.2e}); the integral depends on the path"
        )

    canonical = integrate_one_form(one_form, patch.spacings, field.base_node, range(patch.p))
    reverse = integrate_one_form(
        one_form, patch.spacings, field.base_node, tuple(reversed(range(patch.p)))
    )
    report.add(RES_PATH, np.abs(canonical - reverse).max(axis=-1))
    p, q = patch.p, patch.q
    logger.info(f"Integrated ξ on {patch.scene.name!r}")
    return ImmersionResult(
        positions=canonical,
        xi_samples=frames[..., :p, :].copy(),
        normal_samples=frames[..., p : p + q, :].copy(),
        report=report,
        field=field,
    )
