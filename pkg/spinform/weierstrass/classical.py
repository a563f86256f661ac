"""Classical Weierstrass representation of minimal surfaces in R^3.

A holomorphic h and a meromorphic g on a domain of C give the isotropic form
Φ = (½h(1 - g²), (i/2)h(1 + g²), hg) and the conformal minimal immersion F = Re ∫ Φ dz.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from spinform.core.constants import (
    POLE_TOLERANCE,
    RES_CLOSEDNESS,
    RES_CONFORMALITY,
    RES_ISOTROPY,
    RES_MEAN_CURVATURE,
)
from spinform.core.exceptions import PoleError, SceneError
from spinform.geometry.scenes import Scene
from spinform.immersion.reconstruct import ImmersionResult
from spinform.utils.logging import get_logger
from spinform.utils.math import grid_gradient, grid_gradients, grid_hessian
from spinform.utils.results import ResidualReport

logger = get_logger(__name__)

ComplexFunction = Callable[[np.ndarray], np.ndarray]

CATALOG = {
    "plane": (lambda z: 1.0 + 0.0 * z, lambda z: 0.0 * z),
    "enneper": (lambda z: 2.0 + 0.0 * z, lambda z: z + 0.0),
    "catenoid": (lambda z: -np.exp(-z), lambda z: -np.exp(z)),
}


@dataclass(frozen=True, eq=False)
class HolomorphicPair:
    """Weierstrass data (h, g) sampled on a rectangular grid of z = x + iy.

    Attributes
    ----------
    z : np.ndarray
        Complex node coordinates, shape (nx, ny).
    h : np.ndarray
        Holomorphic factor at the nodes.
    g : np.ndarray
        Meromorphic factor at the nodes.
    spacings : Tuple[float, float]
        Grid spacing along x and y.
    functions : Tuple[ComplexFunction, ComplexFunction], optional
        Closed forms of (h, g); edges are then integrated with Simpson's rule.
    name : str
        Label used in logs and reports.
    """

    z: np.ndarray
    h: np.ndarray
    g: np.ndarray
    spacings: Tuple[float, float]
    functions: Optional[Tuple[ComplexFunction, ComplexFunction]] = None
    name: str = ""

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.z.shape


def _grid(scene: Scene) -> np.ndarray:
    if scene.p != 2:
        raise SceneError(
            f"Weierstrass data live on surfaces, scene {scene.name!r} has p = {scene.p}"
        )
    coords = scene.grid()
    return coords[..., 0] + 1j * coords[..., 1]


def pair_from_functions(
    h: ComplexFunction, g: ComplexFunction, scene: Scene, name: str = ""
) -> HolomorphicPair:
    """Sample closed-form Weierstrass data on the grid of a scene."""
    z = _grid(scene)
    spacings = (scene.spacings[0], scene.spacings[1])
    pair = HolomorphicPair(
        z=z,
        h=np.asarray(h(z), dtype=complex) + 0.0 * z,
        g=np.asarray(g(z), dtype=complex) + 0.0 * z,
        spacings=spacings,
        functions=(h, g),
        name=name or scene.name,
    )
    weierstrass_form(pair.h, pair.g)
    return pair


def catalog_pair(name: str, scene: Scene) -> HolomorphicPair:
    """Catalog entry ``plane``, ``enneper`` or ``catenoid`` on the grid of ``scene``."""
    if name not in CATALOG:
        raise SceneError(f"Unknown Weierstrass pair {name!r}; available: {sorted(CATALOG)}")
    h, g = CATALOG[name]
    return pair_from_functions(h, g, scene, name=name)


def scene_pair(scene: Scene) -> HolomorphicPair:
    """Weierstrass data carried by the provider of ``scene``.

    Raises
    ------
    SceneError
        If the provider has no holomorphic data.
    """
    data = scene.provider.holomorphic_data()
    if data is None:
        raise SceneError(f"Scene {scene.name!r} carries no Weierstrass data")
    return pair_from_functions(data[0], data[1], scene, name=scene.name)


def weierstrass_form(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Φ = (½h(1 - g²), (i/2)h(1 + g²), hg), stacked on a trailing axis.

    Raises
    ------
    PoleError
        If hg² is unbounded at a node.
    """
    h = np.asarray(h, dtype=complex)
    g = np.asarray(g, dtype=complex)
    hg2 = h * g * g
    bad = ~np.isfinite(hg2) | (np.abs(hg2) * POLE_TOLERANCE > 1.0)
    if np.any(bad):
        node = tuple(int(i) for i in np.argwhere(bad)[0])
        raise PoleError("Weierstrass data has a pole on the grid", node=node)
    return np.stack([0.5 * (h - hg2), 0.5j * (h + hg2), h * g], axis=-1)


def _edge_integrals(pair: HolomorphicPair) -> Tuple[np.ndarray, np.ndarray]:
    """∫Φ dz over every x-edge and every y-edge, shapes (nx-1, ny, 3) and (nx, ny-1, 3)."""
    hx, hy = pair.spacings
    phi = weierstrass_form(pair.h, pair.g)
    if pair.functions is not None:
        h, g = pair.functions
        mid_x = pair.z[:-1, :] + 0.5 * hx
        mid_y = pair.z[:, :-1] + 0.5j * hy
        phi_x = weierstrass_form(h(mid_x) + 0.0 * mid_x, g(mid_x) + 0.0 * mid_x)
        phi_y = weierstrass_form(h(mid_y) + 0.0 * mid_y, g(mid_y) + 0.0 * mid_y)
        edges_x = hx / 6.0 * (phi[:-1, :] + 4.0 * phi_x + phi[1:, :])
        edges_y = 1j * hy / 6.0 * (phi[:, :-1] + 4.0 * phi_y + phi[:, 1:])
    else:
        edges_x = 0.5 * hx * (phi[:-1, :] + phi[1:, :])
        edges_y = 0.5j * hy * (phi[:, :-1] + phi[:, 1:])
    return edges_x, edges_y


def _sweep_edges(
    edges_x: np.ndarray, edges_y: np.ndarray, base_node: Tuple[int, int]
) -> np.ndarray:
    """Sum edge integrals along x through the base row, then along y from it."""
    i0, j0 = base_node
    along_x = np.concatenate([np.zeros((1,) + edges_x.shape[2:]), np.cumsum(edges_x[:, j0], 0)])
    along_x = along_x - along_x[i0]
    nx = edges_y.shape[0]
    along_y = np.concatenate(
        [np.zeros((nx, 1) + edges_y.shape[2:]), np.cumsum(edges_y, axis=1)], axis=1
    )
    along_y = along_y - along_y[:, j0 : j0 + 1]
    return along_x[:, None] + along_y


def minimal_surface_residuals(
    positions: np.ndarray, spacings: Tuple[float, float]
) -> ResidualReport:
    """Conformality and mean curvature of a surface sampled on a grid, by finite differences."""
    d = grid_gradients(positions, spacings)  # (nx, ny, 2, 3)
    fx, fy = d[..., 0, :], d[..., 1, :]
    E = np.sum(fx * fx, -1)
    G = np.sum(fy * fy, -1)
    Fm = np.sum(fx * fy, -1)
    normal = np.cross(fx, fy)
    normal /= np.linalg.norm(normal, axis=-1, keepdims=True)
    hess = grid_hessian(positions, spacings)  # (nx, ny, 2, 2, 3)
    L = np.sum(hess[..., 0, 0, :] * normal, -1)
    M = np.sum(hess[..., 0, 1, :] * normal, -1)
    N = np.sum(hess[..., 1, 1, :] * normal, -1)
    mean = (E * N - 2.0 * Fm * M + G * L) / (2.0 * (E * G - Fm**2))
    report = ResidualReport()
    report.add(RES_CONFORMALITY, np.maximum(np.abs(Fm), np.abs(E - G)) / (0.5 * (E + G)))
    report.add(RES_MEAN_CURVATURE, mean)
    return report


def isotropy_residual(pair: HolomorphicPair) -> ResidualReport:
    """|Φ·Φ| per node (zero for every pair)."""
    phi = weierstrass_form(pair.h, pair.g)
    report = ResidualReport()
    report.add(RES_ISOTROPY, np.abs(np.sum(phi * phi, axis=-1)))
    return report


def holomorphy_residual(
    samples: np.ndarray, spacings: Tuple[float, float], name: str = "holomorphy"
) -> ResidualReport:
    """|∂f/∂z̄| = ½|∂_x f + i∂_y f| on the grid, under ``name``."""
    samples = np.asarray(samples, dtype=complex)
    dbar = 0.5 * (
        grid_gradient(samples, spacings, 0) + 1j * grid_gradient(samples, spacings, 1)
    )
    report = ResidualReport()
    report.add(name, np.abs(dbar))
    return report


def classical_weierstrass(
    pair: HolomorphicPair, base_node: Optional[Tuple[int, int]] = None
) -> ImmersionResult:
    """F = Re ∫ Φ dz from ``base_node`` (grid center by default), where F vanishes.

    Parameters
    ----------
    pair : HolomorphicPair
        Weierstrass data on the grid.
    base_node : Tuple[int, int], optional
        Anchor of the integration sweep.

    Returns
    -------
    ImmersionResult
        Positions with the orthonormal frame of (Re Φ, -Im Φ) and its unit normal; the report
        holds isotropy, closedness of Φ dz, conformality and mean curvature.

    Raises
    ------
    PoleError
        If the data has a pole on the grid or on an edge midpoint.
    """
    if base_node is None:
        base_node = (pair.shape[0] // 2, pair.shape[1] // 2)
    edges_x, edges_y = _edge_integrals(pair)
    positions = _sweep_edges(edges_x, edges_y, base_node).real

    hx, hy = pair.spacings
    circulation = (edges_x[:, :-1] + edges_y[1:, :] - edges_x[:, 1:] - edges_y[:-1, :]).real
    report = isotropy_residual(pair)
    report.add(RES_CLOSEDNESS, np.abs(circulation).max(axis=-1) / (hx * hy))
    report = report.merge(minimal_surface_residuals(positions, pair.spacings))

    phi = weierstrass_form(pair.h, pair.g)
    fx, fy = phi.real, -phi.imag
    e1 = fx / np.linalg.norm(fx, axis=-1, keepdims=True)
    e2 = fy - np.sum(fy * e1, -1, keepdims=True) * e1
    e2 /= np.linalg.norm(e2, axis=-1, keepdims=True)
    normal = np.cross(e1, e2)
    logger.info(f"Integrated Weierstrass data {pair.name!r} on a {pair.shape} grid")
    return ImmersionResult(
        positions=positions,
        xi_samples=np.stack([e1, e2], axis=-2),
        normal_samples=normal[..., None, :],
        report=report,
    )
