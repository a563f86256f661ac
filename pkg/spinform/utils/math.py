"""Grid numerics shared by the geometry modules.

Finite differences use second-order one-sided stencils at the boundary so that every residual
computed on a grid converges at order two up to the edge.
"""

from typing import Callable, Sequence, Tuple

import numpy as np
from scipy import integrate, linalg


def grid_gradient(values: np.ndarray, spacings: Sequence[float], axis: int) -> np.ndarray:
    """Second-order finite-difference derivative of a grid field along one grid axis.

    Parameters
    ----------
    values : np.ndarray
        Field sampled on the grid; the first ``len(spacings)`` axes are grid axes.
    spacings : Sequence[float]
        Grid spacing per axis.
    axis : int
        Grid axis to differentiate along.

    Returns
    -------
    np.ndarray
        Derivative with the same shape as ``values``.
    """
    return np.gradient(values, spacings[axis], axis=axis, edge_order=2)


def grid_gradients(values: np.ndarray, spacings: Sequence[float]) -> np.ndarray:
    """All coordinate derivatives stacked on a new axis right after the grid axes."""
    p = len(spacings)
    derivs = [grid_gradient(values, spacings, k) for k in range(p)]
    return np.stack(derivs, axis=p)


def grid_second_derivative(values: np.ndarray, spacing: float, axis: int) -> np.ndarray:
    """Second derivative along one axis: centered inside, one-sided four-point at the ends."""
    v = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    if v.shape[0] < 4:
        raise ValueError("Second derivatives need at least 4 nodes per axis")
    out = np.empty_like(v)
    out[1:-1] = v[2:] - 2.0 * v[1:-1] + v[:-2]
    out[0] = 2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]
    out[-1] = 2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]
    return np.moveaxis(out / spacing**2, 0, axis)


def grid_hessian(values: np.ndarray, spacings: Sequence[float]) -> np.ndarray:
    """Second derivatives ∂_k∂_l stacked on two new axes after the grid axes."""
    p = len(spacings)
    first = [grid_gradient(values, spacings, k) for k in range(p)]
    rows = []
    for k in range(p):
        row = []
        for m in range(p):
            if k == m:
                row.append(grid_second_derivative(values, spacings[k], k))
            else:
                row.append(grid_gradient(first[m], spacings, k))
        rows.append(np.stack(row, axis=p))
    return np.stack(rows, axis=p)


def cumulative_along(values: np.ndarray, spacing: float, axis: int) -> np.ndarray:
    """Trapezoidal running integral along an axis, zero at index 0."""
    return integrate.cumulative_trapezoid(values, dx=spacing, axis=axis, initial=0)


def rk4_step(
    rhs: Callable[[float, np.ndarray], np.ndarray], t: float, h: float, y: np.ndarray
) -> np.ndarray:
    """Single classical Runge-Kutta step of size h from (t, y)."""
    k1 = h * rhs(t, y)
    k2 = h * rhs(t + 0.5 * h, y + 0.5 * k1)
    k3 = h * rhs(t + 0.5 * h, y + 0.5 * k2)
    k4 = h * rhs(t + h, y + k3)
    return y + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def procrustes_align(
    points: np.ndarray, reference: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Best proper rigid motion taking ``points`` onto ``reference`` in least squares.

    Parameters
    ----------
    points : np.ndarray
        Point cloud of shape (..., d).
    reference : np.ndarray
        Target cloud of the same shape.

    Returns
    -------
    Tuple[np.ndarray, np.ndarray, np.ndarray]
        Rotation Q (d×d, det +1), translation t and the aligned points ``points @ Q.T + t``.
    """
    x = np.asarray(points, dtype=float).reshape(-1, np.shape(points)[-1])
    y = np.asarray(reference, dtype=float).reshape(x.shape)
    x_mean, y_mean = x.mean(axis=0), y.mean(axis=0)
    xc, yc = x - x_mean, y - y_mean
    # orthogonal_procrustes gives R minimizing |xc R - yc|; restrict to det +1
    R, _ = linalg.orthogonal_procrustes(xc, yc)
    if np.linalg.det(R) < 0:
        u, _, vt = linalg.svd(xc.T @ yc)
        d = np.ones(len(x_mean))
        d[-1] = -1.0
        R = (u * d) @ vt
    Q = R.T
    t = y_mean - Q @ x_mean
    aligned = (x @ Q.T + t).reshape(np.shape(points))
    return Q, t, aligned


def refinement_ratios(errors: Sequence[float]) -> np.ndarray:
    """Ratios e_k / e_{k+1} of errors measured under successive grid halvings."""
    e = np.asarray(errors, dtype=float)
    return e[:-1] / e[1:]
