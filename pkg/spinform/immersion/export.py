"""OBJ mesh export for reconstructed surfaces."""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from spinform.utils.logging import get_logger

logger = get_logger(__name__)


def obj_text(positions: np.ndarray) -> str:
    """ASCII OBJ with one vertex per node and one quad per grid cell.

    Vertices are numbered row-major; only the first three coordinates are written.
    """
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 3:
        raise ValueError(f"OBJ export needs a 2-dimensional grid, got shape {positions.shape}")
    rows, cols, dim = positions.shape
    xyz = np.zeros((rows * cols, 3))
    xyz[:, : min(dim, 3)] = positions.reshape(rows * cols, dim)[:, :3]
    lines = [f"v {x:.12g} {y:.12g} {z:.12g}" for x, y, z in xyz]
    for i in range(rows - 1):
        for j in range(cols - 1):
            a = i * cols + j + 1
            lines.append(f"f {a} {a + cols} {a + cols + 1} {a + 1}")
    return "\n".join(lines) + "\n"


def write_obj(
    path: Union[str, Path],
    positions: np.ndarray,
    metadata: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write a surface mesh; ambient dimensions beyond three go to a sidecar JSON.

    Parameters
    ----------
    path : str or Path
        Output path, ``.obj`` appended if missing.
    positions : np.ndarray
        Node positions of shape (rows, cols, m).
    metadata : dict, optional
        Extra fields stored in the sidecar.

    Returns
    -------
    Path
        Path of the OBJ file.
    """
    path = Path(path)
    if path.suffix != ".obj":
        path = path.with_suffix(".obj")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as f:
        f.write(obj_text(positions))
    positions = np.asarray(positions, dtype=float)
    if positions.shape[-1] > 3:
        sidecar = path.with_suffix(".json")
        data = {
            "shape": list(positions.shape),
            "positions": positions.reshape(-1, positions.shape[-1]).tolist(),
            **(metadata or {}),
        }
        with open(sidecar, "w", newline="\n") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(f"Full {positions.shape[-1]}-dimensional coordinates written to {sidecar}")
    logger.info(f"Mesh written to {path}")
    return path
