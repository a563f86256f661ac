"""Configuration dataclasses for solver runs and tolerance gates."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from spinform.core.constants import (
    DEFAULT_GATE_CONSTANT,
    DEFAULT_GATE_FLOOR,
    DEFAULT_GATE_ORDER,
    DEFAULT_SUBSTEPS,
    MIN_RESOLUTION,
    RENORMALIZATION_TOLERANCE,
)

PIPELINES: Tuple[str, ...] = ("reconstruct", "verify", "weierstrass", "roundtrip")


@dataclass
class SolverConfig:
    """Settings for the Killing spinor transport.

    Attributes
    ----------
    substeps : int
        RK4 substeps per grid edge.
    base_node : Union[str, Tuple[int, ...]]
        Integration anchor: ``"center"``, ``"origin"`` or an explicit node index.
    renormalization_tolerance : float
        Largest non-scalar part of τ(g)g tolerated after an edge step.
    """

    substeps: int = DEFAULT_SUBSTEPS
    base_node: Union[str, Tuple[int, ...]] = "center"
    renormalization_tolerance: float = RENORMALIZATION_TOLERANCE

    def __post_init__(self) -> None:
        if self.substeps < 1:
            raise ValueError(f"substeps must be positive, got {self.substeps}")
        if self.renormalization_tolerance <= 0:
            raise ValueError("renormalization_tolerance must be positive")
        if isinstance(self.base_node, str) and self.base_node not in ("center", "origin"):
            raise ValueError(f"Unknown base_node {self.base_node!r}")

    def resolve_base_node(self, shape: Tuple[int, ...]) -> Tuple[int, ...]:
        """Return the anchor node index for a grid of the given shape."""
        if self.base_node == "center":
            return tuple(n // 2 for n in shape)
        if self.base_node == "origin":
            return tuple(0 for _ in shape)
        node = tuple(int(i) for i in self.base_node)
        if len(node) != len(shape) or any(not 0 <= i < n for i, n in zip(node, shape)):
            raise ValueError(f"base_node {node} outside grid of shape {shape}")
        return node

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SolverConfig":
        base_node = data.get("base_node", "center")
        node: Union[str, Tuple[int, ...]]
        if isinstance(base_node, str):
            node = base_node
        else:
            node = tuple(int(i) for i in base_node)
        return cls(
            substeps=int(data.get("substeps", DEFAULT_SUBSTEPS)),
            base_node=node,
            renormalization_tolerance=float(
                data.get("renormalization_tolerance", RENORMALIZATION_TOLERANCE)
            ),
        )


@dataclass(frozen=True)
class ToleranceGate:
    """Pass/fail threshold for one residual.

    The threshold scales with the grid spacing as ``constant * h**order`` and never drops
    below ``floor``.

    Attributes
    ----------
    constant : float
        Discretization constant C.
    order : int
        Expected convergence order (0 for exact identities).
    floor : float
        Absolute lower bound on the threshold.
    """

    constant: float = DEFAULT_GATE_CONSTANT
    order: int = DEFAULT_GATE_ORDER
    floor: float = DEFAULT_GATE_FLOOR

    def threshold(self, spacing: float) -> float:
        return max(self.floor, self.constant * spacing**self.order)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ToleranceGate":
        return cls(
            constant=float(data.get("constant", DEFAULT_GATE_CONSTANT)),
            order=int(data.get("order", DEFAULT_GATE_ORDER)),
            floor=float(data.get("floor", DEFAULT_GATE_FLOOR)),
        )


@dataclass
class RunConfig:
    """One CLI run.

    Attributes
    ----------
    scene : str
        Catalog scene name or path to a JSON/YAML scene file.
    resolution : Optional[int]
        Nodes per axis; None keeps the scene default.
    mesh_path : Optional[Path]
        OBJ output path (p = 2 only).
    report_path : Optional[Path]
        JSON report output path.
    pipeline : Optional[str]
        One of ``PIPELINES``; None keeps the scene default.
    tolerances : Dict[str, ToleranceGate]
        Per-residual gate overrides.
    """

    scene: str
    resolution: Optional[int] = None
    mesh_path: Optional[Path] = None
    report_path: Optional[Path] = None
    pipeline: Optional[str] = None
    tolerances: Dict[str, ToleranceGate] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.resolution is not None and self.resolution < MIN_RESOLUTION:
            raise ValueError(
                f"resolution must be at least {MIN_RESOLUTION} per axis, got {self.resolution}"
            )
        if self.pipeline is not None and self.pipeline not in PIPELINES:
            raise ValueError(f"Unknown pipeline {self.pipeline!r}; expected one of {PIPELINES}")
