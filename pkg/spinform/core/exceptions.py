"""Exceptions raised by the geometry pipeline."""

from typing import Optional, Tuple


class SpinformError(RuntimeError):
    """Base class for pipeline failures."""

    pass


class SignatureMismatchError(SpinformError, ValueError):
    """Raised when multivectors from different algebras are combined."""

    pass


class SpinGroupError(SpinformError):
    """Raised when an element leaves the spin group beyond tolerance."""

    pass


class SceneError(SpinformError):
    """Raised for unknown, malformed or inconsistent scenes."""

    pass


class _NodeError(SpinformError):
    """Failure attached to a grid node."""

    def __init__(self, message: str, node: Optional[Tuple[int, ...]] = None) -> None:
        self.node = node
        if node is not None:
            message = f"{message} (node {tuple(int(i) for i in node)})"
        super().__init__(message)


class DegenerateMetricError(_NodeError):
    """Raised when the metric is not positive definite at a node."""

    pass


class FrameDiscontinuityError(_NodeError):
    """Raised when a lifted frame field has an unresolvable sign flip."""

    pass


class PoleError(_NodeError):
    """Raised when Weierstrass data hits a pole or z1 vanishes on the grid."""

    pass
