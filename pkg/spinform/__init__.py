"""Spinorial representation of submanifolds.

This package reconstructs isometric immersions of Riemannian patches into R^n, S^n and H^n
from their Gauss data through a generalized Killing spinor field:
- Clifford algebra kernels and the spin group
- Discrete patches with frames, connections and GCR residuals
- Killing spinor transport and holonomy diagnostics
- The representation formula, Gauss map and verification residuals
- Space-form immersions and the Weierstrass representation of minimal surfaces
"""

__version__ = "0.1.0"

from spinform.core.constants import DEFAULT_RESOLUTION, MIN_RESOLUTION, REPORT_SCHEMA_VERSION
from spinform.core.pipeline import PipelineOutcome, run_pipeline

__all__ = [
    "DEFAULT_RESOLUTION",
    "MIN_RESOLUTION",
    "REPORT_SCHEMA_VERSION",
    "PipelineOutcome",
    "run_pipeline",
]
