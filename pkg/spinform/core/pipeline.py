"""End-to-end pipelines: scene → patch → spinor field → immersion → residual report.

Pipelines:

- ``reconstruct``: GCR residuals, Killing field, holonomy, F and the reference distance.
- ``verify``: ``reconstruct`` plus every identity the immersion must satisfy.
- ``weierstrass``: classical Weierstrass surface of the scene's holomorphic data, its reference
  distance and the ξ̃ identities of the spinor field.
- ``roundtrip``: ``reconstruct`` plus spinor field → (h, g) → classical surface.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from spinform.core.base import PIPELINES, SolverConfig, ToleranceGate
from spinform.core.exceptions import SceneError
from spinform.geometry.curvature import gcr_residuals
from spinform.geometry.patch import DiscretePatch, build_patch
from spinform.geometry.scenes import Scene
from spinform.immersion.hypersurface import friedrich_residual
from spinform.immersion.reconstruct import ImmersionResult, integrate_xi
from spinform.immersion.verify import (
    dirac_residual,
    gauss_map_residual,
    reference_distance,
    verify_isometry,
    verify_second_fundamental_form,
)
from spinform.killing.solver import (
    SpinorField,
    holonomy_residual,
    killing_residual,
    path_independence,
    solve_killing,
)
from spinform.spaceforms.ambient import (
    dF_consistency,
    immersion_spaceform,
    spaceform_isometry_and_II,
)
from spinform.utils.logging import get_logger
from spinform.utils.results import ResidualReport, RunReport, evaluate_gates
from spinform.weierstrass.classical import classical_weierstrass, scene_pair
from spinform.weierstrass.spinor import (
    dxi_tilde_residual,
    f_tilde_residual,
    weierstrass_roundtrip,
)

logger = get_logger(__name__)


@dataclass
class PipelineOutcome:
    """Everything a pipeline run produced.

    Attributes
    ----------
    report : RunReport
        Residuals with their gates and the pass flag.
    result : ImmersionResult, optional
        Final surface, aligned to the reference when the scene has one.
    field : SpinorField, optional
        Solved spinor field.
    """

    report: RunReport
    result: Optional[ImmersionResult] = None
    field: Optional[SpinorField] = None


def _immersion(field: SpinorField) -> ImmersionResult:
    if field.kappa == 0:
        return integrate_xi(field)
    return immersion_spaceform(field)


def _align(
    result: ImmersionResult, patch: DiscretePatch, residuals: ResidualReport
) -> Tuple[ImmersionResult, ResidualReport]:
    if not patch.scene.provider.has_embedding:
        return result, residuals
    aligned, distance = reference_distance(result, patch)
    return aligned, residuals.merge(distance)


def _reconstruct(
    patch: DiscretePatch, solver: SolverConfig
) -> Tuple[SpinorField, ImmersionResult, ResidualReport]:
    residuals = gcr_residuals(patch)
    field = solve_killing(patch, config=solver)
    residuals = residuals.merge(holonomy_residual(field))
    result = _immersion(field)
    residuals = residuals.merge(result.report)
    if field.kappa != 0:
        residuals = residuals.merge(dF_consistency(field, result))
    return field, result, residuals


def _verify(field: SpinorField, result: ImmersionResult) -> ResidualReport:
    patch = field.patch
    residuals = killing_residual(field).merge(path_independence(field))
    if field.kappa == 0:
        residuals = residuals.merge(verify_isometry(result, patch))
        residuals = residuals.merge(verify_second_fundamental_form(result, patch))
    else:
        residuals = residuals.merge(spaceform_isometry_and_II(result, patch))
    residuals = residuals.merge(dirac_residual(field))
    residuals = residuals.merge(gauss_map_residual(field, result))
    if field.kappa == 0 and patch.q == 1:
        residuals = residuals.merge(friedrich_residual(field))
    return residuals


def run_pipeline(
    scene: Scene,
    pipeline: Optional[str] = None,
    solver: Optional[SolverConfig] = None,
    default_gate: Optional[ToleranceGate] = None,
) -> PipelineOutcome:
    """Run one pipeline on a scene and gate its residuals.

    Parameters
    ----------
    scene : Scene
        Scene to process.
    pipeline : str, optional
        One of ``PIPELINES``; the scene's default when omitted.
    solver : SolverConfig, optional
        Transport settings.
    default_gate : ToleranceGate, optional
        Gate for residuals the scene does not override.

    Returns
    -------
    PipelineOutcome
        Report, final surface and spinor field.

    Raises
    ------
    SceneError
        If the pipeline does not apply to the scene.
    """
    pipeline = pipeline or scene.pipeline
    if pipeline not in PIPELINES:
        raise SceneError(f"Unknown pipeline {pipeline!r}; expected one of {PIPELINES}")
    if pipeline in ("weierstrass", "roundtrip") and (
        scene.p != 2 or scene.q != 1 or scene.kappa != 0
    ):
        raise SceneError(f"Pipeline {pipeline!r} needs a surface in R^3, not {scene.name!r}")
    solver = solver or SolverConfig()
    logger.info(f"Running {pipeline!r} on {scene.name!r} at {scene.resolution} nodes per axis")

    patch = build_patch(scene)
    field, result, residuals = _reconstruct(patch, solver)
    if pipeline == "verify":
        residuals = residuals.merge(_verify(field, result))
    elif pipeline == "weierstrass":
        base = (field.base_node[0], field.base_node[1])
        result = classical_weierstrass(scene_pair(scene), base_node=base)
        residuals = result.report
        residuals = residuals.merge(f_tilde_residual(field)).merge(dxi_tilde_residual(field))
    elif pipeline == "roundtrip":
        _, roundtrip = weierstrass_roundtrip(field, result)
        residuals = residuals.merge(roundtrip)
        residuals = residuals.merge(f_tilde_residual(field)).merge(dxi_tilde_residual(field))
    result, residuals = _align(result, patch, residuals)

    spacing = max(scene.spacings)
    thresholds, failures = evaluate_gates(residuals, spacing, scene.tolerances, default_gate)
    report = RunReport(
        scene=scene.name,
        resolution=scene.resolution,
        pipeline=pipeline,
        residuals=residuals,
        thresholds=thresholds,
        passed=not failures,
        failures=failures,
        metadata={
            "p": scene.p,
            "q": scene.q,
            "ambient": scene.ambient,
            "signature": str(scene.signature),
            "spacing": spacing,
            "base_node": list(field.base_node),
            "substeps": solver.substeps,
        },
    )
    if failures:
        logger.warning(f"{scene.name!r}: residuals over tolerance: {', '.join(failures)}")
    return PipelineOutcome(report=report, result=result, field=field)
