"""End-to-end pipeline tests on catalog scenes.

Tests for:
- Passing and failing catalog scenes
- Pipeline applicability
- Report metadata and determinism
- Refinement of the sphere reconstruction and of inconsistent holonomy
"""

import numpy as np
import pytest

from spinform.configs import load_scene
from spinform.core.base import SolverConfig, ToleranceGate
from spinform.core.constants import (
    RES_CLOSEDNESS,
    RES_DIRAC,
    RES_GAUSS,
    RES_HOLONOMY,
    RES_ISOMETRY,
    RES_REFERENCE,
    RES_ROUNDTRIP,
    RES_SECOND_FORM,
)
from spinform.core.exceptions import SceneError
from spinform.core.pipeline import run_pipeline
from spinform.geometry.patch import build_patch
from spinform.killing import holonomy_curvature_defect, plaquette_curvature, solve_killing
from spinform.utils.math import refinement_ratios
from spinform.utils.results import strip_timestamp

# =============================================================================
# Outcome Tests
# =============================================================================


class TestOutcomes:
    """Tests for pass/fail outcomes of catalog scenes."""

    def test_flat_plane_passes(self):
        """Test that the flat plane verifies with every residual under its gate."""
        outcome = run_pipeline(load_scene("flat_plane", resolution=9))
        report = outcome.report
        assert report.passed
        assert report.failures == []
        assert report.pipeline == "verify"
        assert report.residuals[RES_REFERENCE].max < 1e-12
        assert outcome.result.positions.shape == (9, 9, 3)

    def test_perturbed_sphere_fails(self):
        """Test that the inconsistent scene fails on the Gauss equation."""
        outcome = run_pipeline(load_scene("perturbed_sphere"), pipeline="reconstruct")
        assert not outcome.report.passed
        assert RES_GAUSS in outcome.report.failures
        assert outcome.report.residuals[RES_HOLONOMY].max > 1e-2

    def test_perturbed_sphere_expectation(self):
        """Test that the scene's expected flag matches the outcome."""
        scene = load_scene("perturbed_sphere")
        outcome = run_pipeline(scene, pipeline="reconstruct")
        assert outcome.report.passed is scene.expected["pass"]

    def test_default_gate_override(self):
        """Test that a zero-tolerance default gate fails inexact residuals."""
        strict = ToleranceGate(constant=0.0, order=0, floor=0.0)
        outcome = run_pipeline(
            load_scene("round_sphere", resolution=9), pipeline="reconstruct", default_gate=strict
        )
        assert RES_HOLONOMY in outcome.report.failures


class TestApplicability:
    """Tests for pipelines that only apply to some scenes."""

    def test_weierstrass_needs_r3_surface(self):
        """Test that the Weierstrass pipeline rejects the sphere in S^3."""
        with pytest.raises(SceneError):
            run_pipeline(load_scene("great_sphere_s3", resolution=9), pipeline="weierstrass")

    def test_weierstrass_needs_data(self):
        """Test that the Weierstrass pipeline needs holomorphic data."""
        with pytest.raises(SceneError):
            run_pipeline(load_scene("round_sphere", resolution=9), pipeline="weierstrass")

    def test_unknown_pipeline(self):
        """Test pipeline name validation."""
        with pytest.raises(SceneError):
            run_pipeline(load_scene("flat_plane", resolution=9), pipeline="render")

    def test_enneper_roundtrip(self):
        """Test the round trip pipeline on Enneper's surface."""
        outcome = run_pipeline(load_scene("enneper", resolution=17))
        assert outcome.report.pipeline == "roundtrip"
        assert outcome.report.residuals[RES_ROUNDTRIP].max < 1e-8


# =============================================================================
# Report Tests
# =============================================================================


class TestReports:
    """Tests for report contents and determinism."""

    def test_metadata(self):
        """Test scene and solver metadata."""
        scene = load_scene("great_sphere_s3", resolution=9)
        outcome = run_pipeline(scene, pipeline="reconstruct", solver=SolverConfig(substeps=2))
        metadata = outcome.report.metadata
        assert metadata["signature"] == "Cl(4,0)"
        assert metadata["ambient"] == "sphere"
        assert metadata["base_node"] == [4, 4]
        assert metadata["substeps"] == 2
        assert outcome.report.resolution == 9

    def test_thresholds_for_every_residual(self):
        """Test that every residual has a threshold."""
        report = run_pipeline(load_scene("flat_plane", resolution=9)).report
        assert set(report.thresholds) == set(report.residuals.names)

    def test_deterministic(self):
        """Test that repeated runs differ only by timestamp."""
        scene = load_scene("round_sphere", resolution=9)
        first = run_pipeline(scene).report.to_dict()
        second = run_pipeline(scene).report.to_dict()
        assert strip_timestamp(first) == strip_timestamp(second)


# =============================================================================
# Refinement Tests
# =============================================================================


@pytest.mark.slow
class TestRefinement:
    """Tests for convergence under grid refinement."""

    def test_sphere_reference_distance_converges(self):
        """Test second-order decay of the distance to the unit sphere."""
        distances = [
            run_pipeline(load_scene("round_sphere", resolution=n), pipeline="reconstruct")
            .report.residuals[RES_REFERENCE]
            .max
            for n in (17, 33, 65)
        ]
        assert np.all(refinement_ratios(distances) > 2.5)

    @pytest.fixture(scope="class")
    def sphere_reports(self):
        """Verify-pipeline residuals of the sphere at 17, 33 and 65 nodes."""
        return [
            run_pipeline(load_scene("round_sphere", resolution=n), pipeline="verify")
            .report.residuals
            for n in (17, 33, 65)
        ]

    @pytest.mark.parametrize(
        "name", [RES_ISOMETRY, RES_SECOND_FORM, RES_CLOSEDNESS, RES_DIRAC, RES_HOLONOMY]
    )
    def test_sphere_residuals_converge(self, sphere_reports, name):
        """Test second-order decay of a reconstruction residual and its size at 65 nodes."""
        values = [residuals[name].max for residuals in sphere_reports]
        ratios = refinement_ratios(values)
        assert values[-1] < 1e-3
        assert ratios[0] > 2.5
        assert 3.0 <= ratios[1] <= 5.0

    def test_perturbed_sphere_holonomy_matches_curvature(self):
        """Test that every plaquette's holonomy density is within 10% of Ω."""
        field = solve_killing(build_patch(load_scene("perturbed_sphere", resolution=65)))
        omega = np.abs(plaquette_curvature(field.patch, 0, 1, field.kappa)).max(axis=-1)
        defect = holonomy_curvature_defect(field)[(0, 1)]
        assert omega.max() > 1e-2
        assert np.all(defect < 0.1 * omega)
