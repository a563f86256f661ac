"""Tests for residual reports, tolerance gates and run report I/O.

Tests for:
- ResidualEntry / ResidualReport
- ToleranceGate thresholds and gate evaluation
- RunReport JSON serialization and determinism helpers
- Solver and run configuration validation
"""

import json
from pathlib import Path

import numpy as np
import pytest

from spinform.core.base import RunConfig, SolverConfig, ToleranceGate
from spinform.core.constants import (
    EXACT_RESIDUAL_TOLERANCE,
    REPORT_SCHEMA_VERSION,
    RES_ISOMETRY,
    RES_UNIT_NORM,
)
from spinform.utils.results import (
    ResidualEntry,
    ResidualReport,
    RunReport,
    evaluate_gates,
    generate_summary_report,
    load_report_json,
    report_to_json,
    save_report_json,
    strip_timestamp,
)


def _report(passed: bool = True) -> RunReport:
    residuals = ResidualReport()
    residuals.add("gauss", np.array([1e-4, -3e-4]))
    residuals.add("holonomy", 2e-3)
    return RunReport(
        scene="round_sphere",
        resolution=17,
        pipeline="verify",
        residuals=residuals,
        thresholds={"gauss": 1e-3, "holonomy": 1e-3},
        passed=passed,
        failures=[] if passed else ["holonomy"],
        metadata={"p": 2, "q": 1, "spacing": np.float64(0.1)},
    )


# =============================================================================
# ResidualReport Tests
# =============================================================================


class TestResidualReport:
    """Tests for ResidualEntry and ResidualReport."""

    def test_entry_from_values(self):
        """Test absolute max and mean."""
        entry = ResidualEntry.from_values(np.array([-2.0, 1.0, 0.0]))
        assert entry.max == 2.0
        assert entry.mean == pytest.approx(1.0)

    def test_entry_non_finite(self):
        """Test that NaN residuals become infinite."""
        entry = ResidualEntry.from_values(np.array([0.0, np.nan]))
        assert entry.max == float("inf")

    def test_entry_empty(self):
        """Test that an empty residual is zero."""
        assert ResidualEntry.from_values(np.array([])).max == 0.0

    def test_add_and_lookup(self):
        """Test add, membership and ordering."""
        report = ResidualReport()
        report.add("b", 1.0)
        report.add("a", 2.0)
        assert report.names == ["b", "a"]
        assert "a" in report
        assert report["a"].max == 2.0
        assert len(report) == 2

    def test_merge_returns_new_report(self):
        """Test that merge leaves both inputs untouched."""
        first = ResidualReport()
        first.add("x", 1.0)
        second = ResidualReport()
        second.add("x", 3.0)
        second.add("y", 0.5)
        merged = first.merge(second)
        assert merged["x"].max == 3.0
        assert "y" not in first
        assert first["x"].max == 1.0

    def test_worst(self):
        """Test the worst residual."""
        report = ResidualReport()
        assert report.worst() is None
        report.add("x", 1.0)
        report.add("y", 5.0)
        assert report.worst()[0] == "y"

    def test_dict_round_trip(self):
        """Test to_dict / from_dict."""
        report = ResidualReport()
        report.add("x", np.array([1.0, 3.0]))
        restored = ResidualReport.from_dict(report.to_dict())
        assert restored["x"] == report["x"]


# =============================================================================
# Gate Tests
# =============================================================================


class TestToleranceGate:
    """Tests for ToleranceGate and evaluate_gates."""

    def test_threshold_scales_with_spacing(self):
        """Test C h^order above the floor."""
        gate = ToleranceGate(constant=10.0, order=2, floor=1e-9)
        assert gate.threshold(0.1) == pytest.approx(0.1)

    def test_threshold_floor(self):
        """Test that the floor bounds the threshold from below."""
        gate = ToleranceGate(constant=10.0, order=2, floor=1e-3)
        assert gate.threshold(1e-4) == 1e-3

    def test_from_dict_defaults(self):
        """Test defaults for missing keys."""
        gate = ToleranceGate.from_dict({"constant": 50.0})
        assert gate.constant == 50.0
        assert gate.order == 2

    def test_evaluate_gates(self):
        """Test failures and per-residual overrides."""
        residuals = ResidualReport()
        residuals.add(RES_ISOMETRY, 0.5)
        residuals.add("killing", 0.01)
        thresholds, failures = evaluate_gates(
            residuals, 0.1, {"killing": ToleranceGate(0.0, 0, 1e-3)}
        )
        assert failures == [RES_ISOMETRY, "killing"]
        assert thresholds["killing"] == 1e-3

    def test_exact_residuals_use_fixed_tolerance(self):
        """Test that exact identities ignore the spacing."""
        residuals = ResidualReport()
        residuals.add(RES_UNIT_NORM, 1e-6)
        thresholds, failures = evaluate_gates(residuals, 0.5)
        assert thresholds[RES_UNIT_NORM] == EXACT_RESIDUAL_TOLERANCE
        assert failures == [RES_UNIT_NORM]

    def test_infinite_residual_fails(self):
        """Test that a diverged residual never passes."""
        residuals = ResidualReport()
        residuals.add("holonomy", np.array([np.inf]))
        _, failures = evaluate_gates(residuals, 1.0, default=ToleranceGate(1e9, 0, 1e9))
        assert failures == ["holonomy"]


# =============================================================================
# RunReport Tests
# =============================================================================


class TestRunReport:
    """Tests for RunReport serialization."""

    def test_to_dict(self):
        """Test the dictionary layout."""
        data = _report().to_dict()
        assert data["schema"] == REPORT_SCHEMA_VERSION
        assert data["pass"] is True
        assert data["residuals"]["gauss"]["max"] == pytest.approx(3e-4)
        assert "timestamp" in data

    def test_json_is_sorted_and_terminated(self):
        """Test deterministic JSON text."""
        text = report_to_json(_report())
        assert text.endswith("\n")
        data = json.loads(text)
        assert list(data) == sorted(data)
        assert data["metadata"]["spacing"] == 0.1

    def test_save_and_load(self, tmp_path):
        """Test a JSON round trip through a file."""
        report = _report(passed=False)
        path = save_report_json(report, tmp_path / "nested" / "run")
        assert path.suffix == ".json"
        loaded = load_report_json(path)
        assert loaded.passed is False
        assert loaded.failures == ["holonomy"]
        assert loaded.residuals["holonomy"].max == pytest.approx(2e-3)
        assert loaded.timestamp == report.timestamp

    def test_load_rejects_unknown_schema(self, tmp_path):
        """Test schema validation."""
        data = _report().to_dict()
        data["schema"] = 999
        path = Path(tmp_path) / "bad.json"
        path.write_text(json.dumps(data))
        with pytest.raises(ValueError):
            load_report_json(path)

    def test_strip_timestamp(self):
        """Test that reports differ only by timestamp."""
        a = _report().to_dict()
        b = _report().to_dict()
        b["timestamp"] = "2000-01-01T00:00:00"
        assert strip_timestamp(a) == strip_timestamp(b)

    def test_summary(self):
        """Test the text summary."""
        text = generate_summary_report([_report(), _report(passed=False)])
        assert "SPINFORM RUN SUMMARY" in text
        assert "PASS" in text
        assert "FAIL" in text
        assert "holonomy" in text


# =============================================================================
# Configuration Dataclass Tests
# =============================================================================


class TestSolverConfig:
    """Tests for SolverConfig and RunConfig."""

    def test_defaults(self):
        """Test default base node resolution."""
        config = SolverConfig()
        assert config.resolve_base_node((9, 17)) == (4, 8)

    def test_origin(self):
        """Test the origin anchor."""
        assert SolverConfig(base_node="origin").resolve_base_node((9, 9)) == (0, 0)

    def test_explicit_node_bounds(self):
        """Test that explicit nodes are validated against the grid."""
        with pytest.raises(ValueError):
            SolverConfig(base_node=(9, 0)).resolve_base_node((9, 9))

    def test_invalid_values(self):
        """Test constructor validation."""
        with pytest.raises(ValueError):
            SolverConfig(substeps=0)
        with pytest.raises(ValueError):
            SolverConfig(base_node="corner")

    def test_from_dict(self):
        """Test construction from configuration."""
        config = SolverConfig.from_dict({"substeps": 2, "base_node": [1, 2]})
        assert config.substeps == 2
        assert config.base_node == (1, 2)

    def test_run_config_validation(self):
        """Test resolution and pipeline checks."""
        with pytest.raises(ValueError):
            RunConfig(scene="flat_plane", resolution=3)
        with pytest.raises(ValueError):
            RunConfig(scene="flat_plane", pipeline="nope")
