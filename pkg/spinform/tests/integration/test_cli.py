"""Tests for the spinform command-line interface."""

import json

import pytest

from spinform.scripts.run_scenes import (
    EXIT_INPUT,
    EXIT_OK,
    EXIT_TOLERANCE,
    build_parser,
    catalog_listing,
    main,
)


class TestRunCommand:
    """Tests for ``spinform run``."""

    def test_flat_plane_json(self, capsys):
        """Test a passing run printed as JSON."""
        code = main(["run", "flat_plane", "-n", "9", "--no-save", "--json"])
        assert code == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["scene"] == "flat_plane"
        assert data["resolution"] == 9
        assert data["pass"] is True

    def test_summary_output(self, capsys):
        """Test the text summary."""
        assert main(["run", "flat_plane", "-n", "9", "--no-save"]) == EXIT_OK
        assert "SPINFORM RUN SUMMARY" in capsys.readouterr().out

    def test_tolerance_failure(self):
        """Test exit status 1 for an inconsistent scene."""
        code = main(["run", "perturbed_sphere", "-p", "reconstruct", "--no-save"])
        assert code == EXIT_TOLERANCE

    def test_fixed_tolerance_override(self, capsys):
        """Test that -t gates one residual at a fixed value."""
        argv = ["run", "round_sphere", "-n", "9", "-p", "reconstruct", "--no-save", "--json"]
        code = main(argv + ["-t", "holonomy=0"])
        assert code == EXIT_TOLERANCE
        data = json.loads(capsys.readouterr().out)
        assert "holonomy" in data["failures"]
        assert data["thresholds"]["holonomy"] == 0.0

    def test_unknown_scene(self, capsys):
        """Test exit status 2 for unknown scenes."""
        assert main(["run", "no_such_scene", "--no-save"]) == EXIT_INPUT
        assert "unknown scene" in capsys.readouterr().err

    def test_resolution_too_low(self):
        """Test exit status 2 for invalid resolutions."""
        assert main(["run", "flat_plane", "-n", "3", "--no-save"]) == EXIT_INPUT

    def test_inapplicable_pipeline(self):
        """Test exit status 2 when the pipeline does not fit the scene."""
        code = main(["run", "round_sphere", "-n", "9", "-p", "weierstrass", "--no-save"])
        assert code == EXIT_INPUT

    def test_bad_tolerance_syntax(self):
        """Test that malformed -t values are argparse errors."""
        with pytest.raises(SystemExit):
            main(["run", "flat_plane", "-t", "gauss"])

    def test_output_files(self, tmp_path):
        """Test explicit report and mesh paths."""
        report = tmp_path / "out" / "plane.json"
        mesh = tmp_path / "out" / "plane.obj"
        code = main(
            ["run", "flat_plane", "-n", "9", "--report", str(report), "--mesh", str(mesh)]
        )
        assert code == EXIT_OK
        assert json.loads(report.read_text())["pipeline"] == "verify"
        assert mesh.read_text().startswith("v ")

    def test_default_output_dir(self, tmp_path):
        """Test default file names under the output directory."""
        code = main(["run", "flat_plane", "-n", "9", "-o", str(tmp_path)])
        assert code == EXIT_OK
        assert (tmp_path / "flat_plane_9_verify.json").exists()
        assert (tmp_path / "flat_plane_9_verify.obj").exists()

    def test_poincare_mesh(self, tmp_path):
        """Test hyperbolic meshes in the Poincaré ball."""
        mesh = tmp_path / "h2.obj"
        main(
            [
                "run",
                "geodesic_h2_in_h3",
                "-n",
                "9",
                "-p",
                "reconstruct",
                "--no-save",
                "--mesh",
                str(mesh),
                "--poincare",
            ]
        )
        assert mesh.exists()
        assert not mesh.with_suffix(".json").exists()


class TestScenesCommand:
    """Tests for ``spinform scenes``."""

    def test_json_listing(self, capsys):
        """Test the machine-readable catalog."""
        assert main(["scenes", "--json"]) == EXIT_OK
        listing = json.loads(capsys.readouterr().out)
        assert len(listing) == 12
        assert {entry["name"] for entry in listing} >= {"flat_plane", "enneper"}

    def test_text_listing(self, capsys):
        """Test the human-readable catalog."""
        assert main(["scenes"]) == EXIT_OK
        assert "round_sphere" in capsys.readouterr().out

    def test_catalog_listing(self):
        """Test listing entries."""
        entry = {e["name"]: e for e in catalog_listing()}["geodesic_h2_in_h3"]
        assert entry["ambient"] == "hyperbolic"

    def test_command_required(self):
        """Test that a subcommand is required."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])
