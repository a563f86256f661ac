"""Tests for the scene catalog, scene files and Scene construction."""

import json

import pytest

from spinform.configs import (
    _deep_merge,
    default_gate,
    list_scenes,
    load_base_config,
    load_scene,
    load_scene_config,
    load_scene_file,
)
from spinform.core.exceptions import SceneError
from spinform.geometry.scenes import PROVIDERS, Scene, make_provider

CATALOG = [
    "catenoid",
    "clifford_torus_s3",
    "cylinder",
    "enneper",
    "flat_plane",
    "flat_torus_r4",
    "geodesic_h2_in_h3",
    "graph_surface",
    "great_sphere_s3",
    "perturbed_sphere",
    "round_hypersphere",
    "round_sphere",
]


# =============================================================================
# Catalog Tests
# =============================================================================


class TestCatalog:
    """Tests for the built-in scene catalog."""

    def test_list_scenes(self):
        """Test that every catalog scene is listed."""
        assert list_scenes() == CATALOG

    def test_base_config(self):
        """Test the shared defaults."""
        base = load_base_config()
        assert base["solver"]["substeps"] == 4
        assert default_gate(base).constant == 10.0

    @pytest.mark.parametrize("name", CATALOG)
    def test_catalog_scene_builds(self, name):
        """Test that each catalog entry builds a consistent scene."""
        config = load_scene_config(name)
        scene = Scene.from_config(config)
        assert scene.name == name
        assert scene.p == config["geometry"]["p"]
        assert scene.q == config["geometry"]["q"]
        assert scene.ambient == config["geometry"]["ambient"]
        assert scene.provider.name in PROVIDERS

    def test_scene_inherits_base_tolerances(self):
        """Test that base tolerances are merged into scenes."""
        scene = load_scene("round_sphere")
        assert scene.tolerances["second_fundamental_form"].constant == 50.0

    def test_resolution_override(self):
        """Test the resolution argument."""
        scene = load_scene("flat_plane", resolution=9)
        assert scene.resolution == 9
        assert scene.spacings == (0.25, 0.25)

    def test_unknown_scene(self):
        """Test that unknown names raise FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_scene("no_such_scene")

    def test_expected_failure_flag(self):
        """Test that the inconsistent scene is marked as failing."""
        assert load_scene("perturbed_sphere").expected["pass"] is False


# =============================================================================
# Scene File Tests
# =============================================================================


class TestSceneFiles:
    """Tests for JSON and YAML scene descriptions."""

    def test_flat_json_layout(self, tmp_path):
        """Test the flat scene-file layout."""
        path = tmp_path / "sphere.json"
        path.write_text(
            json.dumps(
                {
                    "name": "my_sphere",
                    "p": 2,
                    "q": 1,
                    "ambient": "euclidean",
                    "domain": [[0.8, 2.2], [-0.5, 0.5]],
                    "resolution": 13,
                    "provider": {"name": "round_sphere", "parameters": {"r": 2.0}},
                }
            )
        )
        scene = load_scene(str(path))
        assert scene.name == "my_sphere"
        assert scene.resolution == 13
        assert scene.provider.r == 2.0
        assert scene.domain == ((0.8, 2.2), (-0.5, 0.5))

    def test_yaml_file(self, tmp_path):
        """Test a YAML scene with a provider given by name only."""
        path = tmp_path / "plane.yaml"
        path.write_text("name: plane\nprovider: flat_plane\nresolution: 9\n")
        scene = load_scene(str(path))
        assert scene.provider.name == "flat_plane"
        assert scene.shape == (9, 9)

    def test_missing_file(self, tmp_path):
        """Test that missing files raise FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_scene_file(tmp_path / "absent.yaml")

    def test_malformed_yaml(self, tmp_path):
        """Test that unparsable files raise SceneError."""
        path = tmp_path / "bad.yaml"
        path.write_text("name: [unclosed\n")
        with pytest.raises(SceneError):
            load_scene_file(path)

    def test_non_mapping(self, tmp_path):
        """Test that a list is not a scene."""
        path = tmp_path / "list.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(SceneError):
            load_scene_file(path)

    def test_declared_dimension_mismatch(self, tmp_path):
        """Test that declared p must match the provider."""
        path = tmp_path / "wrong.json"
        path.write_text(json.dumps({"name": "wrong", "p": 3, "provider": "round_sphere"}))
        with pytest.raises(SceneError):
            load_scene(str(path))

    def test_unknown_provider(self, tmp_path):
        """Test that unknown providers raise SceneError."""
        path = tmp_path / "unknown.json"
        path.write_text(json.dumps({"name": "x", "provider": "moebius_band"}))
        with pytest.raises(SceneError):
            load_scene(str(path))

    def test_missing_name(self):
        """Test that scenes need a name."""
        with pytest.raises(SceneError):
            Scene.from_config({"provider": "flat_plane"})


# =============================================================================
# Scene and Provider Tests
# =============================================================================


class TestScene:
    """Tests for Scene validation and helpers."""

    def test_bad_provider_parameters(self):
        """Test that unexpected provider parameters raise SceneError."""
        with pytest.raises(SceneError):
            make_provider("round_sphere", {"radius": 1.0})

    def test_negative_radius(self):
        """Test provider parameter validation."""
        with pytest.raises(SceneError):
            make_provider("cylinder", {"r": -1.0})

    def test_resolution_too_low(self):
        """Test the minimal resolution."""
        with pytest.raises(SceneError):
            Scene(name="x", provider=make_provider("flat_plane"), resolution=3)

    def test_empty_domain(self):
        """Test that a domain axis must have positive length."""
        with pytest.raises(SceneError):
            Scene(name="x", provider=make_provider("flat_plane"), domain=((0, 0), (0, 1)))

    def test_signatures(self):
        """Test the algebra of each ambient."""
        assert str(load_scene("round_sphere").signature) == "Cl(3,0)"
        assert str(load_scene("great_sphere_s3").signature) == "Cl(4,0)"
        assert str(load_scene("geodesic_h2_in_h3").signature) == "Cl(3,1)"
        assert str(load_scene("flat_torus_r4").signature) == "Cl(4,0)"

    def test_grid(self):
        """Test grid coordinates."""
        scene = load_scene("flat_plane", resolution=9)
        grid = scene.grid()
        assert grid.shape == (9, 9, 2)
        assert grid[0, 0].tolist() == [-1.0, -1.0]
        assert grid[8, 0].tolist() == [1.0, -1.0]

    def test_reference_positions(self):
        """Test that providers without an embedding return None."""
        assert load_scene("perturbed_sphere", resolution=9).reference_positions() is None
        assert load_scene("flat_plane", resolution=9).reference_positions().shape == (9, 9, 3)

    def test_summary(self):
        """Test the catalog summary."""
        summary = load_scene("enneper").summary()
        assert summary["p"] == 2
        assert summary["ambient"] == "euclidean"
        assert "Enneper" in summary["oracle"]


class TestDeepMerge:
    """Tests for configuration merging."""

    def test_nested_override(self):
        """Test that nested keys merge and scalars override."""
        merged = _deep_merge({"a": {"x": 1, "y": 2}, "b": 1}, {"a": {"y": 3}, "b": 5})
        assert merged == {"a": {"x": 1, "y": 3}, "b": 5}
