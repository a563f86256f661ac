"""Tests for OBJ mesh export."""

import json

import numpy as np
import pytest

from spinform.immersion import obj_text, write_obj


class TestObjText:
    """Tests for the OBJ text layout."""

    def test_single_quad(self):
        """Test vertex numbering and the face of a 2x2 grid."""
        positions = np.array(
            [[[0.0, 0.0, 0.0], [0.0, 1.0, 0.0]], [[1.0, 0.0, 0.0], [1.0, 1.0, 0.5]]]
        )
        lines = obj_text(positions).splitlines()
        assert lines[:4] == ["v 0 0 0", "v 0 1 0", "v 1 0 0", "v 1 1 0.5"]
        assert lines[4:] == ["f 1 3 4 2"]

    def test_face_count(self):
        """Test one quad per grid cell."""
        text = obj_text(np.zeros((3, 4, 3)))
        assert sum(line.startswith("f ") for line in text.splitlines()) == 6

    def test_planar_curves_padded(self):
        """Test that two-dimensional positions get a zero z coordinate."""
        text = obj_text(np.ones((2, 2, 2)))
        assert text.splitlines()[0] == "v 1 1 0"

    def test_needs_surface_grid(self):
        """Test that only 2-dimensional grids are exported."""
        with pytest.raises(ValueError):
            obj_text(np.zeros((4, 3)))


class TestWriteObj:
    """Tests for mesh files and sidecars."""

    def test_suffix_appended(self, tmp_path):
        """Test that .obj is added to the path."""
        path = write_obj(tmp_path / "mesh", np.zeros((2, 2, 3)))
        assert path.name == "mesh.obj"
        assert path.exists()
        assert not path.with_suffix(".json").exists()

    def test_four_dimensional_sidecar(self, tmp_path):
        """Test that coordinates beyond three go to a JSON sidecar."""
        positions = np.arange(16, dtype=float).reshape(2, 2, 4)
        path = write_obj(tmp_path / "sub" / "torus.obj", positions, {"scene": "flat_torus_r4"})
        sidecar = json.loads(path.with_suffix(".json").read_text())
        assert sidecar["shape"] == [2, 2, 4]
        assert sidecar["positions"][3] == [12.0, 13.0, 14.0, 15.0]
        assert sidecar["scene"] == "flat_torus_r4"
