"""Tests for immersions into the sphere and hyperbolic space.

Tests for:
- Ambient models of S^n and H^n
- F = ⟨⟨ν·φ, φ⟩⟩ on the quadric
- Fundamental forms inside the space form
- Hyperboloid and Poincaré ball models
"""

import numpy as np
import pytest

from spinform.core.constants import (
    RES_DF,
    RES_ISOMETRY,
    RES_LORENTZ_NORM,
    RES_PRINCIPAL,
    RES_REFERENCE,
    RES_UNIT_NORM,
)
from spinform.immersion import reference_distance
from spinform.killing import solve_killing
from spinform.spaceforms import (
    ambient_model,
    dF_consistency,
    hyperboloid_to_poincare,
    immersion_spaceform,
    poincare_to_hyperboloid,
    spaceform_isometry_and_II,
)

# =============================================================================
# Ambient Model Tests
# =============================================================================


class TestAmbientModel:
    """Tests for ambient_model."""

    def test_sphere(self):
        """Test the model of S^3."""
        model = ambient_model(1, 3)
        assert str(model.signature) == "Cl(4,0)"
        assert model.nu.tolist() == [0.0, 0.0, 0.0, 1.0]
        assert model.nu_index == 8

    def test_hyperbolic_inner_product(self):
        """Test ⟨ν, ν⟩ = -1 in the Lorentzian model."""
        model = ambient_model(-1, 3)
        assert str(model.signature) == "Cl(3,1)"
        assert model.inner(model.nu, model.nu) == -1.0

    @pytest.mark.parametrize("kappa, n", [(0, 3), (2, 3), (1, 1)])
    def test_invalid(self, kappa, n):
        """Test curvature and dimension validation."""
        with pytest.raises(ValueError):
            ambient_model(kappa, n)


# =============================================================================
# Immersion Tests
# =============================================================================


class TestSphericalImmersion:
    """Tests for surfaces in S^3."""

    def test_great_sphere_on_unit_sphere(self, field_factory):
        """Test |F| = 1 and F(base) = ν."""
        field = field_factory("great_sphere_s3")
        result = immersion_spaceform(field)
        assert result.report[RES_UNIT_NORM].max < 1e-10
        assert np.allclose(result.positions[field.base_node], [0.0, 0.0, 0.0, 1.0])

    def test_great_sphere_matches_reference(self, field_factory):
        """Test alignment with the equatorial 2-sphere."""
        field = field_factory("great_sphere_s3")
        result = immersion_spaceform(field)
        _, report = reference_distance(result, field.patch)
        assert report[RES_REFERENCE].max < 5e-2

    def test_dF_consistency(self, field_factory):
        """Test dF = ξ on the great sphere."""
        field = field_factory("great_sphere_s3")
        result = immersion_spaceform(field)
        bound = 10.0 * max(field.patch.spacings) ** 2
        assert dF_consistency(field, result)[RES_DF].max < bound

    def test_clifford_torus_forms(self, field_factory):
        """Test the metric and the principal curvatures ±1 of the Clifford torus."""
        field = field_factory("clifford_torus_s3")
        patch = field.patch
        report = spaceform_isometry_and_II(immersion_spaceform(field), patch)
        assert report[RES_ISOMETRY].max < 10.0 * max(patch.spacings) ** 2
        assert report[RES_PRINCIPAL].max < 0.2

    def test_euclidean_field_rejected(self, flat_field):
        """Test that Euclidean fields use integrate_xi instead."""
        with pytest.raises(ValueError):
            immersion_spaceform(flat_field)

    def test_kappa_mismatch(self, patch_factory):
        """Test that the field must carry the scene's κ."""
        field = solve_killing(patch_factory("great_sphere_s3", 9), kappa=0)
        with pytest.raises(ValueError):
            immersion_spaceform(field)


class TestHyperbolicImmersion:
    """Tests for surfaces in H^3."""

    def test_geodesic_plane_on_hyperboloid(self, field_factory):
        """Test ⟨F, F⟩ = -1 on the upper sheet."""
        field = field_factory("geodesic_h2_in_h3")
        result = immersion_spaceform(field)
        assert result.report[RES_LORENTZ_NORM].max < 1e-10
        assert np.allclose(result.positions[field.base_node], [0.0, 0.0, 0.0, 1.0])
        assert np.all(result.positions[..., -1] > 0)

    def test_poincare_ball(self, field_factory):
        """Test that the reconstruction maps into the open unit ball."""
        result = immersion_spaceform(field_factory("geodesic_h2_in_h3"))
        ball = hyperboloid_to_poincare(result.positions)
        assert np.all(np.linalg.norm(ball, axis=-1) < 1.0)

    def test_geodesic_plane_matches_reference(self, field_factory):
        """Test the Lorentz alignment with the hyperboloid sheet x3 = 0."""
        field = field_factory("geodesic_h2_in_h3")
        aligned, report = reference_distance(immersion_spaceform(field), field.patch)
        assert report[RES_REFERENCE].max < 5e-2
        Q, t = aligned.rigid_alignment
        eta = np.diag([1.0, 1.0, 1.0, -1.0])
        assert np.allclose(Q.T @ eta @ Q, eta, atol=1e-2)
        assert np.allclose(t, 0.0)


# =============================================================================
# Model Conversion Tests
# =============================================================================


class TestPoincare:
    """Tests for hyperboloid and Poincaré ball conversions."""

    def test_round_trip(self, rng):
        """Test ball -> hyperboloid -> ball."""
        directions = rng.normal(size=(20, 3))
        radii = rng.uniform(0.0, 0.95, size=20)
        points = directions / np.linalg.norm(directions, axis=-1, keepdims=True) * radii[:, None]
        lifted = poincare_to_hyperboloid(points)
        lorentz = np.sum(lifted[:, :3] ** 2, axis=-1) - lifted[:, 3] ** 2
        assert np.allclose(lorentz, -1.0)
        assert np.allclose(hyperboloid_to_poincare(lifted), points)

    def test_origin(self):
        """Test that the apex maps to the center of the ball."""
        assert np.allclose(hyperboloid_to_poincare(np.array([0.0, 0.0, 0.0, 1.0])), 0.0)

    def test_lower_sheet(self):
        """Test that lower-sheet points are rejected."""
        with pytest.raises(ValueError):
            hyperboloid_to_poincare(np.array([0.0, 0.0, 0.0, -1.0]))

    def test_outside_ball(self):
        """Test that points outside the ball are rejected."""
        with pytest.raises(ValueError):
            poincare_to_hyperboloid(np.array([1.0, 0.0, 0.0]))
