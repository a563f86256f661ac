"""Tests for immersion reconstruction and verification.

Tests for:
- ξ evaluation and integration of F = ∫ξ
- Isometry, second fundamental form and Gauss map checks
- Dirac identities and the Cl_p picture of hypersurfaces
- Alignment with reference embeddings
"""

import numpy as np
import pytest

from spinform.clifford import Multivector, adjoint_matrix, exp_bivector
from spinform.core.constants import (
    RES_CLOSEDNESS,
    RES_DIRAC,
    RES_FRIEDRICH,
    RES_GAUSS_MAP_LIFT,
    RES_GAUSS_MAP_TANGENT,
    RES_ISOMETRY,
    RES_NORMALIZED,
    RES_PATH,
    RES_REFERENCE,
    RES_SECOND_FORM,
)
from spinform.core.exceptions import SceneError
from spinform.geometry import build_patch
from spinform.immersion import (
    ShapeOperatorProvider,
    clp_field,
    d_xi_residual,
    dirac_residual,
    friedrich_residual,
    gauss_map,
    gauss_map_residual,
    hypersurface_lift,
    integrate_one_form,
    integrate_xi,
    mean_curvature_vector,
    principal_curvatures,
    reference_distance,
    verify_isometry,
    verify_second_fundamental_form,
    xi,
)
from spinform.killing import solve_killing

# =============================================================================
# Reconstruction Tests
# =============================================================================


class TestXi:
    """Tests for pointwise evaluation of ξ."""

    def test_flat_xi(self, flat_field):
        """Test ξ(e_1) = e_1 for φ ≡ 1."""
        assert np.allclose(xi(flat_field, (4, 4), [1.0, 0.0]), [1.0, 0.0, 0.0])

    def test_multivector_argument(self, sphere_field):
        """Test that ξ preserves the ambient norm of a vector."""
        X = Multivector.vector(sphere_field.signature, [0.6, 0.8, 0.0])
        assert np.linalg.norm(xi(sphere_field, (3, 12), X)) == pytest.approx(1.0)

    def test_too_many_components(self, flat_field):
        """Test component count validation."""
        with pytest.raises(ValueError):
            xi(flat_field, (0, 0), np.ones(4))

    def test_rejects_bivectors(self, flat_field):
        """Test that ξ only takes vectors."""
        with pytest.raises(ValueError):
            xi(flat_field, (0, 0), Multivector.blade(flat_field.signature, (0, 1)))


class TestIntegration:
    """Tests for integrate_one_form and integrate_xi."""

    def test_exact_for_linear_integrands(self):
        """Test that the trapezoidal sweep integrates df of f = u² + uv exactly."""
        u, v = np.meshgrid(np.linspace(0, 1, 5), np.linspace(-1, 1, 9), indexing="ij")
        one_form = np.stack([2 * u + v, u], axis=-1)[..., None]
        spacings = (0.25, 0.25)
        f = u**2 + u * v
        expected = f - f[2, 4]
        for order in ((0, 1), (1, 0)):
            result = integrate_one_form(one_form, spacings, (2, 4), order)
            assert np.allclose(result[..., 0], expected, atol=1e-14)

    def test_flat_positions(self, flat_field):
        """Test F = grid - grid[base] on the flat plane."""
        result = integrate_xi(flat_field)
        grid = flat_field.patch.coords
        assert np.allclose(result.positions[..., :2], grid - grid[4, 4], atol=1e-14)
        assert np.allclose(result.positions[..., 2], 0.0)
        assert result.report[RES_CLOSEDNESS].max < 1e-12
        assert result.report[RES_PATH].max < 1e-12
        assert result.field is flat_field

    def test_flat_d_xi(self, flat_field):
        """Test that ξ is closed on the flat plane."""
        assert d_xi_residual(flat_field)[RES_CLOSEDNESS].max < 1e-12

    def test_transformed(self, flat_field):
        """Test rigid motions of a result."""
        result = integrate_xi(flat_field)
        Q = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        t = np.array([1.0, 2.0, 3.0])
        moved = result.transformed(Q, t)
        assert np.allclose(moved.positions, result.positions @ Q.T + t)
        assert np.allclose(moved.xi_samples[4, 4, 0], [0.0, 1.0, 0.0])
        assert moved.rigid_alignment[0] is Q

    @pytest.mark.parametrize("seed", range(10))
    def test_constant_rotation_is_congruent(self, field_factory, seed):
        """Test that φ·g0 integrates to Ad(g0⁻¹) applied to the original immersion."""
        field = field_factory("round_sphere", 9)
        sig = field.signature
        c = np.random.default_rng(seed).normal(size=3)
        g0 = exp_bivector(
            Multivector.blade(sig, (0, 1), c[0])
            + Multivector.blade(sig, (0, 2), c[1])
            + Multivector.blade(sig, (1, 2), c[2])
        )
        original = integrate_xi(field).positions
        rotated = integrate_xi(field.right_multiply(g0)).positions
        M = adjoint_matrix(g0.inverse())
        assert np.allclose(rotated, original @ M.T, atol=1e-10)


# =============================================================================
# Verification Tests
# =============================================================================


class TestVerification:
    """Tests for isometry, second fundamental form and reference checks."""

    def test_sphere_reference_distance(self, sphere_field):
        """Test that the reconstructed sphere matches the unit sphere."""
        result = integrate_xi(sphere_field)
        aligned, report = reference_distance(result, sphere_field.patch)
        assert report[RES_REFERENCE].max < 5e-2
        assert aligned.rigid_alignment is not None
        radii = np.linalg.norm(aligned.positions, axis=-1)
        assert np.allclose(radii, 1.0, atol=5e-2)

    def test_sphere_isometry(self, sphere_field):
        """Test the pulled-back metric against the prescribed one."""
        patch = sphere_field.patch
        result = integrate_xi(sphere_field)
        bound = 10.0 * max(patch.spacings) ** 2
        assert verify_isometry(result, patch)[RES_ISOMETRY].max < bound
        report = verify_second_fundamental_form(result, patch)
        assert report[RES_SECOND_FORM].max < 50.0 * max(patch.spacings) ** 2

    def test_flat_isometry_exact(self, flat_field):
        """Test exact isometry on the flat plane."""
        result = integrate_xi(flat_field)
        assert verify_isometry(result, flat_field.patch)[RES_ISOMETRY].max < 1e-12

    def test_sphere_curvatures(self, sphere_field):
        """Test principal curvatures and mean curvature of the unit sphere."""
        patch = sphere_field.patch
        result = integrate_xi(sphere_field)
        inner = (slice(2, -2), slice(2, -2))
        kappas = principal_curvatures(result, patch)[inner]
        assert np.allclose(np.abs(kappas), 1.0, atol=0.1)
        H = mean_curvature_vector(result, patch)[inner]
        assert np.allclose(np.linalg.norm(H, axis=-1), 1.0, atol=0.1)

    def test_principal_curvatures_need_hypersurface(self, flat_field, patch_factory):
        """Test that principal curvatures need q = 1."""
        with pytest.raises(ValueError, match="q = 1"):
            principal_curvatures(integrate_xi(flat_field), patch_factory("flat_torus_r4", 9))

    def test_reference_needs_embedding(self, flat_field, patch_factory):
        """Test that scenes without an embedding cannot be compared."""
        with pytest.raises(SceneError):
            reference_distance(integrate_xi(flat_field), patch_factory("perturbed_sphere", 9))


class TestSpinorIdentities:
    """Tests for the Gauss map and Dirac identities."""

    def test_gauss_map_lift_exact(self, sphere_field):
        """Test χ(φ) = ξ(e_1)ξ(e_2) to rounding."""
        result = integrate_xi(sphere_field)
        report = gauss_map_residual(sphere_field, result)
        assert report[RES_GAUSS_MAP_LIFT].max < 1e-10
        assert report[RES_GAUSS_MAP_TANGENT].max < 0.1

    def test_gauss_map_is_unit_blade(self, sphere_field):
        """Test that χ is a 2-blade squaring to -1."""
        chi = gauss_map(sphere_field, (5, 9))
        assert chi.is_grade(2)
        assert (chi * chi).allclose(Multivector.scalar(sphere_field.signature, -1.0), atol=1e-10)

    def test_flat_dirac(self, flat_field):
        """Test Dφ = 0 on the flat plane."""
        assert dirac_residual(flat_field)[RES_DIRAC].max < 1e-12

    def test_sphere_dirac(self, sphere_field):
        """Test Dφ = (p/2)Hφ on the sphere to discretization accuracy."""
        assert dirac_residual(sphere_field)[RES_DIRAC].max < 0.1

    def test_space_form_dirac(self, field_factory):
        """Test the ν-term of the Dirac identity on the great sphere of S^3."""
        assert dirac_residual(field_factory("great_sphere_s3"))[RES_DIRAC].max < 0.1


# =============================================================================
# Hypersurface Tests
# =============================================================================


class TestHypersurface:
    """Tests for prescribed shape operators and the Cl_p picture."""

    def test_minus_identity_is_the_sphere(self, scene_factory, sphere_field):
        """Test that T = -Id on the round metric gives the round sphere's field."""
        scene = hypersurface_lift(scene_factory("round_sphere"), -np.eye(2))
        assert scene.reference_positions() is None
        field = solve_killing(build_patch(scene))
        assert np.allclose(field.patch.b, sphere_field.patch.b, atol=1e-12)
        assert np.allclose(field.values, sphere_field.values, atol=1e-10)

    def test_callable_operator(self, scene_factory):
        """Test a coordinate-dependent shape operator."""
        scene = hypersurface_lift(
            scene_factory("flat_plane", 9),
            lambda x: np.einsum("...,ij->...ij", x[..., 0], np.eye(2)),
        )
        patch = build_patch(scene)
        assert np.allclose(patch.b[..., 0, 0, 0], patch.coords[..., 0])

    def test_asymmetric_operator(self, scene_factory):
        """Test that T must be self-adjoint."""
        with pytest.raises(ValueError):
            hypersurface_lift(scene_factory("round_sphere", 9), np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_operator_shape(self, scene_factory):
        """Test that T must be p x p."""
        with pytest.raises(ValueError):
            hypersurface_lift(scene_factory("round_sphere", 9), np.eye(3))

    def test_needs_euclidean_hypersurface(self, scene_factory):
        """Test that space-form and codimension-two bases are rejected."""
        with pytest.raises(ValueError):
            ShapeOperatorProvider(scene_factory("great_sphere_s3", 9).provider, np.eye(2))
        with pytest.raises(ValueError):
            ShapeOperatorProvider(scene_factory("flat_torus_r4", 9).provider, np.eye(2))

    def test_friedrich(self, sphere_field, field_factory):
        """Test the Friedrich Dirac equation and normalization in Cl_2 under refinement."""
        report = friedrich_residual(sphere_field)
        fine = friedrich_residual(field_factory("round_sphere", 33))[RES_FRIEDRICH].max
        assert report[RES_NORMALIZED].max < 1e-10
        assert report[RES_FRIEDRICH].max < 0.1
        assert fine < report[RES_FRIEDRICH].max / 2.5
        assert clp_field(sphere_field).shape == (17, 17, 4)

    def test_friedrich_needs_euclidean_hypersurface(self, field_factory):
        """Test that the Cl_p picture rejects space-form fields."""
        with pytest.raises(ValueError):
            friedrich_residual(field_factory("great_sphere_s3", 9))
