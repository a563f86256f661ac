"""Spin group operations: products, pairing, adjoint action, exponential and lifting.

Conventions
-----------
Generators square to minus their metric norm, so in Euclidean signature (e_ie_j)^2 = -1 and

    Ad(exp(θ/2 e_ie_j)) e_i = cos θ e_i + sin θ e_j      (i < j)

The pairing is ⟨⟨φ, ψ⟩⟩ = τ(ψ)φ, hence brackets(e_i g, g) = Ad(g^{-1}) e_i.
"""

from functools import lru_cache
from typing import List, Tuple, Union

import numpy as np

from spinform.clifford.algebra import Signature, check_same_signature, get_algebra
from spinform.clifford.multivector import Multivector, SpinElement
from spinform.core.constants import (
    EXP_SCALE_TARGET,
    EXP_TAYLOR_TERMS,
    MAX_GENERATORS,
    SPIN_TOLERANCE,
)
from spinform.core.exceptions import SpinGroupError

SpinLike = Union[SpinElement, Multivector]


def _as_spin(g: SpinLike) -> SpinElement:
    return g if isinstance(g, SpinElement) else SpinElement(g)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    """Clifford product a·b.

    Raises
    ------
    SignatureMismatchError
        If ``a`` and ``b`` live in different algebras.
    """
    return a * b


def reversion(a: Multivector) -> Multivector:
    """Anti-automorphism τ reversing the order of generators in every blade."""
    return a.reverse()


def brackets(phi: Multivector, psi: Multivector) -> Multivector:
    """Clifford-valued pairing ⟨⟨φ, ψ⟩⟩ = τ(ψ)·φ."""
    check_same_signature(phi.signature, psi.signature)
    return psi.reverse() * phi


def adjoint(g: SpinLike, v: Multivector) -> Multivector:
    """Adjoint action g v g^{-1} = g v τ(g) on a vector.

    Raises
    ------
    ValueError
        If ``v`` is not grade 1.
    SpinGroupError
        If ``g`` is not a spin element.
    """
    spin = _as_spin(g)
    check_same_signature(spin.signature, v.signature)
    if not v.is_grade(1):
        raise ValueError("adjoint acts on grade-1 multivectors only")
    return (spin.value * v * spin.value.reverse()).grade(1)


def adjoint_matrix(g: SpinLike) -> np.ndarray:
    """Matrix of Ad(g) on the generator span; column j is Ad(g)e_{j+1}."""
    spin = _as_spin(g)
    algebra = spin.value.algebra
    n = spin.signature.dim
    basis = algebra.vectors(np.eye(n))
    left = algebra.product(spin.coeffs, basis)
    images = algebra.product(left, algebra.reverse(spin.coeffs))
    return np.asarray(algebra.vector_part(images)).T


def exp_bivector(b: Multivector) -> SpinElement:
    """Exponential of a bivector by scaling and squaring.

    The bivector is scaled by 2^-s until its ℓ1 coefficient norm (which bounds the max-norm
    and is submultiplicative under the Clifford product) is at most 0.5, the Taylor series is
    summed, and the result squared s times.

    Parameters
    ----------
    b : Multivector
        Grade-2 element.

    Returns
    -------
    SpinElement
        exp(b).

    Raises
    ------
    ValueError
        If ``b`` is not a bivector.

    Examples
    --------
    >>> sig = Signature.euclidean(3)
    >>> g = exp_bivector(Multivector.blade(sig, (0, 1), 0.25 * np.pi))
    >>> round(g.value.scalar_part, 6)
    0.707107
    """
    if not b.is_grade(2):
        raise ValueError("exp_bivector expects a grade-2 multivector")
    algebra = b.algebra
    norm = b.l1_norm()
    squarings = 0
    if norm > EXP_SCALE_TARGET:
        squarings = int(np.ceil(np.log2(norm / EXP_SCALE_TARGET)))
    x = b.coeffs / 2.0**squarings
    result = np.zeros(algebra.size)
    result[0] = 1.0
    term = result.copy()
    for k in range(1, EXP_TAYLOR_TERMS + 1):
        term = algebra.sparse_product(term, x) / k
        result = result + term
        if np.abs(term).max() < 1e-18:
            break
    for _ in range(squarings):
        result = algebra.sparse_product(result, result)
    return SpinElement(Multivector(b.signature, result))


def _rotor(signature: Signature, i: int, j: int, theta: float) -> SpinElement:
    """exp(θ/2 e_ie_j), whose adjoint rotates e_i towards e_j by θ."""
    coeffs = np.zeros(signature.size)
    coeffs[0] = np.cos(theta / 2.0)
    coeffs[(1 << i) | (1 << j)] = np.sin(theta / 2.0)
    return SpinElement(Multivector(signature, coeffs))


def givens_angles(R: np.ndarray) -> Tuple[List[Tuple[int, int, float]], np.ndarray]:
    """Factor a rotation into planar rotations.

    Returns the factors ``(i, j, θ)`` in product order, R = G_1 G_2 ... G_m D, and the
    residual D (the identity for a proper rotation).
    """
    M = np.array(R, dtype=float)
    n = M.shape[0]
    factors: List[Tuple[int, int, float]] = []
    for col in range(n - 1):
        for row in range(col + 1, n):
            a, b = M[col, col], M[row, col]
            if abs(b) < 1e-15 and a >= 0:
                continue
            theta = float(np.arctan2(b, a))
            c, s = np.cos(theta), np.sin(theta)
            top, bottom = M[col].copy(), M[row].copy()
            M[col] = c * top + s * bottom
            M[row] = -s * top + c * bottom
            factors.append((col, row, theta))
    return factors, M


def spin_lift(R: np.ndarray, signature: Union[Signature, None] = None) -> SpinElement:
    """Spin element g with adjoint_matrix(g) = R, up to global sign.

    Parameters
    ----------
    R : np.ndarray
        Proper orthogonal N×N matrix.
    signature : Signature, optional
        Euclidean signature of dimension N (default).

    Returns
    -------
    SpinElement
        Product of the lifts of the Givens factors of R, each with half-angle in (-π/2, π/2].

    Raises
    ------
    ValueError
        If R is not square orthogonal with determinant +1, or the signature is not Euclidean.
    """
    R = np.asarray(R, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError(f"spin_lift expects a square matrix, got shape {R.shape}")
    n = R.shape[0]
    signature = signature or Signature.euclidean(n)
    if signature.n_minus != 0:
        raise ValueError("spin_lift supports Euclidean signatures only")
    if signature.dim != n:
        raise ValueError(f"Matrix of size {n} does not match {signature}")
    if not np.allclose(R.T @ R, np.eye(n), atol=SPIN_TOLERANCE):
        raise ValueError("spin_lift expects an orthogonal matrix")
    if np.linalg.det(R) <= 0:
        raise ValueError("spin_lift expects an orientation-preserving matrix (det +1)")

    factors, residual = givens_angles(R)
    if not np.allclose(residual, np.eye(n), atol=1e-8):
        raise SpinGroupError("Givens factorization did not reduce to the identity")
    result = SpinElement.identity(signature)
    for i, j, theta in factors:
        result = result * _rotor(signature, i, j, theta)
    return result


def graded_tensor_embed(a: Multivector, b: Multivector) -> Multivector:
    """Graded tensor product embedding Cl_p ⊗ Cl_q → Cl_{p+q}.

    Generators of ``a`` keep their index, generators of ``b`` are shifted by p, and a ⊗ b maps
    to the product a·b.

    Raises
    ------
    ValueError
        If p + q exceeds the supported generator count or ``a`` is not Euclidean.
    """
    sig_a, sig_b = a.signature, b.signature
    if sig_a.n_minus != 0:
        raise ValueError("The first factor of graded_tensor_embed must be Euclidean")
    if sig_a.dim + sig_b.dim > MAX_GENERATORS:
        raise ValueError(
            f"Embedding {sig_a} ⊗ {sig_b} needs more than {MAX_GENERATORS} generators"
        )
    target = Signature(sig_a.n_plus + sig_b.n_plus, sig_b.n_minus)
    # blade A | (B << p) is stored at index B * 2^p + A
    return Multivector(target, np.outer(b.coeffs, a.coeffs).ravel())


@lru_cache(maxsize=None)
def _cl_p_blade_images(p: int) -> Tuple[np.ndarray, np.ndarray]:
    """Target blade index and sign of each Cl_p blade under e_i ↦ e_i e_{p+1}."""
    source = Signature.euclidean(p)
    target = Signature.euclidean(p + 1)
    algebra = get_algebra(target)
    indices = np.zeros(source.size, dtype=np.int64)
    signs = np.zeros(source.size)
    for blade in range(source.size):
        coeffs = np.zeros(target.size)
        coeffs[0] = 1.0
        for i in range(p):
            if blade >> i & 1:
                gen = np.zeros(target.size)
                gen[(1 << i) | (1 << p)] = 1.0
                coeffs = algebra.sparse_product(coeffs, gen)
        index = int(np.flatnonzero(coeffs)[0])
        indices[blade] = index
        signs[blade] = coeffs[index]
    return indices, signs


def cl_p_to_even(psi: Multivector) -> Multivector:
    """Isomorphism Cl_p → Cl⁰_{p+1} induced by e_i ↦ e_i e_{p+1}."""
    p = psi.signature.dim
    if psi.signature.n_minus != 0:
        raise ValueError("cl_p_to_even expects a Euclidean algebra")
    indices, signs = _cl_p_blade_images(p)
    out = np.zeros(1 << (p + 1))
    out[indices] = signs * psi.coeffs
    return Multivector(Signature.euclidean(p + 1), out)


def even_to_cl_p(phi: Multivector) -> Multivector:
    """Inverse of ``cl_p_to_even`` on the even subalgebra of Cl_{p+1}.

    Raises
    ------
    ValueError
        If ``phi`` is not even or its algebra is not Euclidean.
    """
    if phi.signature.n_minus != 0 or phi.signature.dim < 1:
        raise ValueError("even_to_cl_p expects a Euclidean algebra with at least one generator")
    if not phi.is_even():
        raise ValueError("even_to_cl_p expects an even multivector")
    p = phi.signature.dim - 1
    indices, signs = _cl_p_blade_images(p)
    return Multivector(Signature.euclidean(p), signs * phi.coeffs[indices])


def fields_to_cl_p(coeffs: np.ndarray, p: int) -> np.ndarray:
    """Array version of ``even_to_cl_p`` for fields of shape (..., 2^{p+1})."""
    indices, signs = _cl_p_blade_images(p)
    return np.asarray(coeffs)[..., indices] * signs


def fields_from_cl_p(coeffs: np.ndarray, p: int) -> np.ndarray:
    """Array version of ``cl_p_to_even`` for fields of shape (..., 2^p)."""
    indices, signs = _cl_p_blade_images(p)
    coeffs = np.asarray(coeffs, dtype=float)
    out = np.zeros(coeffs.shape[:-1] + (1 << (p + 1),))
    out[..., indices] = coeffs * signs
    return out
