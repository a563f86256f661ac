"""Multivector and spin group element types."""

from typing import Iterable, Sequence, Union

import numpy as np

from spinform.clifford.algebra import (
    CliffordAlgebra,
    Signature,
    check_same_signature,
    get_algebra,
)
from spinform.core.constants import ALGEBRA_TOLERANCE, SPIN_TOLERANCE
from spinform.core.exceptions import SpinGroupError

Scalar = Union[int, float, np.floating]


class Multivector:
    """Element of Cl(n_plus, n_minus) stored as 2^N dense real coefficients.

    Parameters
    ----------
    signature : Signature
        Algebra the element lives in.
    coeffs : array_like
        Coefficients indexed by blade bitmask.

    Raises
    ------
    ValueError
        If the coefficient vector has the wrong length or is not finite.

    Examples
    --------
    >>> sig = Signature.euclidean(3)
    >>> e1 = Multivector.blade(sig, (0,))
    >>> (e1 * e1).scalar_part
    -1.0
    """

    __slots__ = ("signature", "coeffs")

    def __init__(self, signature: Signature, coeffs: Iterable[float]) -> None:
        arr = np.array(coeffs, dtype=float)
        if arr.shape != (signature.size,):
            raise ValueError(
                f"{signature} needs {signature.size} coefficients, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("Multivector coefficients must be finite")
        arr.setflags(write=False)
        self.signature = signature
        self.coeffs = arr

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, signature: Signature) -> "Multivector":
        return cls(signature, np.zeros(signature.size))

    @classmethod
    def scalar(cls, signature: Signature, value: float = 1.0) -> "Multivector":
        coeffs = np.zeros(signature.size)
        coeffs[0] = value
        return cls(signature, coeffs)

    @classmethod
    def blade(
        cls, signature: Signature, generators: Sequence[int], coefficient: float = 1.0
    ) -> "Multivector":
        """Product of generators in the given order, 0-based (``(0, 1)`` is e1e2)."""
        algebra = get_algebra(signature)
        coeffs = np.zeros(signature.size)
        coeffs[0] = coefficient
        for i in generators:
            if not 0 <= i < signature.dim:
                raise ValueError(f"Generator index {i} outside {signature}")
            gen = np.zeros(signature.size)
            gen[1 << i] = 1.0
            coeffs = algebra.sparse_product(coeffs, gen)
        return cls(signature, coeffs)

    @classmethod
    def vector(cls, signature: Signature, components: Sequence[float]) -> "Multivector":
        components = np.asarray(components, dtype=float)
        if components.shape != (signature.dim,):
            raise ValueError(f"{signature} needs {signature.dim} vector components")
        return cls(signature, get_algebra(signature).vectors(components))

    # ------------------------------------------------------------------
    # Parts and predicates
    # ------------------------------------------------------------------

    @property
    def algebra(self) -> CliffordAlgebra:
        return get_algebra(self.signature)

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    @property
    def vector_part(self) -> np.ndarray:
        return self.algebra.vector_part(self.coeffs).copy()

    def grade(self, k: int) -> "Multivector":
        return Multivector(self.signature, self.algebra.grade_part(self.coeffs, k))

    def even_part(self) -> "Multivector":
        return Multivector(self.signature, np.where(self.algebra.even_mask, self.coeffs, 0.0))

    def odd_part(self) -> "Multivector":
        return Multivector(self.signature, np.where(self.algebra.even_mask, 0.0, self.coeffs))

    def is_grade(self, k: int, tol: float = ALGEBRA_TOLERANCE) -> bool:
        off = self.coeffs[self.algebra.grades != k]
        return bool(off.size == 0 or np.abs(off).max() <= tol)

    def is_even(self, tol: float = ALGEBRA_TOLERANCE) -> bool:
        odd = self.coeffs[~self.algebra.even_mask]
        return bool(odd.size == 0 or np.abs(odd).max() <= tol)

    def max_norm(self) -> float:
        return float(np.abs(self.coeffs).max())

    def l1_norm(self) -> float:
        return float(np.abs(self.coeffs).sum())

    def allclose(self, other: "Multivector", atol: float = 1e-10) -> bool:
        check_same_signature(self.signature, other.signature)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0.0, atol=atol))

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def reverse(self) -> "Multivector":
        return Multivector(self.signature, self.algebra.reverse(self.coeffs))

    def __add__(self, other: "Multivector") -> "Multivector":
        if not isinstance(other, Multivector):
            return NotImplemented
        check_same_signature(self.signature, other.signature)
        return Multivector(self.signature, self.coeffs + other.coeffs)

    def __sub__(self, other: "Multivector") -> "Multivector":
        if not isinstance(other, Multivector):
            return NotImplemented
        check_same_signature(self.signature, other.signature)
        return Multivector(self.signature, self.coeffs - other.coeffs)

    def __neg__(self) -> "Multivector":
        return Multivector(self.signature, -self.coeffs)

    def __mul__(self, other: Union["Multivector", Scalar]) -> "Multivector":
        if isinstance(other, Multivector):
            check_same_signature(self.signature, other.signature)
            return Multivector(
                self.signature, self.algebra.sparse_product(self.coeffs, other.coeffs)
            )
        if isinstance(other, (int, float, np.floating)):
            return Multivector(self.signature, self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other: Scalar) -> "Multivector":
        if isinstance(other, (int, float, np.floating)):
            return Multivector(self.signature, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other: Scalar) -> "Multivector":
        if isinstance(other, (int, float, np.floating)):
            return Multivector(self.signature, self.coeffs / float(other))
        return NotImplemented

    def __repr__(self) -> str:
        terms = []
        for index in np.flatnonzero(np.abs(self.coeffs) > 0):
            name = "".join(str(i + 1) for i in range(self.signature.dim) if index >> i & 1)
            terms.append(f"{self.coeffs[index]:g}" + (f" e{name}" if name else ""))
        return f"Multivector({self.signature}: {' + '.join(terms) or '0'})"


class SpinElement:
    """Even multivector g with τ(g)g = 1.

    Parameters
    ----------
    value : Multivector
        Candidate element.
    tol : float
        Tolerance for evenness and for τ(g)g = 1.

    Raises
    ------
    SpinGroupError
        If ``value`` is not even or τ(value)·value differs from 1 beyond ``tol``.
    """

    __slots__ = ("value",)

    def __init__(self, value: Multivector, tol: float = SPIN_TOLERANCE) -> None:
        if not value.is_even(tol):
            raise SpinGroupError(f"Spin elements must be even, got {value!r}")
        defect = value.reverse() * value - Multivector.scalar(value.signature)
        if defect.max_norm() > tol:
            raise SpinGroupError(
                f"τ(g)g differs from 1 by {defect.max_norm():.3e} (tolerance {tol:.1e})"
            )
        self.value = value

    @classmethod
    def identity(cls, signature: Signature) -> "SpinElement":
        return cls(Multivector.scalar(signature))

    @property
    def signature(self) -> Signature:
        return self.value.signature

    @property
    def coeffs(self) -> np.ndarray:
        return self.value.coeffs

    def inverse(self) -> "SpinElement":
        return SpinElement(self.value.reverse())

    def __mul__(self, other: "SpinElement") -> "SpinElement":
        if not isinstance(other, SpinElement):
            return NotImplemented
        return SpinElement(self.value * other.value)

    def __neg__(self) -> "SpinElement":
        return SpinElement(-self.value)

    def __repr__(self) -> str:
        return f"SpinElement({self.value!r})"
