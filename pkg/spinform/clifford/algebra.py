"""Signatures and dense multiplication tables for real Clifford algebras.

Basis blades are indexed by bitmask: bit i set means generator e_{i+1} is present, and the
blade is written with its generators in increasing order. Index 0 is the scalar, index
``1 << i`` the generator e_{i+1}, ``(1 << i) | (1 << j)`` the bivector e_{i+1}e_{j+1}.

Generators square to minus their metric norm: e_i·e_i = -ε_i. For Euclidean signatures every
generator squares to -1; the Lorentzian generator (ε = -1) squares to +1.

Notes
-----
``CliffordAlgebra`` instances hold read-only tables and are shared through ``get_algebra``.
Field-level code works on raw coefficient arrays of shape ``(..., 2**N)`` through the batched
kernels here; ``Multivector`` wraps single elements for the operation-level API.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from spinform.core.constants import MAX_GENERATORS
from spinform.core.exceptions import SignatureMismatchError


@dataclass(frozen=True)
class Signature:
    """Metric signature of the generating vector space.

    Attributes
    ----------
    n_plus : int
        Number of generators with metric norm +1 (they square to -1).
    n_minus : int
        Number of generators with metric norm -1 (they square to +1). They are
        numbered after the positive ones.
    """

    n_plus: int
    n_minus: int = 0

    def __post_init__(self) -> None:
        if self.n_plus < 0 or self.n_minus < 0:
            raise ValueError(f"Generator counts must be non-negative, got {self}")
        if self.n_plus + self.n_minus > MAX_GENERATORS:
            raise ValueError(
                f"At most {MAX_GENERATORS} generators are supported, "
                f"got {self.n_plus + self.n_minus}"
            )

    @property
    def dim(self) -> int:
        """Number of generators N."""
        return self.n_plus + self.n_minus

    @property
    def size(self) -> int:
        """Dimension 2^N of the algebra."""
        return 1 << self.dim

    @property
    def metric(self) -> Tuple[int, ...]:
        """Metric norms ε_i of the generators."""
        return (1,) * self.n_plus + (-1,) * self.n_minus

    @classmethod
    def euclidean(cls, n: int) -> "Signature":
        return cls(n, 0)

    @classmethod
    def lorentzian(cls, n: int) -> "Signature":
        """Signature of R^{n,1}: n positive generators followed by one negative."""
        return cls(n, 1)

    def __str__(self) -> str:
        return f"Cl({self.n_plus},{self.n_minus})"


def check_same_signature(a: Signature, b: Signature) -> None:
    """Raise ``SignatureMismatchError`` unless both signatures agree."""
    if a != b:
        raise SignatureMismatchError(f"Signature mismatch: {a} vs {b}")


class CliffordAlgebra:
    """Multiplication tables and batched kernels for one signature.

    Parameters
    ----------
    signature : Signature
        Algebra signature.

    Attributes
    ----------
    grades : np.ndarray
        Grade of each basis blade, shape (2^N,).
    reverse_signs : np.ndarray
        (-1)^{k(k-1)/2} per blade.
    signs : np.ndarray
        ``signs[a, b]`` is the sign of e_a·e_b = signs[a, b]·e_{a^b}, int8 (2^N, 2^N).
    """

    def __init__(self, signature: Signature) -> None:
        self.signature = signature
        self.n = signature.dim
        self.size = signature.size
        index = np.arange(self.size)
        self.grades = np.array([bin(i).count("1") for i in range(self.size)], dtype=np.int64)
        k = self.grades
        self.reverse_signs = np.where((k * (k - 1) // 2) % 2 == 0, 1.0, -1.0)
        self.signs = self._build_sign_table()
        self._xor = index[:, None] ^ index[None, :]
        # left_signs[k, b] = signs[k ^ b, b]
        self._left_signs = self.signs[self._xor, index[None, :]].astype(float)
        self.vector_indices = np.array([1 << i for i in range(self.n)], dtype=np.int64)
        self.even_mask = self.grades % 2 == 0
        for table in (self.grades, self.reverse_signs, self.signs, self._left_signs):
            table.setflags(write=False)

    def _build_sign_table(self) -> np.ndarray:
        index = np.arange(self.size, dtype=np.int16)
        a = index[:, None]
        b = index[None, :]
        popcount = self.grades.astype(np.int16)
        parity = np.zeros((self.size, self.size), dtype=np.int8)
        for i in range(self.n):
            # Each generator of b must move past the higher generators of a.
            bit_b = ((b >> i) & 1).astype(np.int8)
            higher_a = (popcount[a >> (i + 1)] % 2).astype(np.int8)
            parity ^= bit_b & higher_a
        signs = np.where(parity == 0, 1, -1).astype(np.int8)
        common = a & b
        for i, eps in enumerate(self.signature.metric):
            if eps == 1:
                # e_i e_i = -1 for positive generators
                signs = np.where((common >> i) & 1, -signs, signs).astype(np.int8)
        return signs

    # ------------------------------------------------------------------
    # Batched kernels on coefficient arrays of shape (..., size)
    # ------------------------------------------------------------------

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of left multiplication y ↦ x·y, shape (..., size, size)."""
        x = np.asarray(x, dtype=float)
        return x[..., self._xor] * self._left_signs

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Geometric product of coefficient arrays, broadcasting over leading axes."""
        return np.einsum("...kb,...b->...k", self.left_matrix(x), np.asarray(y, dtype=float))

    def reverse(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) * self.reverse_signs

    def sparse_product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two single elements touching only their nonzero blades."""
        ia = np.flatnonzero(x)
        ib = np.flatnonzero(y)
        out = np.zeros(self.size)
        if ia.size == 0 or ib.size == 0:
            return out
        weights = self.signs[np.ix_(ia, ib)] * np.outer(x[ia], y[ib])
        np.add.at(out, self._xor[np.ix_(ia, ib)].ravel(), weights.ravel())
        return out

    def vectors(self, components: np.ndarray) -> np.ndarray:
        """Embed vector components (..., N) as grade-1 coefficient arrays (..., size)."""
        components = np.asarray(components, dtype=float)
        out = np.zeros(components.shape[:-1] + (self.size,))
        out[..., self.vector_indices] = components
        return out

    def vector_part(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x)[..., self.vector_indices]

    def grade_part(self, x: np.ndarray, grade: int) -> np.ndarray:
        return np.where(self.grades == grade, np.asarray(x, dtype=float), 0.0)

    def bivector_index(self, i: int, j: int) -> int:
        """Blade index of e_{i+1}e_{j+1} for 0-based i < j."""
        if not 0 <= i < j < self.n:
            raise ValueError(f"Need 0 <= i < j < {self.n}, got ({i}, {j})")
        return (1 << i) | (1 << j)

    def bivectors(self, matrices: np.ndarray) -> np.ndarray:
        """Map antisymmetric (..., N, N) arrays W to ½Σ_{i<j} W_ij e_ie_j."""
        matrices = np.asarray(matrices, dtype=float)
        out = np.zeros(matrices.shape[:-2] + (self.size,))
        for i in range(self.n):
            for j in range(i + 1, self.n):
                out[..., (1 << i) | (1 << j)] = 0.5 * matrices[..., i, j]
        return out

    def spin_defect(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Scalar part and non-scalar max-norm of τ(x)x."""
        s = self.product(self.reverse(x), x)
        rest = np.abs(s[..., 1:]).max(axis=-1) if self.size > 1 else np.zeros(s.shape[:-1])
        return s[..., 0], rest


@lru_cache(maxsize=None)
def get_algebra(signature: Signature) -> CliffordAlgebra:
    """Get the shared algebra tables for a signature."""
    return CliffordAlgebra(signature)
