"""Real Clifford algebras, spin groups and the spinor representation."""

from spinform.clifford.algebra import CliffordAlgebra, Signature, get_algebra
from spinform.clifford.multivector import Multivector, SpinElement
from spinform.clifford.spin import (
    adjoint,
    adjoint_matrix,
    brackets,
    cl_p_to_even,
    even_to_cl_p,
    exp_bivector,
    fields_from_cl_p,
    fields_to_cl_p,
    geometric_product,
    graded_tensor_embed,
    reversion,
    spin_lift,
)

__all__ = [
    # Algebra tables
    "CliffordAlgebra",
    "Signature",
    "get_algebra",
    # Value types
    "Multivector",
    "SpinElement",
    # Operations
    "adjoint",
    "adjoint_matrix",
    "brackets",
    "cl_p_to_even",
    "even_to_cl_p",
    "exp_bivector",
    "fields_from_cl_p",
    "fields_to_cl_p",
    "geometric_product",
    "graded_tensor_embed",
    "reversion",
    "spin_lift",
]
