"""acalc: calculus and differential equations over commutative real algebras."""

from .algebra import (Algebra, Classification, Element, Kind, classify, format_element,
                      integer_power, mul, norm, norm_bound, null_space, rep_matrix)
from .construct import (REALS, APolynomial, DirectProduct, ExtensionAlgebra, Isomorphism,
                        apply_iso, apply_iso_inv, canonical_isomorphism, complex_numbers,
                        direct_product, dual_numbers, extend, from_presentation, hyperbolic,
                        named_algebra)
from .errors import (AlgebraError, AlgebraMismatchError, DegenerateOperatorError,
                     DependentExponentialsError, LogDomainError, NoIsomorphismError,
                     NotInvertibleError, NotMonicError, ParseError, RelationError,
                     StructureError, WronskianError)
from .functions import (cos, cosh, exp, log, power, sin, sinh, special_functions, sqrt)

__version__ = "0.1.0"

__all__ = [
    "Algebra", "Element", "Classification", "Kind", "classify", "format_element",
    "integer_power", "mul", "norm", "norm_bound", "null_space", "rep_matrix",
    "REALS", "APolynomial", "DirectProduct", "ExtensionAlgebra", "Isomorphism",
    "apply_iso", "apply_iso_inv", "canonical_isomorphism", "complex_numbers",
    "direct_product", "dual_numbers", "extend", "from_presentation", "hyperbolic",
    "named_algebra",
    "AlgebraError", "AlgebraMismatchError", "DegenerateOperatorError",
    "DependentExponentialsError", "LogDomainError", "NoIsomorphismError",
    "NotInvertibleError", "NotMonicError", "ParseError", "RelationError",
    "StructureError", "WronskianError",
    "cos", "cosh", "exp", "log", "power", "sin", "sinh", "special_functions", "sqrt",
]
