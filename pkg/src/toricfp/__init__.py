"""Toric fiber products: generators, Groebner bases and Hilbert functions of
multigraded ideals glued along a linearly independent grading, checked
against an elimination oracle."""

from .groebner import (
    ComputeLimits, GroebnerBasis, LimitExceeded, buchberger, ideal_equal, is_groebner,
    standard_monomial_table,
)
from .oracle import PolynomialMap, contract, kernel, pullback_weight
from .poly import MultiGrading, Polynomial, RingSpec, TermOrder, parse_polynomial
from .tfp import (
    DependentGrading, TfpSpec, hadamard_hilbert, lift, phi_B, quad_B, tfp_generators, tfp_weight,
    validate_spec,
)

__version__ = "0.1.0"

__all__ = [
    "ComputeLimits", "DependentGrading", "GroebnerBasis", "LimitExceeded", "MultiGrading",
    "Polynomial", "PolynomialMap", "RingSpec", "TermOrder", "TfpSpec", "buchberger", "contract",
    "hadamard_hilbert", "ideal_equal", "is_groebner", "kernel", "lift", "parse_polynomial",
    "phi_B", "pullback_weight", "quad_B", "standard_monomial_table", "tfp_generators",
    "tfp_weight", "validate_spec",
]
