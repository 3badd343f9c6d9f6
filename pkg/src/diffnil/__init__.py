"""Exact computations in the differential nilalgebra D_m = k_+{x}/[x^m].

The package embeds D_m into a Grassmann algebra with derivation, decides
membership in the differential ideal [x^m], computes normal forms on the
alpha_m basis, works in the operator ring D_2[D], and runs bounded checks of
the structural theorems about these algebras.
"""

from .diffop import DiffOperator, OperatorCoefficient, op_multiply, parse_operator
from .diffpoly import DiffMonomial, DiffPolynomial, derive, is_alpha, parse
from .embedding import mu_witness, phi, phi_generator
from .grassmann import BasisVector, GrassmannElement, derive_grassmann, eta, wedge, xi
from .ideal import membership, normal_form, normal_form_via_embedding

__all__ = [
    "BasisVector",
    "DiffMonomial",
    "DiffOperator",
    "DiffPolynomial",
    "GrassmannElement",
    "OperatorCoefficient",
    "derive",
    "derive_grassmann",
    "eta",
    "is_alpha",
    "membership",
    "mu_witness",
    "normal_form",
    "normal_form_via_embedding",
    "op_multiply",
    "parse",
    "parse_operator",
    "phi",
    "phi_generator",
    "wedge",
    "xi",
]
