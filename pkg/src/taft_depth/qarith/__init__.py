"""Exact arithmetic in Q(z_n), q-combinatorics and exact linear algebra."""

from .cyclotomic import CyclotomicField, CycloScalar, cyclotomic_poly, field, parse_scalar
from .matrix import (
    CycloMatrix,
    SubspaceQuotient,
    inverse,
    nullspace,
    rank,
    row_reduce,
    row_space,
    subspace_quotient,
)
from .qbinom import gauss_polynomial, q_binomial, q_factorial, q_int

__all__ = [
    "CyclotomicField",
    "CycloMatrix",
    "CycloScalar",
    "SubspaceQuotient",
    "cyclotomic_poly",
    "field",
    "gauss_polynomial",
    "inverse",
    "nullspace",
    "parse_scalar",
    "q_binomial",
    "q_factorial",
    "q_int",
    "rank",
    "row_reduce",
    "row_space",
    "subspace_quotient",
]
