"""Exact jet calculus for the Euler-Darboux equations.

Everything is computed over Gaussian rationals with rational-function
coefficients in the two base variables, so every identity the package
reports is an exact one.
"""
from .errors import ChartMismatchError, DomainError, LimitError
from .rational import GaussRat, Poly2, RatFunc
from .jets import (CDiffOp, Chart, CHARTS, DiffExpr, ELLIPTIC, HYPERBOLIC,
                   INTERMEDIATE, MultiIndex, d_multi, evolutionary_apply,
                   jacobi_bracket, linearization, op_apply, op_commutator,
                   op_compose, total_derivative)
from .grammar import (ParseError, SourceSpan, from_json, parse_coeff,
                      parse_expr, parse_op, print_expr, print_op, to_json)
from .wirtinger import (BaseChange, block_inverse, block_property_checks,
                        closed_form_p, compose_map, derivative_rows, ed_map,
                        prolong_block, pullback_expr, pushforward_expr,
                        recurrence_blocks, split_re_im, sum_difference_map,
                        transport_op, wirtinger_map)
from .darboux import (EquationModel, RelationCheck, SymmetryReport, catalog,
                      catalog_names, classical_family, elliptic_model,
                      equation_model, generator_chain, hierarchy,
                      hierarchy_relations_check, hyperbolic_model,
                      intermediate_model, is_symmetry, psi, psi_prime,
                      restricted_generator, scalar_ratio, theta, theta_prime)
from .limits import scoped_limits

__version__ = "0.1.0"

__all__ = [
    "BaseChange", "CDiffOp", "CHARTS", "Chart", "ChartMismatchError",
    "DiffExpr", "DomainError", "ELLIPTIC", "EquationModel", "GaussRat",
    "HYPERBOLIC", "INTERMEDIATE", "LimitError", "MultiIndex", "ParseError",
    "Poly2", "RatFunc", "RelationCheck", "SourceSpan", "SymmetryReport",
    "block_inverse", "block_property_checks", "catalog", "catalog_names",
    "classical_family", "closed_form_p", "compose_map", "d_multi",
    "derivative_rows", "ed_map", "elliptic_model", "equation_model",
    "evolutionary_apply", "from_json", "generator_chain", "hierarchy",
    "hierarchy_relations_check", "hyperbolic_model", "intermediate_model",
    "is_symmetry", "jacobi_bracket", "linearization", "op_apply",
    "op_commutator", "op_compose", "parse_coeff", "parse_expr", "parse_op",
    "print_expr", "print_op", "prolong_block", "psi", "psi_prime",
    "pullback_expr", "pushforward_expr", "recurrence_blocks",
    "restricted_generator", "scalar_ratio", "scoped_limits", "split_re_im",
    "sum_difference_map", "theta", "theta_prime", "to_json", "total_derivative",
    "transport_op", "wirtinger_map",
]
