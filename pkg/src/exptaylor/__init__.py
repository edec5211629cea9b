"""Exponential Taylor expansions.

Expand smooth functions in powers of ``exp(lam (x - x0)) - 1`` instead of
``x - x0``, with exact integral remainders, computable error bounds, and
convergence diagnostics, in one and several variables.
"""

from .errors import (
    DiagnosticError,
    DomainError,
    ExpTaylorError,
    ParseError,
    ValidationError,
)
from .expr import ExprAst, eval_complex, parse, to_source
from .identities import (
    IdentityResult,
    cosine_series,
    linear_series,
    log_series,
    results_to_json,
    results_to_text,
    run_suite,
    stirling_log2_series,
    suite_names,
)
from .jet import Jet1D, JetND, derivative, lift, lift_nd
from .operators import (
    OperatorField,
    OperatorSequence,
    d_lambda_nd,
    d_lambda_recursive,
    d_lambda_stirling,
)
from .series1d import (
    ConvergenceReport,
    Expansion1D,
    GrowthReport,
    RemainderEstimate,
    epsilon_sup,
    eval_series,
    expand_1d,
    growth_diagnostic,
    radius_estimate,
    remainder_bound,
    remainder_integral,
)
from .seriesnd import (
    BoxDomain,
    ExpansionND,
    NdConvergenceReport,
    convergence_check_nd,
    eval_nd,
    expand_nd,
    multi_index_factorial,
    multi_indices,
    multi_indices_of_degree,
    remainder_bound_nd,
)
from .stirling import (
    StirlingRatioRow,
    StirlingTable,
    build_ratio_rows,
    build_table,
    dump_row_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BoxDomain",
    "ConvergenceReport",
    "DiagnosticError",
    "DomainError",
    "ExpTaylorError",
    "Expansion1D",
    "ExpansionND",
    "ExprAst",
    "GrowthReport",
    "IdentityResult",
    "Jet1D",
    "JetND",
    "NdConvergenceReport",
    "OperatorField",
    "OperatorSequence",
    "ParseError",
    "RemainderEstimate",
    "StirlingRatioRow",
    "StirlingTable",
    "ValidationError",
    "build_ratio_rows",
    "build_table",
    "convergence_check_nd",
    "cosine_series",
    "d_lambda_nd",
    "d_lambda_recursive",
    "d_lambda_stirling",
    "derivative",
    "dump_row_csv",
    "epsilon_sup",
    "eval_complex",
    "eval_nd",
    "eval_series",
    "expand_1d",
    "expand_nd",
    "growth_diagnostic",
    "lift",
    "lift_nd",
    "linear_series",
    "log_series",
    "multi_index_factorial",
    "multi_indices",
    "multi_indices_of_degree",
    "parse",
    "radius_estimate",
    "remainder_bound",
    "remainder_bound_nd",
    "remainder_integral",
    "results_to_json",
    "results_to_text",
    "run_suite",
    "stirling_log2_series",
    "suite_names",
    "to_source",
]
