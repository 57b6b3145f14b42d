"""Revenue-optimal advertising rules for information products.

Python bindings over the C++ core: domain types, the single-type concave
program solvers, the multi-type price-grid LP, and the brute-force oracles.
"""

from ._optad import (
    AdvertisingRule,
    Belief,
    CapExceeded,
    DecisionProblem,
    DecompositionPart,
    DisclosureConversion,
    LambdaCandidate,
    MultiSolveReport,
    MultiTypeInstance,
    PosteriorDecomposition,
    Prospect,
    SignalEntry,
    SingleTypeInstance,
    SolveDiagnostics,
    SolveReport,
    SolverError,
    ValidationError,
    best_action,
    brute_force_multi,
    common_prior_decomposition,
    convert_disclosure,
    cost_of_uncertainty,
    decomposition_revenue,
    decomposition_to_rule,
    enumerate_lambda_candidates,
    evaluate_rule_multi,
    evaluate_rule_single,
    grid_concave_closure,
    likelihood_ratio,
    merge_duplicate_signals,
    merge_gain,
    no_disclosure_revenue,
    posterior,
    realized_purchase_set,
    reduce_signals,
    rule_to_decomposition,
    solve_binary,
    solve_concave_closure,
    solve_grid_lp,
)

__all__ = [
    "AdvertisingRule",
    "Belief",
    "CapExceeded",
    "DecisionProblem",
    "DecompositionPart",
    "DisclosureConversion",
    "LambdaCandidate",
    "MultiSolveReport",
    "MultiTypeInstance",
    "PosteriorDecomposition",
    "Prospect",
    "SignalEntry",
    "SingleTypeInstance",
    "SolveDiagnostics",
    "SolveReport",
    "SolverError",
    "ValidationError",
    "best_action",
    "brute_force_multi",
    "common_prior_decomposition",
    "convert_disclosure",
    "cost_of_uncertainty",
    "decomposition_revenue",
    "decomposition_to_rule",
    "enumerate_lambda_candidates",
    "evaluate_rule_multi",
    "evaluate_rule_single",
    "grid_concave_closure",
    "likelihood_ratio",
    "merge_duplicate_signals",
    "merge_gain",
    "no_disclosure_revenue",
    "posterior",
    "realized_purchase_set",
    "reduce_signals",
    "rule_to_decomposition",
    "solve_binary",
    "solve_concave_closure",
    "solve_grid_lp",
]
