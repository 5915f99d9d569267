"""Optimal contracts for delegated learning.

A principal pays an agent to train a classifier and can only observe how many
of ``m`` validation points it gets right.  This package computes payment
rules (contracts) that make the agent pick a desired training-set size, from
raw learning-curve samples down to the linear programs underneath.
"""

from .core import (
    ActionSpec,
    BestResponse,
    Contract,
    DelegationSetting,
    OutcomeDistribution,
    agent_utility,
    best_response,
    make_ir,
    principal_value,
    utilities,
)
from .curves import (
    CurveModel,
    CurveSamples,
    build_setting,
    estimation_error_sweep,
    fit_power_law,
    sample_pilot,
    sample_size_multiplier,
)
from .dist import (
    CrossingPoint,
    binomial_mixture,
    binomial_pmf,
    crossing_point,
    crossing_survivals,
    is_concave_chain,
    is_mlr,
    is_mlrp_setting,
    survival,
    total_variation,
)
from .errors import (
    ContractError,
    DegenerateFitError,
    FitError,
    InputError,
    NotImplementableError,
    NumericalError,
    PreconditionError,
    ResourceError,
)
from .hardness import Cnf3, MaximinInstance, maximin_objective, parse_dimacs, reduce_3sat, verify_reduction
from .lp import LinearProgram, LpSolution, Status, solve_binary, solve_lp
from .nptest import (
    HypothesisTest,
    contract_to_test,
    error_sum,
    likelihood_ratio_test,
    test_to_contract,
    verify_equivalence,
)
from .robustness import RobustnessRow, robustness_table
from .solvers import (
    SolveReport,
    SolveStatus,
    budget_optimal,
    full_enumeration_aon,
    is_implementable,
    local_threshold,
    min_budget_dual,
    min_budget_lp,
    min_budget_statistical,
    min_pay_lp,
    threshold_enumeration,
    two_action_closed_form,
)

__version__ = "0.1.0"
