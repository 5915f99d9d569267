"""Why the cheapest contract is not always a threshold.

Three agents' training sizes map to Binomial(10, p) validation outcomes with
p = 0.5, 0.65, 0.8 and costs 0, 0.45, 1.  The min-budget LP pays a smaller
amount at outcome 7 and the full amount above it; forcing a single payment
level (all-or-nothing) costs about 3% more.  The local threshold built from
the top two actions alone is not even incentive compatible here.

Run:  python3 demos/counterexample_walkthrough.py
"""

import numpy as np

from delegated_contracts import (
    DelegationSetting,
    best_response,
    binomial_pmf,
    budget_optimal,
    crossing_survivals,
    full_enumeration_aon,
    is_concave_chain,
    is_mlrp_setting,
    local_threshold,
    min_budget_lp,
    min_budget_statistical,
)

np.set_printoptions(precision=4, suppress=True)

setting = DelegationSetting.from_arrays(
    [binomial_pmf(10, p).probs for p in (0.5, 0.65, 0.8)], [0.0, 0.45, 1.0])
print("MLRP holds:", is_mlrp_setting(setting))
chain = crossing_survivals(setting)
print("crossing-survival chain:", [(round(c, 3), round(s, 4)) for c, s in chain])
print("chain concave:", is_concave_chain(chain))

lp = min_budget_lp(setting, 3)
print("\nmin-budget LP payments:", lp.contract.payments)
print(f"  budget {lp.budget:.6f}, dual {lp.dual_objective:.6f}, threshold {lp.is_threshold}")
print("  binding IC against actions", lp.binding_ic_actions)

mip = min_budget_statistical(setting, 3, binary=True)
enum = full_enumeration_aon(setting, 3)
print(f"\nall-or-nothing budget (branch-and-bound) {mip.budget:.6f}")
print(f"all-or-nothing budget (enumeration)      {enum.budget:.6f}")
print(f"excess over the LP: {100 * (enum.budget - lp.budget) / lp.budget:.2f}%")

local = local_threshold(setting)
print(f"\nlocal threshold: status {local.status.value}, violators {local.violating_actions}")
print("  agent actually picks action", best_response(setting, local.contract).action_id)

# a budget between the two optima separates the solvers
for solver in ("lp", "aon"):
    rep = budget_optimal(setting, 1.48, solver)
    print(f"budget 1.48 with {solver:>3}: action {rep.target_action}, accuracy {rep.expected_accuracy:.2f}")
