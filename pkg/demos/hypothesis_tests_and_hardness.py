"""Two views of the min-budget problem: statistics and complexity.

With two actions the optimal contract is a likelihood-ratio test scaled by
the budget, and its type-1 plus type-2 error equals 1 - (c2 - c1) / B.  With
many actions, finding the best all-or-nothing contract encodes 3SAT; the
script reduces a satisfiable and an unsatisfiable formula and checks the
maximin threshold on each.

Run:  python3 demos/hypothesis_tests_and_hardness.py
"""

from itertools import product

import numpy as np

from delegated_contracts import (
    Cnf3,
    DelegationSetting,
    contract_to_test,
    error_sum,
    likelihood_ratio_test,
    min_budget_lp,
    reduce_3sat,
    total_variation,
)
from delegated_contracts.hardness import is_satisfiable, max_maximin_exhaustive

f1 = np.array([0.4, 0.3, 0.2, 0.1])
f2 = np.array([0.1, 0.2, 0.3, 0.4])
setting = DelegationSetting.from_arrays([f1, f2], [0.0, 0.5])
rep = min_budget_lp(setting, 2)
psi = contract_to_test(rep.contract)
print("contract:", rep.contract.payments.round(4), f"budget {rep.budget:.4f}")
print("test psi:", psi.psi)
print(f"error sum {error_sum(psi, f1, f2):.4f} = 1 - dc/B = {1 - 0.5 / rep.budget:.4f}")
print(f"LR test error sum {error_sum(likelihood_ratio_test(f1, f2), f1, f2):.4f} "
      f"= 1 - TV = {1 - total_variation(f1, f2):.4f}")

satisfiable = Cnf3(3, ((1, 2, 3), (-1, 2, -3), (1, -2, 3)))
every_clause = Cnf3(3, tuple(tuple(s * v for s, v in zip(signs, (1, 2, 3)))
                             for signs in product((1, -1), repeat=3)))
for name, cnf in (("satisfiable", satisfiable), ("all 8 clauses", every_clause)):
    _, inst = reduce_3sat(cnf)
    best = max_maximin_exhaustive(inst)
    print(f"\n{name}: SAT={is_satisfiable(cnf)}, best maximin {best:.4f}, "
          f"threshold {inst.threshold:.4f}, meets={best >= inst.threshold - 1e-12}")
