"""Contract-design solvers.

Every solver returns a :class:`SolveReport`.  Targets are action ids.  The
min-budget problem for target ``i`` is

    min B  s.t.  0 <= t_j <= B,   F_i' . t - c_i' <= F_i . t - c_i  for i' != i

and the other solvers are either reformulations of it (dual, statistical,
binary), closed forms valid under extra structure, or related programs
(min-pay, implementability).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .core import Contract, DelegationSetting, best_response, principal_value, utilities
from .dist import crossing_point, is_mlr, is_mlrp_setting, survival, total_variation
from .errors import InputError, NotImplementableError, PreconditionError, ResourceError
from .lp import Status, build_lp, solve_binary, solve_lp

SNAP_TOL = 1e-7
BINDING_TOL = 1e-7
IC_TOL = 1e-9
MAX_ENUM_OUTCOMES = 24
_CHUNK = 1 << 16


class SolveStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"  # target not implementable
    OVER_BUDGET = "over_budget"  # implementable, but not within the budget
    LOCAL_INFEASIBLE = "local_infeasible"  # local threshold violates some IC constraint


class Candidate(NamedTuple):
    action_id: int
    status: SolveStatus | str
    budget: float | None
    value: float | None


@dataclass(frozen=True, eq=False)
class SolveReport:
    contract: Contract | None
    target_action: int
    solver_name: str
    status: SolveStatus
    dual_objective: float | None = None
    is_threshold: bool = False
    is_all_or_nothing: bool = False
    binding_ic_actions: tuple = ()
    violating_actions: tuple = ()
    expected_accuracy: float | None = None
    candidates: tuple = ()

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    @property
    def budget(self) -> float | None:
        return None if self.contract is None else self.contract.budget


def contract_shape(payments, tol: float = SNAP_TOL) -> tuple[bool, bool]:
    """(is_all_or_nothing, is_threshold) after snapping near-0 / near-max payments."""
    t = np.asarray(payments, dtype=float)
    B = t.max()
    scale = tol * max(1.0, B)
    if B <= scale:
        return True, True
    low = t <= scale
    high = t >= B - scale
    aon = bool(np.all(low | high))
    if not aon:
        return False, False
    first = int(np.flatnonzero(high)[0])
    return True, bool(np.all(high[first:]))


def is_monotone_contract(payments, tol: float = SNAP_TOL) -> bool:
    t = np.asarray(payments, dtype=float)
    return bool(np.all(np.diff(t) >= -tol * max(1.0, t.max())))


def _competitors(setting: DelegationSetting, k: int) -> np.ndarray:
    return np.array([i for i in range(len(setting)) if i != k], dtype=int)


def _binding(setting, k, contract) -> tuple:
    u = utilities(setting, contract)
    scale = max(1.0, contract.budget)
    return tuple(
        setting.actions[i].id for i in _competitors(setting, k)
        if u[k] - u[i] < BINDING_TOL * scale
    )


def _report(setting, k, payments, solver_name, dual=None, **extra) -> SolveReport:
    contract = Contract.from_solver(payments)
    aon, thr = contract_shape(contract.payments)
    return SolveReport(
        contract=contract,
        target_action=setting.actions[k].id,
        solver_name=solver_name,
        status=SolveStatus.OPTIMAL,
        dual_objective=dual,
        is_threshold=thr,
        is_all_or_nothing=aon,
        binding_ic_actions=_binding(setting, k, contract),
        **extra,
    )


def _infeasible(setting, k, solver_name, status=SolveStatus.INFEASIBLE) -> SolveReport:
    return SolveReport(None, setting.actions[k].id, solver_name, status)


def _ic_rows(setting, k):
    """Rows (F_i' - F_i) and rhs (c_i' - c_i) of the IC constraints for target k."""
    comp = _competitors(setting, k)
    F, c = setting.F, setting.costs
    return F[comp] - F[k], c[comp] - c[k]


def min_budget_lp(setting: DelegationSetting, target, with_dual: bool = True) -> SolveReport:
    """Min-budget contract for ``target`` by solving the MIN-BUDGET LP directly."""
    k = setting.index_of(target)
    n_out = setting.m + 1
    D, dc = _ic_rows(setting, k)
    budget_rows = np.hstack([np.eye(n_out), -np.ones((n_out, 1))])
    ic = np.hstack([D, np.zeros((D.shape[0], 1))])
    objective = np.zeros(n_out + 1)
    objective[-1] = 1.0
    lp = build_lp(objective, A_ub=np.vstack([budget_rows, ic]),
                  b_ub=np.concatenate([np.zeros(n_out), dc]))
    sol = solve_lp(lp)
    if sol.status is not Status.OPTIMAL:
        return _infeasible(setting, k, "lp")
    dual = min_budget_dual(setting, target) if with_dual else None
    return _report(setting, k, sol.x[:n_out], "lp", dual)


def min_budget_dual(setting: DelegationSetting, target) -> float:
    """Optimal value of the dual of the MIN-BUDGET LP.

    Maximizes ``sum (c_i - c_i') lam_i'`` subject to
    ``sum_i' (F_ij - F_i'j) lam_i' <= mu_j`` and ``sum mu <= 1``.
    Raises NotImplementableError when the dual is unbounded.
    """
    k = setting.index_of(target)
    comp = _competitors(setting, k)
    F, c = setting.F, setting.costs
    n_out = setting.m + 1
    n_lam = comp.size
    objective = np.concatenate([c[k] - c[comp], np.zeros(n_out)])
    # columns: lam (one per competitor), then mu_j
    rows_j = np.hstack([(F[k] - F[comp]).T, -np.eye(n_out)])
    row_mu = np.concatenate([np.zeros(n_lam), np.ones(n_out)])[None, :]
    lp = build_lp(objective, A_ub=np.vstack([rows_j, row_mu]),
                  b_ub=np.concatenate([np.zeros(n_out), [1.0]]), maximize=True)
    sol = solve_lp(lp)
    if sol.status is Status.UNBOUNDED:
        raise NotImplementableError(f"action {target} is not implementable")
    return sol.objective_value


def _strictly_costliest(setting, k) -> bool:
    c = setting.costs
    return bool(np.all(c[_competitors(setting, k)] < c[k]))


def min_budget_statistical(setting: DelegationSetting, target, binary: bool = False) -> SolveReport:
    """Solve the min-budget problem in (phi, beta) form; payments are phi / beta.

    ``binary=True`` restricts ``phi`` to {0, 1}, which yields the optimal
    all-or-nothing contract.  Falls back to :func:`min_budget_lp` when some
    competitor is at least as costly as the target.
    """
    k = setting.index_of(target)
    name = "mip" if binary else "statistical"
    if not _strictly_costliest(setting, k):
        rep = min_budget_lp(setting, target)
        return replace(rep, solver_name=f"{name}->lp")
    n_out = setting.m + 1
    D, dc = _ic_rows(setting, k)
    # (F_i' - F_i) . phi + (c_i - c_i') beta <= 0
    A = np.hstack([D, -dc[:, None]])
    objective = np.zeros(n_out + 1)
    objective[-1] = 1.0
    upper = np.concatenate([np.ones(n_out), [np.inf]])
    lp = build_lp(objective, A_ub=A, b_ub=np.zeros(D.shape[0]), upper=upper, maximize=True)
    sol = solve_binary(lp, range(n_out)) if binary else solve_lp(lp)
    beta = sol.objective_value if sol.optimal else 0.0
    if beta <= 1e-12:
        return _infeasible(setting, k, name)
    phi = sol.x[:n_out]
    dual = None if binary else min_budget_dual(setting, target)
    return _report(setting, k, phi / beta, name, dual)


def two_action_closed_form(f1, f2, c1: float, c2: float) -> SolveReport:
    """Optimal two-action contract: pay (c2 - c1) / TV wherever f2 >= f1."""
    if not c2 > c1:
        raise InputError("closed form needs c2 > c1")
    setting = DelegationSetting.from_arrays([np.asarray(getattr(f1, "probs", f1)),
                                             np.asarray(getattr(f2, "probs", f2))], [c1, c2])
    P, Q = setting.F
    tv = total_variation(P, Q)
    if tv <= 1e-15:
        return _infeasible(setting, 1, "two-action")
    B = (c2 - c1) / tv
    t = B * (Q >= P)
    return _report(setting, 1, t, "two-action", dual=B)


def local_threshold(setting: DelegationSetting, target=None) -> SolveReport:
    """Threshold contract built from the top two actions only, then IC-checked.

    Pays ``b = (c_n - c_{n-1}) / (s_n - s_{n-1})`` for outcomes at or above the
    crossing point of the top action over the runner-up.  If some other action
    beats the target under that contract, the report has status
    ``LOCAL_INFEASIBLE`` and lists the violators.
    """
    k = len(setting) - 1
    if target is not None and setting.index_of(target) != k:
        raise PreconditionError("local threshold solver targets the costliest action")
    if not is_mlrp_setting(setting):
        raise PreconditionError("setting does not satisfy MLRP")
    F, c = setting.F, setting.costs
    j_star = crossing_point(F[k - 1], F[k]).j_star
    s_top = survival(F[k], j_star - 1)
    s_next = survival(F[k - 1], j_star - 1)
    b = (c[k] - c[k - 1]) / (s_top - s_next)
    t = np.where(np.arange(setting.m + 1) >= j_star, b, 0.0)
    u = utilities(setting, Contract(t))
    tol = IC_TOL * max(1.0, b)
    violators = tuple(setting.actions[i].id for i in range(k) if u[i] > u[k] + tol)
    rep = _report(setting, k, t, "local")
    if violators:
        return replace(rep, status=SolveStatus.LOCAL_INFEASIBLE, violating_actions=violators)
    return rep


def _maximin_matrix(setting, k) -> np.ndarray:
    comp = _competitors(setting, k)
    F, c = setting.F, setting.costs
    return (F[k] - F[comp]) / (c[k] - c[comp])[:, None]


def _bits(start: int, stop: int, width: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    return ((idx[:, None] >> np.arange(width, dtype=np.int64)) & 1).astype(float)


def full_enumeration_aon(setting: DelegationSetting, target=None) -> SolveReport:
    """Optimal all-or-nothing contract by enumerating every phi in {0,1}^(m+1).

    For fixed phi the best beta is ``min_i' (A phi)_i'`` with
    ``A_i'j = (F_ij - F_i'j) / (c_i - c_i')``.
    """
    k = len(setting) - 1 if target is None else setting.index_of(target)
    n_out = setting.m + 1
    if n_out > MAX_ENUM_OUTCOMES:
        raise ResourceError(f"enumeration limited to {MAX_ENUM_OUTCOMES} outcomes, got {n_out}")
    if not _strictly_costliest(setting, k):
        raise PreconditionError("full enumeration needs a strictly costliest target")
    A = _maximin_matrix(setting, k)
    best_beta, best_idx = -np.inf, 0
    total = 1 << n_out
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        beta = (_bits(start, stop, n_out) @ A.T).min(axis=1)
        i = int(np.argmax(beta))
        if beta[i] > best_beta:
            best_beta, best_idx = float(beta[i]), start + i
    if best_beta <= 1e-12:
        return _infeasible(setting, k, "enum-aon")
    phi = _bits(best_idx, best_idx + 1, n_out)[0]
    return _report(setting, k, phi / best_beta, "enum-aon")


def threshold_enumeration(setting: DelegationSetting, target=None) -> SolveReport:
    """Best contract of the form ``B * 1[j >= j0]`` over all thresholds ``j0``."""
    k = len(setting) - 1 if target is None else setting.index_of(target)
    if not _strictly_costliest(setting, k):
        raise PreconditionError("threshold enumeration needs a strictly costliest target")
    A = _maximin_matrix(setting, k)
    n_out = setting.m + 1
    # phi for threshold j0 is the suffix indicator; A phi is a reversed cumsum
    suffix = np.cumsum(A[:, ::-1], axis=1)[:, ::-1]
    beta = suffix.min(axis=0)
    j0 = int(np.argmax(beta))
    if beta[j0] <= 1e-12:
        return _infeasible(setting, k, "enum-threshold")
    t = np.where(np.arange(n_out) >= j0, 1.0 / beta[j0], 0.0)
    return _report(setting, k, t, "enum-threshold")


def min_pay_lp(setting: DelegationSetting, target) -> SolveReport:
    """Contract minimizing expected payment under the target's distribution."""
    k = setting.index_of(target)
    D, dc = _ic_rows(setting, k)
    lp = build_lp(setting.F[k], A_ub=D, b_ub=dc)
    sol = solve_lp(lp)
    if sol.status is not Status.OPTIMAL:
        return _infeasible(setting, k, "min-pay")
    return _report(setting, k, sol.x, "min-pay")


def is_implementable(setting: DelegationSetting, target) -> bool:
    """True unless a convex combination of the other actions reproduces the
    target's distribution at strictly lower expected cost."""
    k = setting.index_of(target)
    comp = _competitors(setting, k)
    F, c = setting.F, setting.costs
    A_eq = np.vstack([F[comp].T, np.ones(comp.size)])
    b_eq = np.concatenate([F[k], [1.0]])
    sol = solve_lp(build_lp(c[comp], A_eq=A_eq, b_eq=b_eq))
    if sol.status is not Status.OPTIMAL:
        return True
    return sol.objective_value >= c[k] - IC_TOL * max(1.0, c[k])


_BUDGET_SOLVERS = {
    "lp": (lambda s, a: min_budget_lp(s, a, with_dual=False), False),
    "aon": (lambda s, a: min_budget_statistical(s, a, binary=True), True),
    "enum-aon": (full_enumeration_aon, True),
    "local": (local_threshold, True),
}


def budget_optimal(setting: DelegationSetting, budget: float, solver: str = "lp") -> SolveReport:
    """Contract with payments at most ``budget`` maximizing expected accuracy.

    Solves one min-budget problem per candidate action and keeps those whose
    budget fits.  ``solver="lp"`` imposes IC against every action; the
    all-or-nothing and local solvers need the target to be costliest, so they
    run on the setting truncated at the target.  The principal's value is
    always evaluated from the agent's best response in the full setting.
    Ties in value go to the lower budget, then the lower action id.
    """
    if budget < 0:
        raise InputError("budget must be nonnegative")
    if solver not in _BUDGET_SOLVERS:
        raise InputError(f"unknown solver {solver!r}")
    solve, truncate = _BUDGET_SOLVERS[solver]
    c0 = setting.costs[0]
    scale = max(1.0, budget)
    zero = Contract.zeros(setting.m)
    best = (principal_value(setting, zero), 0.0, setting.actions[0].id, zero)
    candidates = [Candidate(setting.actions[0].id, SolveStatus.OPTIMAL, 0.0, best[0])]
    for a in setting.actions[1:]:
        # expected pay is at most the budget, so larger cost gaps cannot be implemented
        if a.cost - c0 > budget + IC_TOL * scale:
            candidates.append(Candidate(a.id, "pruned", None, None))
            continue
        if not is_implementable(setting, a.id):
            candidates.append(Candidate(a.id, SolveStatus.INFEASIBLE, None, None))
            continue
        sub = setting.truncated(a.id) if truncate else setting
        rep = solve(sub, a.id)
        if rep.contract is None or rep.status is not SolveStatus.OPTIMAL:
            candidates.append(Candidate(a.id, rep.status, rep.budget, None))
            continue
        if rep.contract.budget > budget + IC_TOL * scale:
            candidates.append(Candidate(a.id, SolveStatus.OVER_BUDGET, rep.contract.budget, None))
            continue
        value = principal_value(setting, rep.contract)
        candidates.append(Candidate(a.id, SolveStatus.OPTIMAL, rep.contract.budget, value))
        key = (value, -rep.contract.budget, -setting.index_of(a.id))
        if key > (best[0], -best[1], -setting.index_of(best[2])):
            best = (value, rep.contract.budget, a.id, rep.contract)
    value, _, _, contract = best
    chosen = best_response(setting, contract).action_id
    k = setting.index_of(chosen)
    aon, thr = contract_shape(contract.payments)
    return SolveReport(
        contract=contract,
        target_action=chosen,
        solver_name=f"budget-optimal/{solver}",
        status=SolveStatus.OPTIMAL,
        is_threshold=thr,
        is_all_or_nothing=aon,
        binding_ic_actions=_binding(setting, k, contract),
        expected_accuracy=value,
        candidates=tuple(candidates),
    )
