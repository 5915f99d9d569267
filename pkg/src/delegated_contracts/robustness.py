"""Structure statistics of min-budget contracts across the actions of a setting.

Each action other than the cheapest is treated as its own target on the
setting truncated at that action, so incentive constraints run against
cheaper actions only.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import DelegationSetting
from .dist import is_mlrp_setting
from .solvers import (
    MAX_ENUM_OUTCOMES,
    full_enumeration_aon,
    is_implementable,
    is_monotone_contract,
    min_budget_lp,
    min_budget_statistical,
    threshold_enumeration,
)


@dataclass(frozen=True)
class RobustnessRow:
    action_id: int
    min_budget_lp: float
    is_mlrp: bool
    is_monotone_contract: bool
    is_threshold: bool
    is_all_or_nothing: bool
    threshold_budget: float
    aon_budget: float
    excess_threshold: float
    excess_aon: float


def _excess(budget: float, base: float) -> float:
    if not np.isfinite(budget):
        return np.inf
    if base <= 0:
        return 0.0
    return max(0.0, (budget - base) / base)


def _budget(report) -> float:
    return report.budget if report.optimal else np.inf


def robustness_row(setting: DelegationSetting, action_id) -> RobustnessRow | None:
    """Row for one target, or None when that target is not implementable."""
    sub = setting.truncated(action_id)
    if not is_implementable(sub, action_id):
        return None
    lp = min_budget_lp(sub, action_id, with_dual=False)
    if not lp.optimal:
        return None
    if sub.m + 1 <= MAX_ENUM_OUTCOMES:
        aon = full_enumeration_aon(sub, action_id)
    else:
        aon = min_budget_statistical(sub, action_id, binary=True)
    thr = _budget(threshold_enumeration(sub, action_id))
    aon_b = _budget(aon)
    return RobustnessRow(
        action_id=action_id,
        min_budget_lp=lp.budget,
        is_mlrp=is_mlrp_setting(sub),
        is_monotone_contract=is_monotone_contract(lp.contract.payments),
        is_threshold=lp.is_threshold,
        is_all_or_nothing=lp.is_all_or_nothing,
        threshold_budget=thr,
        aon_budget=aon_b,
        excess_threshold=_excess(thr, lp.budget),
        excess_aon=_excess(aon_b, lp.budget),
    )


def robustness_table(setting: DelegationSetting) -> list[RobustnessRow]:
    """Rows for every implementable action above the cheapest one.

    Actions whose cost ties the cheapest action's are skipped, since the
    all-or-nothing solvers need a strictly costliest target.
    """
    c0 = setting.costs[0]
    rows = []
    for a in setting.actions[1:]:
        if a.cost <= c0:
            continue
        row = robustness_row(setting, a.id)
        if row is not None:
            rows.append(row)
    return rows


def summarize(rows: list[RobustnessRow]) -> dict:
    """Percentages of structural flags and mean excess costs over the rows."""
    if not rows:
        return {"n_actions": 0}

    def pct(flag):
        return 100.0 * float(np.mean([getattr(r, flag) for r in rows]))

    def mean_finite(field):
        vals = [getattr(r, field) for r in rows if np.isfinite(getattr(r, field))]
        return 100.0 * float(np.mean(vals)) if vals else None

    return {
        "n_actions": len(rows),
        "pct_mlrp": pct("is_mlrp"),
        "pct_monotone": pct("is_monotone_contract"),
        "pct_threshold": pct("is_threshold"),
        "pct_all_or_nothing": pct("is_all_or_nothing"),
        "mean_excess_threshold_pct": mean_finite("excess_threshold"),
        "mean_excess_aon_pct": mean_finite("excess_aon"),
    }


def table_to_doc(rows: list[RobustnessRow]) -> dict:
    return {"rows": [asdict(r) for r in rows], "summary": summarize(rows)}
