"""Domain types for delegated-learning contract settings and the agent's response.

A setting is a list of actions (training-set sizes), each with a cost and a
distribution over the number ``j`` of correctly classified validation points,
``j = 0..m``.  A contract maps every outcome ``j`` to a nonnegative payment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InputError

PROB_TOL = 1e-9
# utilities closer than this are treated as tied; ties go to the costlier action
TIE_TOL = 1e-9


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Probability mass over outcomes ``0..m``."""

    probs: np.ndarray

    def __post_init__(self):
        probs = _frozen_array(self.probs, "probs")
        if probs.size < 2:
            raise InputError("an outcome distribution needs at least two outcomes")
        if np.any(probs < 0):
            raise InputError("probabilities must be nonnegative")
        total = probs.sum()
        if abs(total - 1.0) > PROB_TOL:
            raise InputError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", probs)

    @property
    def m(self) -> int:
        return self.probs.size - 1

    def mean_outcome(self) -> float:
        return float(np.arange(self.probs.size) @ self.probs)

    def __len__(self):
        return self.probs.size

    def __eq__(self, other):
        if not isinstance(other, OutcomeDistribution):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    __hash__ = None


def as_probs(dist) -> np.ndarray:
    """Return the probability vector of an OutcomeDistribution or array-like."""
    if isinstance(dist, OutcomeDistribution):
        return dist.probs
    return np.asarray(dist, dtype=float)


@dataclass(frozen=True, eq=False)
class ActionSpec:
    id: int
    n_samples: int
    cost: float
    outcome_dist: OutcomeDistribution
    expected_accuracy: float | None = None

    def __post_init__(self):
        if not isinstance(self.outcome_dist, OutcomeDistribution):
            object.__setattr__(self, "outcome_dist", OutcomeDistribution(self.outcome_dist))
        if self.cost < 0 or not np.isfinite(self.cost):
            raise InputError(f"action {self.id}: cost must be finite and nonnegative")
        if self.n_samples < 0:
            raise InputError(f"action {self.id}: n_samples must be nonnegative")
        if self.expected_accuracy is not None and not 0.0 <= self.expected_accuracy <= 1.0:
            raise InputError(f"action {self.id}: expected_accuracy outside [0, 1]")
        object.__setattr__(self, "cost", float(self.cost))

    @property
    def accuracy(self) -> float:
        """Expected accuracy; falls back to E[j]/m under the action's pmf."""
        if self.expected_accuracy is not None:
            return float(self.expected_accuracy)
        return self.outcome_dist.mean_outcome() / self.outcome_dist.m


@dataclass(frozen=True, eq=False)
class DelegationSetting:
    m: int
    actions: tuple[ActionSpec, ...]

    def __post_init__(self):
        actions = tuple(self.actions)
        object.__setattr__(self, "actions", actions)
        if self.m < 1:
            raise InputError("validation size m must be positive")
        if len(actions) < 2:
            raise InputError("a setting needs at least two actions")
        ids = [a.id for a in actions]
        if len(set(ids)) != len(ids):
            raise InputError("action ids must be unique")
        for a in actions:
            if len(a.outcome_dist) != self.m + 1:
                raise InputError(
                    f"action {a.id}: pmf has {len(a.outcome_dist)} entries, expected {self.m + 1}"
                )
        costs = [a.cost for a in actions]
        if any(c2 < c1 for c1, c2 in zip(costs, costs[1:])):
            raise InputError("actions must be sorted by nondecreasing cost")
        F = np.vstack([a.outcome_dist.probs for a in actions])
        F.setflags(write=False)
        c = np.array(costs)
        c.setflags(write=False)
        object.__setattr__(self, "_F", F)
        object.__setattr__(self, "_c", c)

    @classmethod
    def from_arrays(
        cls,
        F,
        costs: Sequence[float],
        ids: Sequence[int] | None = None,
        n_samples: Sequence[int] | None = None,
        expected_accuracy: Sequence[float | None] | None = None,
    ) -> "DelegationSetting":
        """Build a setting from an (N, m+1) outcome matrix and a cost vector."""
        F = np.atleast_2d(np.asarray(F, dtype=float))
        N = F.shape[0]
        if len(costs) != N:
            raise InputError("need one cost per row of F")
        ids = list(ids) if ids is not None else list(range(1, N + 1))
        n_samples = list(n_samples) if n_samples is not None else [0] * N
        expected_accuracy = (
            list(expected_accuracy) if expected_accuracy is not None else [None] * N
        )
        actions = tuple(
            ActionSpec(ids[k], int(n_samples[k]), float(costs[k]),
                       OutcomeDistribution(F[k]), expected_accuracy[k])
            for k in range(N)
        )
        return cls(F.shape[1] - 1, actions)

    @property
    def F(self) -> np.ndarray:
        return self._F

    @property
    def costs(self) -> np.ndarray:
        return self._c

    @property
    def ids(self) -> list[int]:
        return [a.id for a in self.actions]

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([a.accuracy for a in self.actions])

    def __len__(self):
        return len(self.actions)

    def index_of(self, action_id) -> int:
        for k, a in enumerate(self.actions):
            if a.id == action_id:
                return k
        raise InputError(f"unknown action id {action_id!r}")

    def action(self, action_id) -> ActionSpec:
        return self.actions[self.index_of(action_id)]

    def truncated(self, action_id) -> "DelegationSetting":
        """Setting restricted to actions up to and including ``action_id``."""
        k = self.index_of(action_id)
        return DelegationSetting(self.m, self.actions[: k + 1])


@dataclass(frozen=True, eq=False)
class Contract:
    """Nonnegative payment per outcome; ``budget`` is the largest payment."""

    payments: np.ndarray
    budget: float = field(init=False)

    def __post_init__(self):
        t = _frozen_array(self.payments, "payments")
        if np.any(t < 0):
            raise InputError("payments must be nonnegative")
        object.__setattr__(self, "payments", t)
        object.__setattr__(self, "budget", float(t.max()) if t.size else 0.0)

    @classmethod
    def zeros(cls, m: int) -> "Contract":
        return cls(np.zeros(m + 1))

    @classmethod
    def from_solver(cls, values, clip_tol: float = 1e-9) -> "Contract":
        """Build from solver output, clipping round-off negatives."""
        t = np.array(values, dtype=float)
        if np.any(t < -clip_tol):
            raise InputError("solver returned a materially negative payment")
        return cls(np.clip(t, 0.0, None))

    def shifted(self, amount: float) -> "Contract":
        return Contract(self.payments + amount)

    def __len__(self):
        return self.payments.size


@dataclass(frozen=True, eq=False)
class BestResponse:
    action_id: int
    utility: float
    utilities_all: np.ndarray


def _check_contract(setting: DelegationSetting, contract: Contract):
    if len(contract) != setting.m + 1:
        raise InputError(
            f"contract has {len(contract)} payments, setting has {setting.m + 1} outcomes"
        )


def utilities(setting: DelegationSetting, contract: Contract) -> np.ndarray:
    """Expected utility of every action, in setting order."""
    _check_contract(setting, contract)
    return setting.F @ contract.payments - setting.costs


def agent_utility(setting: DelegationSetting, contract: Contract, action_id) -> float:
    """Expected payment under the action's outcome distribution minus its cost."""
    _check_contract(setting, contract)
    k = setting.index_of(action_id)
    a = setting.actions[k]
    return float(a.outcome_dist.probs @ contract.payments - a.cost)


def best_response(setting: DelegationSetting, contract: Contract) -> BestResponse:
    """Utility-maximizing action; near-ties resolve to the costliest action."""
    u = utilities(setting, contract)
    top = u.max()
    # actions are cost-sorted, so the last near-maximizer is the costliest one
    k = int(np.flatnonzero(u >= top - TIE_TOL)[-1])
    u.setflags(write=False)
    return BestResponse(setting.actions[k].id, float(u[k]), u)


def make_ir(setting: DelegationSetting, contract: Contract) -> Contract:
    """Shift every payment up by the cheapest action's cost.

    For an IC contract the shifted contract keeps the same best response and
    gives the agent nonnegative utility.
    """
    _check_contract(setting, contract)
    return contract.shifted(float(setting.costs[0]))


def principal_value(setting: DelegationSetting, contract: Contract) -> float:
    """Expected accuracy delivered by the agent's best response."""
    br = best_response(setting, contract)
    return setting.action(br.action_id).accuracy
