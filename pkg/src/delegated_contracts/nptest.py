"""Contracts as hypothesis tests.

A test ``psi`` gives, per outcome, the probability of rejecting the null
``f1`` (cheap action) in favor of ``f2`` (costly action).  A contract with
budget ``B`` maps to the test ``psi = t / B`` and back.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .core import Contract, DelegationSetting, as_probs
from .dist import total_variation
from .errors import InputError

EQUIV_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class HypothesisTest:
    psi: np.ndarray

    def __post_init__(self):
        psi = np.array(self.psi, dtype=float)
        if psi.ndim != 1 or np.any(psi < 0) or np.any(psi > 1):
            raise InputError("test entries must lie in [0, 1]")
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    @property
    def is_binary(self) -> bool:
        return bool(np.all((self.psi == 0) | (self.psi == 1)))


def contract_to_test(contract: Contract) -> HypothesisTest:
    if contract.budget <= 0:
        raise InputError("a zero-budget contract has no associated test")
    return HypothesisTest(contract.payments / contract.budget)


def test_to_contract(test: HypothesisTest, budget: float) -> Contract:
    if budget <= 0:
        raise InputError("budget must be positive")
    return Contract(test.psi * budget)


def likelihood_ratio_test(f1, f2) -> HypothesisTest:
    """Reject the null wherever ``f2 >= f1`` (ties go to the alternative)."""
    P, Q = as_probs(f1), as_probs(f2)
    if P.shape != Q.shape:
        raise InputError("length mismatch")
    return HypothesisTest((Q >= P).astype(float))


def error_sum(test: HypothesisTest, f1, f2) -> float:
    """Type-1 plus type-2 error: ``f1 . psi + f2 . (1 - psi)``."""
    P, Q = as_probs(f1), as_probs(f2)
    if not P.shape == Q.shape == test.psi.shape:
        raise InputError("length mismatch")
    return float(P @ test.psi + Q @ (1.0 - test.psi))


def best_binary_error_sum(f1, f2) -> float:
    """Smallest error sum over all binary tests, by exhaustive enumeration."""
    P, Q = as_probs(f1), as_probs(f2)
    if P.size > 20:
        raise InputError("exhaustive search limited to 20 outcomes")
    bits = np.array(list(product((0.0, 1.0), repeat=P.size)))
    return float((bits @ P + (1.0 - bits) @ Q).min())


def verify_equivalence(setting: DelegationSetting, contract: Contract) -> bool:
    """Check the contract is a maximum-power test with the matching error sum.

    The error sum of ``t / B`` must equal ``1 - (c2 - c1) / B`` and must not
    exceed that of the likelihood-ratio test.
    """
    if len(setting) != 2:
        raise InputError("equivalence check needs exactly two actions")
    if contract.budget <= 0:
        return False
    f1, f2 = setting.F
    c1, c2 = setting.costs
    err = error_sum(contract_to_test(contract), f1, f2)
    identity = abs(err - (1.0 - (c2 - c1) / contract.budget)) <= EQUIV_TOL
    lr = error_sum(likelihood_ratio_test(f1, f2), f1, f2)
    return bool(identity and err <= lr + EQUIV_TOL)


def min_error_sum(f1, f2) -> float:
    """The attainable lower bound ``1 - TV(f1, f2)``."""
    return 1.0 - total_variation(f1, f2)


# keep test collectors from treating this as a test function
test_to_contract.__test__ = False
