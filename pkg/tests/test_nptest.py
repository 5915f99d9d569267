import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delegated_contracts import (
    Contract,
    DelegationSetting,
    HypothesisTest,
    InputError,
    contract_to_test,
    error_sum,
    likelihood_ratio_test,
    min_budget_lp,
    test_to_contract,
    total_variation,
    verify_equivalence,
)
from delegated_contracts.nptest import best_binary_error_sum, min_error_sum

from generators import random_two_action


def test_hand_example():
    f1, f2 = [0.75, 0.25], [0.25, 0.75]
    lr = likelihood_ratio_test(f1, f2)
    np.testing.assert_array_equal(lr.psi, [0, 1])
    assert error_sum(lr, f1, f2) == pytest.approx(0.5)
    assert min_error_sum(f1, f2) == pytest.approx(0.5)


def test_trivial_tests_have_error_one():
    f1, f2 = [0.1, 0.2, 0.7], [0.3, 0.3, 0.4]
    assert error_sum(HypothesisTest([0, 0, 0]), f1, f2) == pytest.approx(1)
    assert error_sum(HypothesisTest([1, 1, 1]), f1, f2) == pytest.approx(1)


def test_round_trip(coin_pair):
    t = Contract([0.0, 0.5, 2.0])
    psi = contract_to_test(t)
    np.testing.assert_allclose(psi.psi, [0, 0.25, 1])
    np.testing.assert_allclose(test_to_contract(psi, 2.0).payments, t.payments)
    assert not psi.is_binary
    assert HypothesisTest([0, 1]).is_binary


def test_validation():
    with pytest.raises(InputError):
        HypothesisTest([0.5, 1.5])
    with pytest.raises(InputError):
        contract_to_test(Contract.zeros(2))
    with pytest.raises(InputError):
        test_to_contract(HypothesisTest([0, 1]), 0)
    with pytest.raises(InputError):
        error_sum(HypothesisTest([0, 1]), [0.5, 0.5], [0.2, 0.3, 0.5])
    with pytest.raises(InputError):
        verify_equivalence(DelegationSetting.from_arrays([[1, 0], [0, 1], [0.5, 0.5]], [0, 1, 2]),
                           Contract([0, 1]))


def test_verify_equivalence(coin_pair):
    assert verify_equivalence(coin_pair, min_budget_lp(coin_pair, 2).contract)
    assert not verify_equivalence(coin_pair, Contract([0.0, 3.0]))
    assert not verify_equivalence(coin_pair, Contract.zeros(1))


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_lr_test_attains_one_minus_tv_and_beats_all_binary_tests(seed):
    f1, f2, c1, c2 = random_two_action(np.random.default_rng(seed))
    lr = likelihood_ratio_test(f1, f2)
    assert error_sum(lr, f1, f2) == pytest.approx(1 - total_variation(f1, f2), abs=1e-12)
    assert best_binary_error_sum(f1, f2) == pytest.approx(error_sum(lr, f1, f2), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_randomized_tests_never_beat_lr(seed):
    rng = np.random.default_rng(seed)
    f1, f2, _, _ = random_two_action(rng)
    psi = HypothesisTest(rng.uniform(0, 1, len(f1)))
    assert error_sum(psi, f1, f2) >= min_error_sum(f1, f2) - 1e-12


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_optimal_contract_is_max_power_test(seed):
    f1, f2, c1, c2 = random_two_action(np.random.default_rng(seed))
    s = DelegationSetting.from_arrays([f1, f2], [c1, c2])
    rep = min_budget_lp(s, 2)
    if not rep.optimal:
        return
    assert verify_equivalence(s, rep.contract)
