import itertools
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delegated_contracts import Cnf3, InputError, maximin_objective, parse_dimacs, reduce_3sat, verify_reduction
from delegated_contracts.hardness import (
    EPSILON,
    assignment_phi,
    is_satisfiable,
    max_maximin_exhaustive,
    read_dimacs,
    to_dimacs,
)

CNF_DIR = Path(__file__).parent / "data" / "cnf"


def truth_table_sat(cnf):
    """Independent satisfiability oracle over every assignment."""
    for x in itertools.product([False, True], repeat=cnf.num_vars):
        if all(any(x[abs(z) - 1] == (z > 0) for z in cl) for cl in cnf.clauses):
            return True
    return False


def test_dimacs_round_trip():
    text = "c demo\np cnf 4 2\n1 -2 3 0\n-1 2 4 0\n"
    cnf = parse_dimacs(text)
    assert cnf.num_vars == 4 and cnf.clauses == ((1, -2, 3), (-1, 2, 4))
    assert parse_dimacs(to_dimacs(cnf)) == cnf


def test_dimacs_multiline_clause():
    assert parse_dimacs("p cnf 3 1\n1 2\n3 0\n").clauses == ((1, 2, 3),)


@pytest.mark.parametrize("text", [
    "1 2 3 0\n",
    "p cnf 3 2\n1 2 3 0\n",
    "p cnf 3 1\n1 2 3\n",
    "p cnf 3 1\n1 2 0\n",
    "p cnf 3 1\n1 1 2 0\n",
    "p cnf 3 1\n1 -1 2 0\n",
    "p cnf 3 1\n1 2 4 0\n",
    "p cnf 3 1\n1 x 3 0\n",
    "p sat 3 1\n1 2 3 0\n",
])
def test_dimacs_rejects(text):
    with pytest.raises(InputError):
        parse_dimacs(text)


def test_reduction_rows_are_distributions():
    cnf = Cnf3(4, ((1, 2, 3), (-1, -2, -3), (1, -3, 4), (-2, -3, -4)))
    setting, inst = reduce_3sat(cnf)
    assert len(setting) == 5 and setting.m + 1 == 4 + 3
    np.testing.assert_allclose(setting.F.sum(axis=1), 1, atol=1e-12)
    assert np.all(setting.F >= 0)
    assert setting.costs.tolist() == [0, 0, 0, 0, 1]
    np.testing.assert_allclose(inst.A, setting.F[-1] - setting.F[:-1])
    assert inst.labels[-3:] == ("pos", "neg", "const")
    assert inst.threshold == pytest.approx(1 - EPSILON * (1 + 3 / 4) + EPSILON / 4)


def test_row_value_counts_true_literals():
    # hand-derived: (A phi_x)_i = Q_pos + (eps/m) * (true literals in clause i)
    cnf = Cnf3(5, ((1, -2, 3), (-1, 4, -5), (2, 3, 4)))
    _, inst = reduce_3sat(cnf)
    m = cnf.num_vars
    for x in itertools.product([0, 1], repeat=m):
        values = inst.A @ assignment_phi(x)
        expect = inst.q_pos + EPSILON / m * np.array(cnf.true_literals(x))
        np.testing.assert_allclose(values, expect, atol=1e-12)


def test_satisfying_assignment_meets_threshold():
    cnf = Cnf3(3, ((1, 2, 3), (-1, 2, 3)))
    _, inst = reduce_3sat(cnf)
    assert maximin_objective(inst, assignment_phi([0, 1, 0])) >= inst.threshold - 1e-12
    assert maximin_objective(inst, assignment_phi([0, 0, 0])) < inst.threshold - 1e-6


def test_maximin_input_validation():
    _, inst = reduce_3sat(Cnf3(3, ((1, 2, 3),)))
    with pytest.raises(InputError):
        maximin_objective(inst, [1, 0])
    with pytest.raises(InputError):
        maximin_objective(inst, [0.5] * 6)
    with pytest.raises(InputError):
        Cnf3(2, ((1, 2, -1),))


def test_fixed_suite_labels_match_truth_table():
    files = sorted(CNF_DIR.glob("*.cnf"))
    assert len(files) == 20
    for path in files:
        cnf = read_dimacs(path)
        assert truth_table_sat(cnf) == path.stem.endswith("_sat")
        assert is_satisfiable(cnf) == truth_table_sat(cnf)


def test_all_eight_clauses_unsat():
    clauses = tuple(tuple(s * v for s, v in zip(signs, (1, 2, 3)))
                    for signs in itertools.product([1, -1], repeat=3))
    cnf = Cnf3(3, clauses)
    assert not is_satisfiable(cnf)
    _, inst = reduce_3sat(cnf)
    assert max_maximin_exhaustive(inst) < inst.threshold - 1e-6
    assert verify_reduction(cnf)


_clause = st.lists(st.integers(1, 6), min_size=3, max_size=3, unique=True).flatmap(
    lambda vs: st.tuples(*[st.sampled_from([v, -v]) for v in vs]))


@settings(max_examples=40, deadline=None)
@given(clauses=st.lists(_clause, min_size=1, max_size=14))
def test_reduction_on_random_formulas(clauses):
    cnf = Cnf3(6, tuple(clauses))
    assert is_satisfiable(cnf) == truth_table_sat(cnf)
    assert verify_reduction(cnf)
