"""Reduction from 3SAT to optimal all-or-nothing contract design.

Outcomes are ordered ``x_1..x_m, pos, neg, const``.  Each clause becomes a
zero-cost action and the target is a single unit-cost action, so the maximin
matrix is simply ``A_i = Q - P_i``.  A formula is satisfiable iff
``max_phi min_i (A phi)_i >= Q_pos + eps / m`` over binary ``phi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .core import DelegationSetting
from .errors import InputError, ResourceError

EPSILON = 0.1
MAX_VERIFY_OUTCOMES = 22
MAX_SAT_VARS = 20
_CHUNK = 1 << 16


@dataclass(frozen=True)
class Cnf3:
    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        clauses = tuple(tuple(int(z) for z in cl) for cl in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 1:
            raise InputError("need at least one variable")
        if not clauses:
            raise InputError("need at least one clause")
        for cl in clauses:
            if len(cl) != 3:
                raise InputError(f"clause {cl} does not have exactly 3 literals")
            if any(z == 0 or abs(z) > self.num_vars for z in cl):
                raise InputError(f"clause {cl} has a literal outside 1..{self.num_vars}")
            if len({abs(z) for z in cl}) != 3:
                raise InputError(f"clause {cl} repeats a variable")

    def is_satisfied_by(self, x) -> bool:
        return all(self.true_literals(x))

    def true_literals(self, x) -> list[int]:
        """Number of true literals in every clause under assignment ``x``."""
        x = np.asarray(x, dtype=bool)
        return [sum(x[abs(z) - 1] == (z > 0) for z in cl) for cl in self.clauses]


def parse_dimacs(text: str) -> Cnf3:
    """Parse DIMACS CNF; comment lines start with ``c``."""
    num_vars = num_clauses = None
    literals: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith(("c", "%")):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError(f"bad header line: {raw!r}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise InputError("clause before 'p cnf' header")
        try:
            literals.extend(int(tok) for tok in line.split())
        except ValueError as exc:
            raise InputError(f"bad clause line: {raw!r}") from exc
    if num_vars is None:
        raise InputError("missing 'p cnf' header")
    clauses, current = [], []
    for z in literals:
        if z == 0:
            clauses.append(tuple(current))
            current = []
        else:
            current.append(z)
    if current:
        raise InputError("last clause is not zero-terminated")
    if len(clauses) != num_clauses:
        raise InputError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return Cnf3(num_vars, tuple(clauses))


def read_dimacs(path) -> Cnf3:
    return parse_dimacs(Path(path).read_text())


def to_dimacs(cnf: Cnf3) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines += [" ".join(str(z) for z in cl) + " 0" for cl in cnf.clauses]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class MaximinInstance:
    A: np.ndarray
    q_pos: float
    epsilon: float = EPSILON
    labels: tuple[str, ...] = ()

    @property
    def threshold(self) -> float:
        """Satisfiability threshold ``Q_pos + eps / m``."""
        m = self.A.shape[1] - 3
        return self.q_pos + self.epsilon / m


def _target_pmf(m: int, eps: float) -> np.ndarray:
    Q = np.full(m + 3, eps / m)
    Q[m] = 1.0 - eps * (1.0 + 3.0 / m)
    Q[m + 1] = 0.0
    Q[m + 2] = 3.0 * eps / m
    return Q


def _clause_pmf(clause, m: int, eps: float) -> np.ndarray:
    P = np.full(m + 3, eps / m)
    k = 0
    for z in clause:
        if z > 0:
            P[z - 1] = 0.0
        else:
            P[-z - 1] = 2.0 * eps / m
            k += 1
    P[m] = 0.0
    P[m + 2] = (3 - k) * eps / m
    # chosen so the pmf sums to one: the other entries total eps (1 + k/m)
    P[m + 1] = 1.0 - eps * (1.0 + k / m)
    return P


def reduce_3sat(cnf: Cnf3) -> tuple[DelegationSetting, MaximinInstance]:
    """Contract setting and maximin matrix encoding ``cnf``.

    Clause actions come first (cost 0, ids 1..n); the target is the last
    action (cost 1, id n+1).
    """
    m = cnf.num_vars
    if m < 3:
        raise InputError("reduction needs at least 3 variables")
    eps = EPSILON
    Q = _target_pmf(m, eps)
    P = np.vstack([_clause_pmf(cl, m, eps) for cl in cnf.clauses])
    F = np.vstack([P, Q])
    costs = [0.0] * len(cnf.clauses) + [1.0]
    setting = DelegationSetting.from_arrays(F, costs)
    A = Q - P
    A.setflags(write=False)
    labels = tuple(f"x{j + 1}" for j in range(m)) + ("pos", "neg", "const")
    return setting, MaximinInstance(A, float(Q[m]), eps, labels)


def assignment_phi(x) -> np.ndarray:
    """Binary phi for assignment x: variables as given, pos=1, neg=0, const=1."""
    return np.concatenate([np.asarray(x, dtype=float), [1.0, 0.0, 1.0]])


def maximin_objective(instance: MaximinInstance, phi) -> float:
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (instance.A.shape[1],):
        raise InputError(f"phi must have length {instance.A.shape[1]}")
    if np.any((phi != 0) & (phi != 1)):
        raise InputError("phi must be binary")
    return float((instance.A @ phi).min())


def max_maximin_exhaustive(instance: MaximinInstance) -> float:
    """Maximum of ``min_i (A phi)_i`` over every binary phi."""
    n_out = instance.A.shape[1]
    if n_out > MAX_VERIFY_OUTCOMES:
        raise ResourceError(f"exhaustive search limited to {MAX_VERIFY_OUTCOMES} outcomes")
    shifts = np.arange(n_out, dtype=np.int64)
    best = -np.inf
    for start in range(0, 1 << n_out, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, 1 << n_out), dtype=np.int64)
        bits = ((idx[:, None] >> shifts) & 1).astype(float)
        best = max(best, float((bits @ instance.A.T).min(axis=1).max()))
    return best


def is_satisfiable(cnf: Cnf3) -> bool:
    """Brute-force satisfiability over all 2^m assignments."""
    if cnf.num_vars > MAX_SAT_VARS:
        raise ResourceError(f"brute-force SAT limited to {MAX_SAT_VARS} variables")
    return any(cnf.is_satisfied_by(x) for x in product((0, 1), repeat=cnf.num_vars))


def verify_reduction(cnf: Cnf3) -> bool:
    """True iff satisfiability agrees with the maximin threshold test."""
    _, inst = reduce_3sat(cnf)
    # tolerance only absorbs float round-off; real gaps are multiples of eps/m
    meets = max_maximin_exhaustive(inst) >= inst.threshold - 1e-12
    return meets == is_satisfiable(cnf)
