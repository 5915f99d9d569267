"""Dense two-phase primal simplex and a depth-first branch-and-bound for binaries.

Problems are small (a few hundred rows at most), so everything is a dense
numpy tableau.  Pivoting uses the largest-coefficient rule and switches to
Bland's rule permanently after a run of degenerate pivots.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, NumericalError, ResourceError

FEAS_TOL = 1e-7
OPT_TOL = 1e-9
PIVOT_TOL = 1e-11
HARRIS_TOL = 1e-9
DEGENERATE_STREAK = 8
REFRESH_EVERY = 50
MAX_NODES = 2 ** 26


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


_SENSES = {"<=", ">=", "="}


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """``min`` or ``max`` of ``objective @ x`` subject to row constraints and bounds.

    ``senses[i]`` is one of ``"<="``, ``">="``, ``"="``.  Lower bounds must be
    finite; upper bounds may be ``inf``.
    """

    objective: np.ndarray
    A: np.ndarray
    senses: tuple[str, ...]
    rhs: np.ndarray
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    maximize: bool = False

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        n = c.size
        A = np.asarray(self.A, dtype=float)
        if A.size == 0:
            A = A.reshape(0, n)
        if A.ndim != 2 or A.shape[1] != n:
            raise InputError(f"constraint matrix shape {A.shape} incompatible with {n} variables")
        b = np.asarray(self.rhs, dtype=float).ravel()
        senses = tuple(self.senses)
        if b.size != A.shape[0] or len(senses) != A.shape[0]:
            raise InputError("rhs and senses must have one entry per constraint row")
        if not set(senses) <= _SENSES:
            raise InputError(f"unknown row sense in {set(senses) - _SENSES}")
        lo = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float).ravel()
        hi = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).ravel()
        if lo.size != n or hi.size != n:
            raise InputError("bounds must have one entry per variable")
        if not np.all(np.isfinite(lo)):
            raise InputError("lower bounds must be finite")
        if np.any(lo > hi):
            raise InputError("lower bound exceeds upper bound")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise InputError("objective, matrix and rhs must be finite")
        for name, val in (("objective", c), ("A", A), ("rhs", b), ("lower", lo), ("upper", hi)):
            val = val.copy()
            val.setflags(write=False)
            object.__setattr__(self, name, val)
        object.__setattr__(self, "senses", senses)

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def with_bounds(self, lower, upper) -> "LinearProgram":
        return LinearProgram(self.objective, self.A, self.senses, self.rhs,
                             lower, upper, self.maximize)

    def residuals(self, x) -> np.ndarray:
        """Constraint violations of ``x`` (0 where satisfied), rows then bounds."""
        Ax = self.A @ x
        viol = np.zeros(self.n_rows)
        for i, s in enumerate(self.senses):
            if s == "<=":
                viol[i] = max(Ax[i] - self.rhs[i], 0.0)
            elif s == ">=":
                viol[i] = max(self.rhs[i] - Ax[i], 0.0)
            else:
                viol[i] = abs(Ax[i] - self.rhs[i])
        bounds = np.maximum(self.lower - x, 0.0) + np.maximum(x - self.upper, 0.0)
        return np.concatenate([viol, bounds])


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: Status
    x: np.ndarray | None = None
    objective_value: float | None = None
    basis: tuple[int, ...] = ()
    iterations: int = 0
    nodes: int = field(default=0)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    """Standard-form tableau ``min c y, A y = b, y >= 0`` with an explicit basis."""

    def __init__(self, A, b, basis):
        self.A = A
        self.b = b
        self.basis = list(basis)
        self.iterations = 0
        self.refresh()

    def refresh(self):
        B = self.A[:, self.basis]
        try:
            self.T = np.linalg.solve(B, self.A)
            self.rhs = np.linalg.solve(B, self.b)
        except np.linalg.LinAlgError as exc:
            raise NumericalError("singular basis matrix") from exc
        self.rhs[np.abs(self.rhs) < 1e-13] = 0.0

    def reduced_costs(self, c):
        return c - c[self.basis] @ self.T

    def run(self, c, allowed, cap):
        """Minimize ``c y`` over the current basis; returns False if unbounded."""
        bland = False
        streak = 0
        since_refresh = 0
        d = self.reduced_costs(c)
        while True:
            cand = np.flatnonzero((d < -OPT_TOL) & allowed)
            if cand.size == 0:
                # confirm against a fresh factorization before declaring optimality
                self.refresh()
                d = self.reduced_costs(c)
                cand = np.flatnonzero((d < -OPT_TOL) & allowed)
                if cand.size == 0:
                    return True
            if self.iterations >= cap:
                raise NumericalError(f"simplex exceeded {cap} iterations")
            e = int(cand[0]) if bland else int(cand[np.argmin(d[cand])])
            col = self.T[:, e]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return False
            rhs = np.maximum(self.rhs[rows], 0.0)
            ratios = rhs / col[rows]
            best = ratios.min()
            if bland:
                # smallest basic index among ties guarantees termination
                tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
                r = int(min(tied, key=lambda i: self.basis[i]))
            else:
                # Harris two-pass test: relax the bound slightly, then take the
                # largest pivot among rows that fit within the relaxed step
                cap_step = ((rhs + HARRIS_TOL) / col[rows]).min()
                fits = rows[ratios <= cap_step]
                r = int(fits[np.argmax(col[fits])])
            if best <= 1e-12:
                streak += 1
                if streak >= DEGENERATE_STREAK:
                    bland = True
            else:
                streak = 0
            piv = self.T[r, e]
            self.T[r] /= piv
            self.rhs[r] /= piv
            others = np.arange(self.T.shape[0]) != r
            factors = self.T[others, e].copy()
            self.T[others] -= np.outer(factors, self.T[r])
            self.rhs[others] -= factors * self.rhs[r]
            self.rhs[(self.rhs < 0) & (self.rhs > -1e-12)] = 0.0
            self.basis[r] = e
            self.iterations += 1
            since_refresh += 1
            if since_refresh >= REFRESH_EVERY:
                self.refresh()
                since_refresh = 0
            d = self.reduced_costs(c)

    def drop_row(self, r):
        """Remove basis position ``r`` whose tableau row is redundant.

        The dropped constraint is the one with the largest weight in row ``r``
        of the basis inverse, which keeps the reduced basis nonsingular.
        """
        e_r = np.zeros(len(self.basis))
        e_r[r] = 1.0
        weights = np.linalg.solve(self.A[:, self.basis].T, e_r)
        i = int(np.argmax(np.abs(weights)))
        keep = np.arange(self.A.shape[0]) != i
        self.A = self.A[keep]
        self.b = self.b[keep]
        del self.basis[r]
        self.refresh()


def _standard_form(lp: LinearProgram):
    """Shift by lower bounds, add bound rows, flip negative rhs, add slacks."""
    n = lp.n_vars
    c = -lp.objective if lp.maximize else lp.objective.copy()
    rows = [lp.A]
    b = [lp.rhs - lp.A @ lp.lower]
    senses = list(lp.senses)
    finite_ub = np.flatnonzero(np.isfinite(lp.upper))
    if finite_ub.size:
        U = np.zeros((finite_ub.size, n))
        U[np.arange(finite_ub.size), finite_ub] = 1.0
        rows.append(U)
        b.append(lp.upper[finite_ub] - lp.lower[finite_ub])
        senses += ["<="] * finite_ub.size
    A = np.vstack(rows) if rows else np.zeros((0, n))
    b = np.concatenate(b) if b else np.zeros(0)
    A = A.copy()
    flip = {"<=": ">=", ">=": "<=", "=": "="}
    for i in np.flatnonzero(b < 0):
        A[i] *= -1
        b[i] *= -1
        senses[i] = flip[senses[i]]
    # equilibrate rows: binomial tails put entries near 1e-30 next to O(1) ones
    scale = np.abs(A).max(axis=1) if A.size else np.zeros(0)
    scale[scale == 0] = 1.0
    A /= scale[:, None]
    b = b / scale
    m_rows = A.shape[0]
    n_slack = sum(s != "=" for s in senses)
    S = np.zeros((m_rows, n_slack))
    basis = [-1] * m_rows
    k = 0
    for i, s in enumerate(senses):
        if s == "<=":
            S[i, k] = 1.0
            basis[i] = n + k
            k += 1
        elif s == ">=":
            S[i, k] = -1.0
            k += 1
    need_art = [i for i in range(m_rows) if basis[i] < 0]
    Art = np.zeros((m_rows, len(need_art)))
    for k, i in enumerate(need_art):
        Art[i, k] = 1.0
        basis[i] = n + n_slack + k
    A_std = np.hstack([A, S, Art])
    c_std = np.concatenate([c, np.zeros(n_slack + len(need_art))])
    return A_std, b, c_std, basis, n, n + n_slack


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` to optimality, or certify infeasibility / unboundedness."""
    A, b, c, basis, n, n_real = _standard_form(lp)
    m_rows, n_cols = A.shape
    cap = 50 * (m_rows + n_cols) + 50
    if m_rows == 0:
        d = c[:n]
        if np.any(d < -OPT_TOL):
            return LpSolution(Status.UNBOUNDED)
        x = lp.lower.copy()
        return LpSolution(Status.OPTIMAL, x, float(lp.objective @ x), ())

    tab = _Tableau(A, b, basis)
    allowed = np.ones(n_cols, dtype=bool)
    if n_cols > n_real:
        phase1 = np.zeros(n_cols)
        phase1[n_real:] = 1.0
        tab.run(phase1, allowed, cap)
        if tab.rhs.min() < -FEAS_TOL * max(1.0, np.abs(tab.rhs).max()):
            raise NumericalError("phase 1 lost primal feasibility")
        infeas = float(phase1[tab.basis] @ tab.rhs)
        if infeas > FEAS_TOL * max(1.0, np.abs(b).max()):
            return LpSolution(Status.INFEASIBLE, iterations=tab.iterations)
        # drive zero-level artificials out of the basis; drop redundant rows
        r = 0
        while r < len(tab.basis):
            if tab.basis[r] >= n_real:
                row = tab.T[r, :n_real]
                cand = np.flatnonzero(np.abs(row) > 1e-9)
                if cand.size:
                    e = int(cand[np.argmax(np.abs(row[cand]))])
                    tab.basis[r] = e
                    tab.refresh()
                else:
                    tab.drop_row(r)
                    continue
            r += 1
        allowed[n_real:] = False
    if not tab.run(c, allowed, cap):
        return LpSolution(Status.UNBOUNDED, iterations=tab.iterations)

    y = np.zeros(n_cols)
    y[tab.basis] = np.clip(tab.rhs, 0.0, None)
    x = lp.lower + y[:n]
    x = np.minimum(x, lp.upper)
    viol = lp.residuals(x)
    if viol.size and viol.max() > FEAS_TOL * max(1.0, np.abs(lp.rhs).max(initial=0.0)):
        raise NumericalError(f"primal residual {viol.max():.3g} exceeds tolerance")
    x.setflags(write=False)
    return LpSolution(Status.OPTIMAL, x, float(lp.objective @ x), tuple(tab.basis),
                      iterations=tab.iterations)


def solve_binary(lp: LinearProgram, binary_vars: Iterable[int]) -> LpSolution:
    """Depth-first branch-and-bound with the listed variables restricted to {0, 1}.

    Every node solves the LP relaxation with tightened bounds; nodes whose
    relaxation cannot beat the incumbent are pruned.
    """
    binary = sorted(set(int(v) for v in binary_vars))
    if any(v < 0 or v >= lp.n_vars for v in binary):
        raise InputError("binary variable index out of range")
    if np.any(lp.lower[binary] < 0) or np.any(lp.upper[binary] > 1):
        raise InputError("binary variables must have bounds within [0, 1]")
    sign = -1.0 if lp.maximize else 1.0
    lo0 = lp.lower.copy()
    hi0 = lp.upper.copy()
    lo0[binary] = np.ceil(lo0[binary] - 1e-12)
    hi0[binary] = np.floor(hi0[binary] + 1e-12)
    if np.any(lo0 > hi0):
        return LpSolution(Status.INFEASIBLE)

    best_val = np.inf
    best_fix = None
    nodes = 0
    iterations = 0
    stack = [(lo0, hi0)]
    while stack:
        lo, hi = stack.pop()
        nodes += 1
        if nodes > MAX_NODES:
            raise ResourceError(f"branch-and-bound exceeded {MAX_NODES} nodes")
        sol = solve_lp(lp.with_bounds(lo, hi))
        iterations += sol.iterations
        if sol.status is Status.INFEASIBLE:
            continue
        if sol.status is Status.UNBOUNDED:
            if nodes == 1:
                return LpSolution(Status.UNBOUNDED, nodes=nodes, iterations=iterations)
            continue
        val = sign * sol.objective_value
        if val >= best_val - OPT_TOL * max(1.0, abs(best_val)):
            continue
        xb = sol.x[binary]
        frac = np.abs(xb - np.round(xb))
        if frac.max(initial=0.0) <= FEAS_TOL:
            best_val = val
            best_fix = np.round(xb)
            continue
        k = int(np.argmax(frac))
        v = binary[k]
        near = float(np.round(xb[k]))
        for value in (1.0 - near, near):  # nearer child is pushed last, explored first
            lo_c, hi_c = lo.copy(), hi.copy()
            lo_c[v] = hi_c[v] = value
            stack.append((lo_c, hi_c))

    if best_fix is None:
        return LpSolution(Status.INFEASIBLE, nodes=nodes, iterations=iterations)
    # re-solve with the binaries pinned so the continuous part is an exact vertex
    lo, hi = lp.lower.copy(), lp.upper.copy()
    lo[binary] = hi[binary] = best_fix
    final = solve_lp(lp.with_bounds(lo, hi))
    if not final.optimal:
        raise NumericalError("incumbent became infeasible when re-solved")
    x = final.x.copy()
    x[binary] = best_fix
    x.setflags(write=False)
    return LpSolution(Status.OPTIMAL, x, float(lp.objective @ x), final.basis,
                      iterations=iterations + final.iterations, nodes=nodes)


def build_lp(
    objective: Sequence[float],
    *,
    A_ub=None, b_ub=None,
    A_ge=None, b_ge=None,
    A_eq=None, b_eq=None,
    lower=None, upper=None,
    maximize: bool = False,
) -> LinearProgram:
    """Convenience constructor stacking ``<=``, ``>=`` and ``=`` blocks."""
    n = len(objective)
    blocks, rhs, senses = [], [], []
    for A, b, s in ((A_ub, b_ub, "<="), (A_ge, b_ge, ">="), (A_eq, b_eq, "=")):
        if A is None:
            continue
        A = np.atleast_2d(np.asarray(A, dtype=float))
        blocks.append(A)
        rhs.append(np.asarray(b, dtype=float).ravel())
        senses += [s] * A.shape[0]
    A = np.vstack(blocks) if blocks else np.zeros((0, n))
    b = np.concatenate(rhs) if rhs else np.zeros(0)
    return LinearProgram(np.asarray(objective, dtype=float), A, tuple(senses), b,
                         lower, upper, maximize)
