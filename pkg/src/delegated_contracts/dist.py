"""Discrete outcome distributions: binomials, mixtures, distances, MLR structure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .core import DelegationSetting, OutcomeDistribution, as_probs
from .errors import InputError, PreconditionError

MLR_RTOL = 1e-12
SLOPE_TOL = 1e-12
EQUAL_TOL = 1e-12


@dataclass(frozen=True)
class CrossingPoint:
    """First outcome at which the costlier distribution weakly dominates."""

    j_star: int


def binomial_pmf(m: int, p: float) -> OutcomeDistribution:
    """Binomial(m, p) pmf over 0..m, computed in log space.

    Parameters
    ----------
    m : int
        Number of trials (validation set size), ``m >= 1``.
    p : float
        Success probability in ``[0, 1]``.
    """
    if m < 1:
        raise InputError("m must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise InputError(f"p={p!r} outside [0, 1]")
    probs = np.zeros(m + 1)
    if p == 0.0:
        probs[0] = 1.0
        return OutcomeDistribution(probs)
    if p == 1.0:
        probs[m] = 1.0
        return OutcomeDistribution(probs)
    j = np.arange(m + 1)
    logpmf = (
        gammaln(m + 1) - gammaln(j + 1) - gammaln(m - j + 1)
        + j * np.log(p) + (m - j) * np.log1p(-p)
    )
    # normalizing in log space absorbs the lgamma round-off for large m
    return OutcomeDistribution(np.exp(logpmf - logsumexp(logpmf)))


def binomial_mixture(m: int, accuracies) -> OutcomeDistribution:
    """Uniform mixture of Binomial(m, a) over the given accuracies."""
    accuracies = list(accuracies)
    if not accuracies:
        raise InputError("need at least one accuracy")
    probs = np.mean([binomial_pmf(m, float(a)).probs for a in accuracies], axis=0)
    return OutcomeDistribution(probs / probs.sum())


def _pair(P, Q):
    P, Q = as_probs(P), as_probs(Q)
    if P.shape != Q.shape:
        raise InputError(f"length mismatch: {P.size} vs {Q.size}")
    return P, Q


def total_variation(P, Q) -> float:
    """TV distance as the sum of positive parts of Q - P."""
    P, Q = _pair(P, Q)
    return float(np.clip(Q - P, 0.0, None).sum())


def survival(P, j: int) -> float:
    """Pr[outcome > j] under P; ``j = -1`` gives 1."""
    P = as_probs(P)
    m = P.size - 1
    if not -1 <= j <= m:
        raise InputError(f"j={j} outside [-1, {m}]")
    if j == -1:
        return 1.0
    return float(P[j + 1:].sum())


def is_mlr(P, Q) -> bool:
    """True when Q/P is nondecreasing in the outcome (P precedes Q).

    Entries with ``P = 0 < Q`` count as an infinite ratio and entries with
    ``Q = 0 < P`` as a zero ratio; outcomes outside both supports are skipped.
    """
    P, Q = _pair(P, Q)
    support = np.flatnonzero((P > 0) | (Q > 0))
    Ps, Qs = P[support], Q[support]
    # Q[l]/P[l] >= Q[k]/P[k]  <=>  Q[l] P[k] >= Q[k] P[l], valid with zeros
    lhs = Qs[1:] * Ps[:-1]
    rhs = Qs[:-1] * Ps[1:]
    return bool(np.all(lhs >= rhs * (1.0 - MLR_RTOL)))


def distributions_equal(P, Q) -> bool:
    return total_variation(P, Q) <= EQUAL_TOL


def is_mlrp_setting(setting: DelegationSetting) -> bool:
    """Every strictly cheaper action's pmf must be MLR-dominated and distinct."""
    F, c = setting.F, setting.costs
    for hi in range(len(setting)):
        for lo in range(hi):
            if c[lo] < c[hi]:
                if distributions_equal(F[lo], F[hi]) or not is_mlr(F[lo], F[hi]):
                    return False
    return True


def crossing_point(P, Q) -> CrossingPoint:
    """Crossing point of Q over P for an MLR pair ``P < Q``."""
    P, Q = _pair(P, Q)
    if distributions_equal(P, Q):
        raise PreconditionError("crossing point undefined for equal distributions")
    if not is_mlr(P, Q):
        raise PreconditionError("distributions are not MLR-ordered")
    j_star = int(np.flatnonzero(Q >= P)[0])
    if j_star == 0 or not Q[j_star - 1] < P[j_star - 1]:
        raise PreconditionError("no crossing point: Q does not start below P")
    return CrossingPoint(j_star)


def crossing_survivals(setting: DelegationSetting) -> list[tuple[float, float]]:
    """(cost, s_i) for every action, with s_i = Pr_i[outcome >= j*].

    ``j*`` is the crossing point of the costliest action over the runner-up.
    """
    if not is_mlrp_setting(setting):
        raise PreconditionError("setting does not satisfy MLRP")
    F = setting.F
    j_star = crossing_point(F[-2], F[-1]).j_star
    return [(float(c), survival(f, j_star - 1)) for c, f in zip(setting.costs, F)]


def is_concave_chain(points) -> bool:
    """True when successive slopes of the (x, y) chain are nonincreasing."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InputError("points must be a sequence of (x, y) pairs")
    dx = np.diff(pts[:, 0])
    if np.any(dx <= 0):
        raise InputError("x coordinates must be strictly increasing")
    if len(pts) <= 2:
        return True
    slopes = np.diff(pts[:, 1]) / dx
    return bool(np.all(np.diff(slopes) <= SLOPE_TOL))
