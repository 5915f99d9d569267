"""Random instance generators shared by the test modules."""

import numpy as np

from delegated_contracts import CurveModel, DelegationSetting, binomial_mixture, build_setting


def random_pmf(rng, size, alpha=1.0):
    return rng.dirichlet(np.full(size, alpha))


def random_mixture_setting(rng, max_actions=5, max_m=12):
    """Cost-sorted setting whose rows are binomial mixtures."""
    N = int(rng.integers(2, max_actions + 1))
    m = int(rng.integers(1, max_m + 1))
    F = [binomial_mixture(m, rng.uniform(0, 1, rng.integers(1, 4))).probs for _ in range(N)]
    costs = np.sort(rng.uniform(0, 2, N))
    return DelegationSetting.from_arrays(F, costs)


def random_two_action(rng, max_outcomes=12):
    size = int(rng.integers(2, max_outcomes + 1))
    f1, f2 = random_pmf(rng, size), random_pmf(rng, size)
    c1 = rng.uniform(0, 1)
    c2 = c1 + rng.uniform(0.01, 1)
    return f1, f2, c1, c2


def random_power_law_setting(rng):
    """MLRP setting: binomials whose means follow a random increasing power law."""
    c = rng.uniform(0.2, 0.8)
    model = CurveModel(rng.uniform(0.7, 0.95), rng.uniform(0.2, 0.6) * 100**c, c)
    N = int(rng.integers(3, 7))
    m = int(rng.integers(5, 31))
    sizes = np.sort(rng.choice(np.arange(10, 2001), N, replace=False))
    return build_setting(model, m, sizes, rng.uniform(0.001, 0.01))
