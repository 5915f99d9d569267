"""Learning curves: accuracy samples, power-law fits, and settings built from them.

Also holds the partial-information harness: the principal designs a contract
from an estimated curve while the agent responds to the true one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import optimize

from .core import ActionSpec, DelegationSetting, best_response, principal_value
from .dist import binomial_mixture, binomial_pmf
from .errors import DegenerateFitError, FitError, InputError
from .solvers import budget_optimal

C_BOUNDS = (0.01, 2.0)
CLAMP = (0.001, 0.999)
_GRID = 200


@dataclass(frozen=True, eq=False)
class CurveSamples:
    """Accuracy records ``(n, accuracy)``; several records per ``n`` are allowed.

    ``short_sizes`` lists sizes that had fewer repetitions than requested when
    the samples were drawn by :func:`sample_pilot`.
    """

    n: np.ndarray
    accuracy: np.ndarray
    short_sizes: tuple[int, ...] = ()

    def __post_init__(self):
        n = np.asarray(self.n, dtype=np.int64).ravel()
        acc = np.asarray(self.accuracy, dtype=float).ravel()
        if n.shape != acc.shape:
            raise InputError("n and accuracy must have equal length")
        if n.size == 0:
            raise InputError("no samples")
        if np.any(n < 1):
            raise InputError("training sizes must be at least 1")
        if np.any(~np.isfinite(acc)) or np.any((acc < 0) | (acc > 1)):
            raise InputError("accuracies must lie in [0, 1]")
        n.setflags(write=False)
        acc.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "accuracy", acc)

    @classmethod
    def from_records(cls, records) -> "CurveSamples":
        records = list(records)
        if not records:
            raise InputError("no samples")
        n, acc = zip(*records)
        return cls(np.array(n), np.array(acc))

    @property
    def records(self) -> list[tuple[int, float]]:
        return list(zip(self.n.tolist(), self.accuracy.tolist()))

    @property
    def sizes(self) -> np.ndarray:
        return np.unique(self.n)

    def at(self, n: int) -> np.ndarray:
        return self.accuracy[self.n == n]

    def mean_by_size(self) -> tuple[np.ndarray, np.ndarray]:
        sizes = self.sizes
        return sizes, np.array([self.at(s).mean() for s in sizes])

    def __len__(self):
        return self.n.size


@dataclass(frozen=True)
class CurveModel:
    """Mean accuracy ``a - b * n**(-c)``, clipped to [0, 1] on prediction."""

    a: float
    b: float
    c: float
    fit_rmse: float = 0.0
    n_fit_max: int = 0

    def __post_init__(self):
        if not all(np.isfinite([self.a, self.b, self.c])):
            raise InputError("curve parameters must be finite")
        if self.b < 0 or self.c <= 0:
            raise InputError("need b >= 0 and c > 0")

    def predict(self, n) -> np.ndarray | float:
        n = np.asarray(n, dtype=float)
        out = np.clip(self.a - self.b * n ** (-self.c), 0.0, 1.0)
        return float(out) if out.ndim == 0 else out


def _linear_fit(x, y, c):
    """Least-squares (a, b) for fixed c, and the residual sum of squares."""
    X = np.column_stack([np.ones_like(x), -(x ** (-c))])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    return coef, float(resid @ resid)


def fit_power_law(samples: CurveSamples) -> CurveModel:
    """Fit ``a - b n^-c`` to per-size mean accuracies.

    For each ``c`` the pair ``(a, b)`` is a linear least-squares problem, so
    only ``c`` is searched: a coarse grid on ``[0.01, 2]`` locates the basin
    and a golden-section search refines it.

    Raises
    ------
    InputError
        Fewer than three distinct sizes.
    DegenerateFitError
        The best fit has ``b <= 0``; a flat model is attached.
    """
    x, y = samples.mean_by_size()
    if x.size < 3:
        raise InputError("need at least 3 distinct training sizes")
    x = x.astype(float)
    sse = lambda c: _linear_fit(x, y, c)[1]  # noqa: E731
    grid = np.linspace(*C_BOUNDS, _GRID)
    vals = np.array([sse(c) for c in grid])
    i = int(np.argmin(vals))
    if 0 < i < grid.size - 1:
        res = optimize.minimize_scalar(sse, bracket=(grid[i - 1], grid[i], grid[i + 1]),
                                       method="golden", options={"xtol": 1e-10})
        c = float(np.clip(res.x, *C_BOUNDS))
    else:
        c = float(grid[i])
    (a, b), rss = _linear_fit(x, y, c)
    if not np.isfinite([a, b]).all():
        raise FitError("fit produced non-finite parameters")
    rmse = float(np.sqrt(rss / x.size))
    if b <= 1e-12:
        flat = CurveModel(float(y.mean()), 0.0, c, float(np.std(y)), int(x.max()))
        raise DegenerateFitError("fitted curve is flat (b <= 0)", model=flat)
    return CurveModel(float(a), float(b), c, rmse, int(x.max()))


def build_setting(
    source: CurveModel | CurveSamples,
    m: int,
    sizes: Sequence[int],
    cost_per_sample: float = 1.0,
) -> DelegationSetting:
    """One action per training size, with cost ``cost_per_sample * n``.

    A model gives ``Binomial(m, clip(prediction))`` outcomes; samples give the
    uniform binomial mixture over the recorded accuracies at each size.
    """
    sizes = [int(n) for n in sizes]
    if not sizes:
        raise InputError("sizes must be nonempty")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InputError("sizes must be strictly ascending")
    actions = []
    for k, n in enumerate(sizes):
        if isinstance(source, CurveModel):
            p = float(np.clip(source.predict(n), *CLAMP))
            dist, acc = binomial_pmf(m, p), p
        else:
            accs = source.at(n)
            if accs.size == 0:
                raise InputError(f"no samples for n={n}")
            dist, acc = binomial_mixture(m, accs), float(accs.mean())
        actions.append(ActionSpec(k + 1, n, cost_per_sample * n, dist, acc))
    return DelegationSetting(m, tuple(actions))


def sample_pilot(samples: CurveSamples, k: float, r: int, rng=None) -> CurveSamples:
    """Draw a pilot of ``r`` repetitions per size for the longest affordable prefix.

    Sizes are kept while ``sum(r * n) <= k``.  Sizes with fewer than ``r``
    records keep what exists and are listed in ``short_sizes``.
    """
    if r < 1:
        raise InputError("r must be at least 1")
    rng = np.random.default_rng(rng)
    sizes = samples.sizes
    spent = np.cumsum(r * sizes)
    kept = sizes[spent <= k]
    if kept.size == 0:
        raise InputError(f"budget k={k} cannot cover r={r} runs at n={sizes[0]}")
    n_out, acc_out, short = [], [], []
    for n in kept:
        accs = samples.at(n)
        if accs.size < r:
            short.append(int(n))
            pick = accs
        else:
            pick = rng.choice(accs, size=r, replace=False)
        n_out.extend([n] * len(pick))
        acc_out.extend(pick)
    return CurveSamples(np.array(n_out), np.array(acc_out), tuple(short))


def sample_size_multiplier(
    setting_est: DelegationSetting,
    budget: float,
    k: float,
    setting_true: DelegationSetting | None = None,
) -> float:
    """Training size the agent actually delivers, divided by the pilot size ``k``.

    The contract is designed on ``setting_est``; the agent best-responds on
    ``setting_true`` (defaults to the estimate itself).
    """
    if k <= 0:
        raise InputError("k must be positive")
    setting_true = setting_est if setting_true is None else setting_true
    contract = budget_optimal(setting_est, budget).contract
    chosen = best_response(setting_true, contract).action_id
    return setting_true.action(chosen).n_samples / k


class SweepPoint(NamedTuple):
    signed_error: float
    accuracy_loss: float
    chosen_n: int


def estimation_error_sweep(
    true_model: CurveModel,
    est_models: Sequence[CurveModel],
    m: int,
    sizes: Sequence[int],
    budget: float,
    cost_per_sample: float = 1.0,
) -> list[SweepPoint]:
    """Accuracy lost by designing the contract on an estimated curve.

    The signed error is measured at the training size the perfect-information
    contract incentivizes; the loss compares the accuracy the agent delivers
    on the true curve against perfect information.
    """
    true_setting = build_setting(true_model, m, sizes, cost_per_sample)
    perfect = budget_optimal(true_setting, budget)
    n_star = true_setting.action(perfect.target_action).n_samples
    best_value = perfect.expected_accuracy
    truth_at_star = float(np.clip(true_model.predict(n_star), *CLAMP))
    out = []
    for model in est_models:
        est_setting = build_setting(model, m, sizes, cost_per_sample)
        contract = budget_optimal(est_setting, budget).contract
        chosen = best_response(true_setting, contract).action_id
        err = float(np.clip(model.predict(n_star), *CLAMP)) - truth_at_star
        loss = best_value - principal_value(true_setting, contract)
        out.append(SweepPoint(err, loss, true_setting.action(chosen).n_samples))
    return out
