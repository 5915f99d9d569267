import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import curve_fit

from delegated_contracts import (
    CurveModel,
    CurveSamples,
    InputError,
    build_setting,
    estimation_error_sweep,
    fit_power_law,
    is_mlrp_setting,
    sample_pilot,
    sample_size_multiplier,
)
from delegated_contracts.errors import DegenerateFitError


def _law(n, a, b, c):
    return a - b * n ** (-c)


def test_exact_recovery():
    n = np.array([10, 20, 50, 100, 200, 500, 1000])
    model = fit_power_law(CurveSamples(n, _law(n, 0.92, 1.5, 0.45)))
    assert model.a == pytest.approx(0.92, abs=1e-6)
    assert model.b == pytest.approx(1.5, rel=1e-5)
    assert model.c == pytest.approx(0.45, abs=1e-6)
    assert model.n_fit_max == 1000
    assert model.fit_rmse < 1e-8


def test_noisy_fit_no_worse_than_curve_fit():
    rng = np.random.default_rng(3)
    n = np.repeat([16, 32, 64, 128, 256, 512], 4)
    acc = np.clip(_law(n, 0.88, 1.2, 0.5) + rng.normal(0, 0.01, n.size), 0, 1)
    ours = fit_power_law(CurveSamples(n, acc))
    x, y = CurveSamples(n, acc).mean_by_size()
    ref, _ = curve_fit(_law, x.astype(float), y, p0=[0.9, 1.0, 0.5], maxfev=20000)
    sse = lambda p: float(np.sum((_law(x, *p) - y) ** 2))  # noqa: E731
    assert sse([ours.a, ours.b, ours.c]) <= sse(ref) + 1e-12


def test_flat_data_is_degenerate():
    n = np.array([10, 100, 1000, 10000])
    with pytest.raises(DegenerateFitError) as info:
        fit_power_law(CurveSamples(n, [0.7, 0.7, 0.7, 0.7]))
    assert info.value.model.b == 0
    assert info.value.model.a == pytest.approx(0.7)


def test_decreasing_data_is_degenerate():
    n = np.array([10, 100, 1000])
    with pytest.raises(DegenerateFitError):
        fit_power_law(CurveSamples(n, [0.9, 0.8, 0.7]))


def test_fit_needs_three_sizes():
    with pytest.raises(InputError):
        fit_power_law(CurveSamples([10, 10, 20], [0.5, 0.6, 0.7]))


def test_samples_validation():
    with pytest.raises(InputError):
        CurveSamples([10, 20], [0.5])
    with pytest.raises(InputError):
        CurveSamples([0], [0.5])
    with pytest.raises(InputError):
        CurveSamples([10], [1.5])
    with pytest.raises(InputError):
        CurveSamples.from_records([])
    s = CurveSamples.from_records([(20, 0.6), (10, 0.5), (20, 0.7)])
    assert s.sizes.tolist() == [10, 20]
    assert s.at(20).tolist() == [0.6, 0.7]
    assert s.mean_by_size()[1].tolist() == pytest.approx([0.5, 0.65])


def test_model_validation_and_clipping():
    with pytest.raises(InputError):
        CurveModel(0.9, -1.0, 0.5)
    with pytest.raises(InputError):
        CurveModel(0.9, 1.0, 0.0)
    m = CurveModel(1.2, 1.0, 0.5)
    assert m.predict(10**8) == 1.0
    assert CurveModel(0.5, 10.0, 0.5).predict(1) == 0.0


def test_build_setting_from_model():
    model = CurveModel(0.9, 2.0, 0.5)
    s = build_setting(model, 20, [10, 40, 160], 0.01)
    assert s.ids == [1, 2, 3]
    np.testing.assert_allclose(s.costs, [0.1, 0.4, 1.6])
    np.testing.assert_allclose(s.accuracies, model.predict([10, 40, 160]))
    assert is_mlrp_setting(s)
    clamped = build_setting(CurveModel(2.0, 1.0, 0.5), 5, [100, 200])
    assert clamped.accuracies[0] == 0.999
    with pytest.raises(InputError):
        build_setting(model, 20, [40, 10])
    with pytest.raises(InputError):
        build_setting(model, 20, [])


def test_build_setting_from_samples():
    samples = CurveSamples([10, 10, 20], [0.4, 0.6, 0.8])
    s = build_setting(samples, 1, [10, 20])
    np.testing.assert_allclose(s.F[0], [0.5, 0.5])
    assert s.accuracies[0] == pytest.approx(0.5)
    with pytest.raises(InputError):
        build_setting(samples, 4, [10, 30])


def test_pilot_prefix_and_short_sizes():
    samples = CurveSamples([10] * 5 + [20] * 2 + [40] * 5, np.linspace(0.3, 0.9, 12))
    pilot = sample_pilot(samples, k=3 * 10 + 3 * 20, r=3, rng=0)
    assert pilot.sizes.tolist() == [10, 20]
    assert pilot.short_sizes == (20,)
    assert len(pilot.at(10)) == 3 and len(pilot.at(20)) == 2
    assert set(pilot.at(10)) <= set(samples.at(10))
    again = sample_pilot(samples, k=90, r=3, rng=0)
    assert again.records == pilot.records
    with pytest.raises(InputError):
        sample_pilot(samples, k=5, r=3)
    with pytest.raises(InputError):
        sample_pilot(samples, k=100, r=0)


def test_multiplier_and_sweep_signs():
    true = CurveModel(0.9, 0.4 * 100**0.3, 0.3)
    sizes = [16, 32, 64, 128, 256]
    s = build_setting(true, 30, sizes, 0.01)
    mult = sample_size_multiplier(s, 10.0, k=16)
    assert mult in {n / 16 for n in sizes}
    pts = estimation_error_sweep(true, [true, CurveModel(true.a + 0.05, true.b, true.c)], 30, sizes, 10.0, 0.01)
    assert pts[0].signed_error == 0 and pts[0].accuracy_loss == pytest.approx(0, abs=1e-12)
    assert pts[1].signed_error == pytest.approx(0.05)
    assert pts[1].accuracy_loss >= -1e-12
    with pytest.raises(InputError):
        sample_size_multiplier(s, 10.0, k=0)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(0.6, 0.98), b=st.floats(0.2, 5.0), c=st.floats(0.1, 1.5))
def test_recovery_property(a, b, c):
    n = np.array([8, 16, 32, 64, 128, 256, 512, 1024])
    y = _law(n, a, b, c)
    if np.any(y < 0) or np.any(y > 1):
        return
    model = fit_power_law(CurveSamples(n, y))
    np.testing.assert_allclose(model.predict(n), y, atol=1e-6)


def test_multiplier_extremes():
    true = CurveModel(0.9, 2.0, 0.5)
    sizes = [10, 20, 40, 80]
    s = build_setting(true, 20, sizes, 0.01)
    assert sample_size_multiplier(s, 0.0, k=5) == 10 / 5
    assert sample_size_multiplier(s, 1e6, k=5) == 80 / 5


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.floats(10, 2000), r=st.integers(1, 4))
def test_pilot_respects_budget_and_seed(seed, k, r):
    rng = np.random.default_rng(seed)
    n = np.repeat([10, 20, 40, 80, 160], 5)
    samples = CurveSamples(n, rng.uniform(0.3, 0.9, n.size))
    if r * 10 > k:
        with pytest.raises(InputError):
            sample_pilot(samples, k, r, rng=seed)
        return
    pilot = sample_pilot(samples, k, r, rng=seed)
    assert sum(r * s for s in pilot.sizes) <= k
    assert pilot.records == sample_pilot(samples, k, r, rng=seed).records


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0.5, 1.0), b=st.floats(0.1, 1.0), c=st.floats(0.1, 1.0), m=st.integers(1, 40))
def test_built_setting_is_mlrp_and_monotone(a, b, c, m):
    model = CurveModel(a, b, c)
    sizes = [2, 8, 32, 128, 512]
    s = build_setting(model, m, sizes, 0.001)
    assert np.all(np.diff(s.accuracies) >= 0)
    # clamping can merge rows, and equal rows are not MLRP-distinct
    raw = a - b * np.array(sizes, dtype=float) ** -c
    if raw[0] <= 0.001 or raw[-1] >= 0.999:
        return
    assert is_mlrp_setting(s)
