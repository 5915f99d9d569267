"""From noisy learning-curve samples to a contract, and the cost of a bad estimate.

A ground-truth curve 0.9 - 0.4 (n/100)^-0.3 generates noisy accuracy
records.  A pilot of the cheapest sizes is fitted with a power law, the fit
is turned into a contract setting, and the agent best-responds under the
true curve.  The closing sweep shifts the estimate up and down: overshooting
leaves the agent unwilling to deliver, undershooting loses at most one step.

Run:  python3 demos/learning_curve_pipeline.py
"""

import numpy as np

from delegated_contracts import (
    CurveModel,
    CurveSamples,
    best_response,
    budget_optimal,
    build_setting,
    estimation_error_sweep,
    fit_power_law,
    sample_pilot,
)

rng = np.random.default_rng(0)
true = CurveModel(0.9, 0.4 * 100**0.3, 0.3)
sizes = [16, 32, 64, 128, 256, 512, 1024, 2048]
n = np.repeat(sizes, 5)
samples = CurveSamples(n, np.clip(true.predict(n) + rng.normal(0, 0.01, n.size), 0, 1))

pilot = sample_pilot(samples, k=3 * sum(sizes[:5]), r=3, rng=rng)
fit = fit_power_law(pilot)
print(f"pilot sizes {pilot.sizes.tolist()}")
print(f"fit: a={fit.a:.4f} b={fit.b:.4f} c={fit.c:.4f} rmse={fit.fit_rmse:.4f}")
print(f"true vs fit at n=2048: {true.predict(2048):.4f} vs {fit.predict(2048):.4f}")

m, budget, cost = 50, 8.5, 0.01
est_setting = build_setting(fit, m, sizes, cost)
true_setting = build_setting(true, m, sizes, cost)
rep = budget_optimal(est_setting, budget)
chosen = best_response(true_setting, rep.contract).action_id
print(f"\ncontract designed on the fit targets n={est_setting.action(rep.target_action).n_samples}, "
      f"budget used {rep.budget:.3f}")
print(f"agent under the true curve delivers n={true_setting.action(chosen).n_samples}")

print("\nshift   signed error   accuracy loss   delivered n")
for d in (-0.06, -0.03, 0.0, 0.03, 0.06):
    (p,) = estimation_error_sweep(true, [CurveModel(true.a + d, true.b, true.c)], m, sizes, budget, cost)
    print(f"{d:+.2f}   {p.signed_error:+.4f}        {p.accuracy_loss:.4f}          {p.chosen_n}")
