"""Chi-squared comparison of corrected force models.

Builds a synthetic measured dataset from the Drude theory with a 100 nm
rms separation fluctuation folded in, then asks which permittivity model,
with and without the fluctuation correction, describes it best, and scans
the fluctuation amplitude as a fit parameter.
"""

import numpy as np

import casfluct as cf

UDYNE = 1e-11
UM = 1e-6

geometry = cf.ExperimentGeometry()
beta = 215.0 * UDYNE * UM
bg = cf.ElectrostaticBackground(beta=beta)
delta_true = 0.1 * UM

# Fast spline surrogates of the two dispersion-force curves
dense = np.geomspace(0.45 * UM, 7.5 * UM, 100)
drude = cf.force_curve(cf.GOLD_DRUDE, geometry, dense).as_evaluator()
plasma = cf.force_curve(cf.GOLD_PLASMA, geometry, dense).as_evaluator()
total_drude = cf.TotalForceEvaluator(bg, drude)
total_plasma = cf.TotalForceEvaluator(bg, plasma)

# Synthetic measurement: corrected Drude truth + Gaussian noise
rng = np.random.default_rng(7)
d_um = np.array([0.62, 0.8, 1.0, 1.3, 1.8, 2.5, 3.5, 5.0])
sigma = np.full(len(d_um), 0.6)  # udyne
truth = np.array([
    cf.apparent_force(total_drude, d * UM, delta_true, curvature=total_drude.curvature)
    for d in d_um
]) / UDYNE
data = cf.ForceDataset(
    d_um=d_um,
    force_udyne=truth + rng.standard_normal(len(d_um)) * sigma,
    sigma_udyne=sigma,
    n_samples=np.full(len(d_um), 10, dtype=int),
    bin_width_um=np.full(len(d_um), 0.1),
)


def corrected(total, delta):
    return lambda d: cf.apparent_force(total, d, delta, curvature=total.curvature)


print("chi-squared against the synthetic dataset (7 d.o.f. uncorrected, "
      "6 with the fitted amplitude):")
for label, theory, params in [
    ("drude, no correction", total_drude, 0),
    ("plasma, no correction", total_plasma, 0),
    ("drude + 100 nm correction", corrected(total_drude, delta_true), 1),
    ("plasma + 100 nm correction", corrected(total_plasma, delta_true), 1),
]:
    rep = cf.chi_squared(data, theory, fitted_params=params)
    print(f"  {label:28s} chi2 = {rep.chi2:8.2f}  reduced = {rep.reduced:7.2f}  "
          f"p = {rep.p_value:.3g}")

# Scan the fluctuation amplitude as a free parameter
grid = np.linspace(0.0, 0.2, 21) * UM
scan = cf.scan_delta(data, lambda delta: corrected(total_drude, delta), grid)
print(f"\namplitude scan (drude): best delta_rms = {scan.argmin_delta / UM:.3f} um "
      f"(truth {delta_true / UM:.3f}), chi2 = {scan.best_report.chi2:.2f}")

# Scatter bookkeeping: excess noise between coarse and fine binnings
excess = cf.binning_consistency(1.32 * np.sqrt(10.0), np.sqrt(10.0))
print(f"\nbinning diagnostic: observed/expected sigma ratio 1.32 x sqrt(10) "
      f"-> excess scatter {excess.excess:.3f} (coarse-bin sigma units)")
print("matching excess = |F'| delta via the scatter law closes the loop on "
      "the in-band fluctuation amplitude")
