"""Brute-force verification of the correction formulas.

Synthesizes band-limited Gaussian separation jitter, pushes it through the
exact force law by direct time averaging, and compares against the
quadratic-order predictions.  No Taylor expansion on the sampling side:
the Monte Carlo resolves the fourth-order truncation error of the formula
itself.
"""

import math

import numpy as np

import casfluct as cf

UDYNE = 1e-11
UM = 1e-6

bg = cf.ElectrostaticBackground(beta=215.0 * UDYNE * UM)
d = 1.0 * UM

spec = cf.ProcessSpec(
    target_rms=0.1 * UM, f_lo=0.01, f_hi=5.0, kind="white",
    seed=2024, dt=0.05, duration=50000.0,  # one million samples
)
series = cf.sample_process(spec)
print(f"synthesized {len(series):,} samples: mean {series.mean():.2e} m, "
      f"rms {math.sqrt(np.mean(series**2)) / UM:.6f} um (rescaled exactly)")

rep = cf.time_averaged_force(bg, d, series)
shift = (rep.mean_force - bg.force(d)) / UDYNE
print(f"\nmean-force shift:   Monte Carlo {shift:.4f} +- {rep.se_mean / UDYNE:.4f} udyne")
print("                    quadratic formula beta*delta^2/d^3 = 2.1500 udyne")
print("                    + quartic term 3*beta*delta^4/d^5  = 0.0645 udyne")
print(f"scatter:            Monte Carlo sd {math.sqrt(rep.variance_force) / UDYNE:.2f} udyne, "
      f"|F'|*delta = {rep.analytic_excess_sigma / UDYNE:.2f} udyne")

print("\nrunning the formal check over 10 independent seeds...")
record = cf.verify_second_order(bg, d, spec, trials=10)
print(f"mean-shift law:     {record.n_mean_pass}/10 seeds within 4 se + quartic allowance")
print(f"scatter law:        {record.n_scatter_pass}/{record.n_scatter_applicable} seeds within 5%")

# Push the expansion past its validity: delta_rms / d = 0.5
big = cf.ProcessSpec(target_rms=0.5 * UM, f_lo=0.01, f_hi=5.0, seed=5,
                     dt=0.05, duration=10000.0)
record_big = cf.verify_second_order(bg, d, big, trials=10)
broken = sum(v.expansion_breakdown for v in record_big.verdicts)
print(f"\nat delta_rms/d = 0.5 the quadratic description breaks down as expected: "
      f"{broken}/10 trials flagged (documented behavior, not a bug)")

print("\nSame check via the CLI:")
print("  casfluct simulate --d 1.0 --delta-rms 0.1 --beta 215 --trials 10 -o sim.json")
