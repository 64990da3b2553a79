"""From measured absorption data to imaginary-frequency permittivity.

The force kernels need eps(i*xi).  Given a table of the measured loss
eps''(omega) on the real axis, the dispersion integral

    eps(i*xi) = 1 + (2/pi) int_0^inf  w eps''(w) / (w^2 + xi^2) dw

produces it.  The Drude model is self-consistent under this transform, so
a synthetic Drude loss table makes an exact accuracy benchmark.
"""

import numpy as np

import casfluct as cf

gold = cf.GOLD_DRUDE
print(f"reference metal: omega_p = {gold.omega_p_ev} eV, gamma = {gold.gamma_ev} eV\n")

# synthesize a "measured" absorption table from the closed form
omega = np.geomspace(0.01, 100.0, 300)
table = cf.OpticalAbsorptionTable(omega, cf.drude_loss_spectrum(gold, omega))

print(f"{'xi (eV)':>9} {'transform':>14} {'closed form':>14} {'rel err':>10}")
for xi in (0.05, 0.1, 0.5, 1.0, 3.0, 10.0):
    got = cf.kk_transform(table, xi)
    want = cf.eps_imag_axis(gold, xi)
    print(f"{xi:9.3f} {got:14.4f} {want:14.4f} {got / want - 1:10.2e}")

print("\nbelow the first table row the metallic low-frequency form recovered")
print("from the first two rows takes over in closed form; above the last row")
print("the (negligible) tail is dropped.")

# A tabulated eps(i*xi) can also be used directly as a material model:
xi_grid = np.geomspace(1e-3, 1e3, 200)
tab = cf.Tabulated(
    xi_ev=xi_grid, eps=cf.eps_imag_axis(gold, xi_grid), low_freq=gold
)
geometry = cf.ExperimentGeometry()
f_tab = cf.sphere_plate_force(tab, 1e-6, geometry)
f_ref = cf.sphere_plate_force(gold, 1e-6, geometry)
print(f"\nsphere-plate force at 1 um from the tabulated model: {f_tab / 1e-11:.3f} udyne")
print(f"from the closed-form model:                          {f_ref / 1e-11:.3f} udyne")

print("\nSame transform via the CLI:")
print("  casfluct kk --table optical.csv --xi-min 0.05 --xi-max 10 --points 40 -o eps.csv")
print("  casfluct force --model tabulated --eps-table eps.csv ...")
