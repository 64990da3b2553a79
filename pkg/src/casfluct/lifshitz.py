"""Finite-temperature dispersion forces between metallic surfaces.

The parallel-plate pressure is the Matsubara sum

    P(d, T) = (k_B T / pi) * sum'_{n>=0} int_0^inf k dk  kappa_n *
              sum_{p in TM,TE} [ r_p^-2 exp(2 kappa_n d) - 1 ]^-1,

with kappa_n = sqrt(k^2 + xi_n^2/c^2), xi_n = 2 pi n k_B T / hbar, the
primed sum giving the n = 0 term half weight, and Fresnel reflection
coefficients evaluated at eps(i xi_n).  Attractive pressures and forces
are reported as positive numbers.  The free energy per unit area uses the
matching log-determinant form, and the sphere-plate force follows from
the proximity-force approximation F = -2 pi R E(d).

Zero-frequency reflection is the physically loaded choice: TM -> 1 for
every metallic model, TE -> 0 for Drude-like models, the finite plasma
value for the plasma model, and 1 for a perfect conductor.

All k-integrals are taken in the scale-free variable y = 2 kappa_n d.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.special import roots_laguerre, zeta

from .permittivity import (
    Drude,
    MaterialModel,
    PerfectConductor,
    Plasma,
    Tabulated,
    eps_imag_axis,
)
from .units import CONSTANTS, EV, DomainError, ExperimentGeometry

__all__ = [
    "LifshitzSettings",
    "ConvergenceError",
    "PFAValidityError",
    "plate_pressure",
    "plate_energy",
    "sphere_plate_force",
    "SpherePlateForce",
    "ForceCurve",
    "force_curve",
    "TabulatedForceCurve",
    "DerivativeResult",
    "derivative",
    "gradient_of",
    "curvature_of",
]

_ZETA3 = float(zeta(3))


class ConvergenceError(RuntimeError):
    """Matsubara sum failed to converge; carries the partial sum and term count."""

    def __init__(self, message: str, partial_sum: float, terms: int):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms = terms


class PFAValidityError(ValueError):
    """Separation too large relative to the sphere radius for the PFA."""


@dataclass(frozen=True)
class LifshitzSettings:
    """Numerical controls for the Matsubara sum and the k-integrals."""

    matsubara_rel_tol: float = 1e-9
    matsubara_max_terms: int = 5000
    quad_rel_tol: float = 1e-8
    zero_temperature_mode: bool = False

    def __post_init__(self) -> None:
        for name in ("matsubara_rel_tol", "quad_rel_tol"):
            v = getattr(self, name)
            if not 0 < v <= 1e-2:
                raise ValueError(f"{name} must be in (0, 1e-2], got {v}")
        if self.matsubara_max_terms < 1:
            raise ValueError("matsubara_max_terms must be >= 1")


_DEFAULT_SETTINGS = LifshitzSettings()

_LAG_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _lag_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _LAG_CACHE:
        _LAG_CACHE[n] = roots_laguerre(n)
    return _LAG_CACHE[n]


def _r2_metal(eps, y, a):
    """Squared TM/TE reflection coefficients in y = 2 kappa d variables."""
    s = np.sqrt(y * y + (eps - 1.0) * a * a)
    r_tm = (eps * y - s) / (eps * y + s)
    r_te = (y - s) / (y + s)
    return r_tm * r_tm, r_te * r_te


def _log_scaled(r2, y):
    """exp(y) * log(1 - r2*exp(-y)), computed without overflow."""
    q = r2 * np.exp(-y)
    small = q < 1e-8
    # direct branch only selected where q >= 1e-8, i.e. y <~ 19 + log(r2)
    direct = np.exp(np.minimum(y, 40.0)) * np.log1p(-np.where(small, 0.0, q))
    series = -r2 * (1.0 + 0.5 * q + q * q / 3.0)
    return np.where(small, series, direct)


def _inner_scaled(a: float, r2_of_y: Callable, kind: str, rel_tol: float) -> float:
    """exp(a) * integral over y in [a, inf) of the pressure/energy kernel.

    Gauss-Laguerre in t = y - a; the exp(a) scaling keeps every factor
    O(1) so terms at any Matsubara index can be composed stably.
    """
    prev = None
    for order in (32, 64, 128, 256):
        t, w = _lag_nodes(order)
        y = a + t
        r_tm2, r_te2 = r2_of_y(y)
        if kind == "pressure":
            e = np.exp(-y)
            g = y * y * (r_tm2 / (1.0 - r_tm2 * e) + r_te2 / (1.0 - r_te2 * e))
        else:
            g = y * (_log_scaled(r_tm2, y) + _log_scaled(r_te2, y))
        val = float(np.dot(w, g))
        if prev is not None and abs(val - prev) <= rel_tol * max(abs(val), 1e-300):
            return val
        prev = val
    return val


def _r2_factory(model: MaterialModel, eps: float, a: float) -> Callable:
    if isinstance(model, PerfectConductor):
        return lambda y: (np.ones_like(y), np.ones_like(y))
    return lambda y: _r2_metal(eps, y, a)


def _n0_scaled(model: MaterialModel, d: float, kind: str, rel_tol: float) -> float:
    """Zero-frequency term of the scaled sum (a = 0, model-specific TE)."""
    tm = 2.0 * _ZETA3 if kind == "pressure" else -_ZETA3
    if isinstance(model, PerfectConductor):
        return 2.0 * tm
    if isinstance(model, (Drude, Tabulated)):
        return tm  # TE reflection vanishes at zero frequency
    if isinstance(model, Plasma):
        omega_p = model.omega_p_ev * EV / CONSTANTS.hbar  # rad/s
        b = 2.0 * d * omega_p / CONSTANTS.c

        def r2_te(y):
            s = np.sqrt(y * y + b * b)
            r = (y - s) / (y + s)
            return r * r

        if kind == "pressure":
            te = _inner_scaled(0.0, lambda y: (np.zeros_like(y), r2_te(y)), kind, rel_tol)
        else:
            # y*log(...) has a log singularity at y = 0; adaptive quadrature
            te = quad(
                lambda y: y * math.log1p(-float(r2_te(np.asarray(y))) * math.exp(-y)),
                0.0,
                np.inf,
                epsabs=1e-13,
                epsrel=1e-11,
                limit=200,
            )[0]
        return tm + te
    raise TypeError(f"unknown material model {model!r}")


def _xi1_rad(T: float) -> float:
    return 2.0 * math.pi * CONSTANTS.k_B * T / CONSTANTS.hbar


def _thermal_sum(model, d, T, kind, settings) -> float:
    """sum'_n exp(-a_n) * inner_scaled(a_n), the scale-free Matsubara series."""
    rel = settings.quad_rel_tol
    acc = 0.5 * _n0_scaled(model, d, kind, rel)
    xi1 = _xi1_rad(T)
    is_pc = isinstance(model, PerfectConductor)
    for n in range(1, settings.matsubara_max_terms + 1):
        a = 2.0 * d * n * xi1 / CONSTANTS.c
        if a > 700.0:
            return acc  # remaining terms underflow to zero
        eps = None if is_pc else eps_imag_axis(model, n * xi1 * CONSTANTS.hbar / EV)
        term = math.exp(-a) * _inner_scaled(a, _r2_factory(model, eps, a), kind, rel)
        acc += term
        if abs(term) <= settings.matsubara_rel_tol * abs(acc):
            return acc
    raise ConvergenceError(
        f"Matsubara sum did not converge within {settings.matsubara_max_terms} terms "
        f"(d={d:g} m, T={T:g} K)",
        partial_sum=acc,
        terms=settings.matsubara_max_terms,
    )


def _zero_t_integral(model, d, kind, settings) -> float:
    """int_0^inf I(a) da via Gauss-Laguerre; I(a) = exp(-a)*inner_scaled(a)."""
    rel = settings.quad_rel_tol
    is_pc = isinstance(model, PerfectConductor)
    prev = None
    for order in (64, 128):
        A, W = _lag_nodes(order)
        if is_pc:
            eps = np.full_like(A, np.nan)
        else:
            xi_ev = A * CONSTANTS.c * CONSTANTS.hbar / (2.0 * d * EV)
            eps = eps_imag_axis(model, xi_ev)
        total = 0.0
        for j in range(order):
            e_j = None if is_pc else float(eps[j])
            total += float(W[j]) * _inner_scaled(
                float(A[j]), _r2_factory(model, e_j, float(A[j])), kind, rel
            )
        if prev is not None and abs(total - prev) <= 10 * rel * max(abs(total), 1e-300):
            return total
        prev = total
    return total


def _check_d_T(d: float, T: float) -> None:
    if not d > 0:
        raise DomainError(f"separation must be > 0, got {d}")
    if T < 0:
        raise DomainError(f"temperature must be >= 0, got {T}")


def plate_pressure(
    model: MaterialModel,
    d: float,
    T: float,
    settings: LifshitzSettings | None = None,
) -> float:
    """Attractive parallel-plate pressure in Pa (positive), at separation d (m).

    With ``zero_temperature_mode`` (or T = 0) the Matsubara sum is replaced
    by the continuous imaginary-frequency integral.
    """
    settings = settings or _DEFAULT_SETTINGS
    _check_d_T(d, T)
    if settings.zero_temperature_mode or T == 0.0:
        integral = _zero_t_integral(model, d, "pressure", settings)
        return CONSTANTS.hbar_c / (32.0 * math.pi**2 * d**4) * integral
    s = _thermal_sum(model, d, T, "pressure", settings)
    return CONSTANTS.k_B * T / (8.0 * math.pi * d**3) * s


def plate_energy(
    model: MaterialModel,
    d: float,
    T: float,
    settings: LifshitzSettings | None = None,
) -> float:
    """Interaction free energy per unit area in J/m^2 (negative = binding)."""
    settings = settings or _DEFAULT_SETTINGS
    _check_d_T(d, T)
    if settings.zero_temperature_mode or T == 0.0:
        integral = _zero_t_integral(model, d, "energy", settings)
        return CONSTANTS.hbar_c / (32.0 * math.pi**2 * d**3) * integral
    s = _thermal_sum(model, d, T, "energy", settings)
    return CONSTANTS.k_B * T / (8.0 * math.pi * d**2) * s


def sphere_plate_force(
    model: MaterialModel,
    d: float,
    geometry: ExperimentGeometry | None = None,
    settings: LifshitzSettings | None = None,
) -> float:
    """Attractive sphere-plate force in N (positive) via F = -2 pi R E(d).

    Valid for d << R; d/R >= 0.1 is rejected and d/R > 1e-3 warned about.
    """
    geometry = geometry or ExperimentGeometry()
    if not d > 0:
        raise DomainError(f"separation must be > 0, got {d}")
    ratio = d / geometry.sphere_radius
    if ratio >= 0.1:
        raise PFAValidityError(
            f"d/R = {ratio:.3g} >= 0.1: proximity-force approximation invalid"
        )
    if ratio > 1e-3:
        warnings.warn(
            f"d/R = {ratio:.3g} > 1e-3: proximity-force approximation degraded",
            stacklevel=2,
        )
    energy = plate_energy(model, d, geometry.temperature, settings)
    return -2.0 * math.pi * geometry.sphere_radius * energy


class SpherePlateForce:
    """Callable sphere-plate force evaluator F(d) for a fixed model/geometry."""

    def __init__(
        self,
        model: MaterialModel,
        geometry: ExperimentGeometry | None = None,
        settings: LifshitzSettings | None = None,
    ):
        self.model = model
        self.geometry = geometry or ExperimentGeometry()
        self.settings = settings or _DEFAULT_SETTINGS

    def __call__(self, d: float) -> float:
        return sphere_plate_force(self.model, d, self.geometry, self.settings)


# --------------------------------------------------------------------------
# force curves


@dataclass(frozen=True)
class ForceCurve:
    """Sampled sphere-plate force curve, ascending in d, attractive-positive."""

    model: MaterialModel
    geometry: ExperimentGeometry
    d_m: np.ndarray
    force_N: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.d_m, dtype=float)
        f = np.asarray(self.force_N, dtype=float)
        if d.ndim != 1 or len(d) != len(f) or len(d) == 0:
            raise ValueError("d_m and force_N must be 1-D arrays of equal nonzero length")
        if np.any(np.diff(d) <= 0):
            raise ValueError("d_m must be strictly ascending")
        if not np.all(np.isfinite(f)):
            raise ValueError("force_N contains non-finite values")
        if np.any(f <= 0):
            raise ValueError("metallic force curves must be attractive (positive)")
        if np.any(np.diff(f) >= 0):
            raise ValueError("force magnitude must decrease with separation")
        d.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "d_m", d)
        object.__setattr__(self, "force_N", f)

    def as_evaluator(self) -> "TabulatedForceCurve":
        return TabulatedForceCurve(self.d_m, self.force_N)


def force_curve(
    model: MaterialModel,
    geometry: ExperimentGeometry,
    d_m,
    settings: LifshitzSettings | None = None,
) -> ForceCurve:
    """Evaluate the sphere-plate force on a distance grid (may run threaded)."""
    from .provenance import parallel_map

    d = np.asarray(d_m, dtype=float)
    forces = parallel_map(lambda x: sphere_plate_force(model, x, geometry, settings), d)
    return ForceCurve(model=model, geometry=geometry, d_m=d, force_N=np.array(forces))


class TabulatedForceCurve:
    """Cubic-spline force evaluator over a sampled curve.

    Used wherever an analytic curve is too slow to call per sample (Monte
    Carlo time averaging, chi-squared scans against CSV theory curves).
    Provides gradient/curvature from the spline so downstream corrections
    can skip finite differencing.
    """

    def __init__(self, d_m, force_N):
        d = np.asarray(d_m, dtype=float)
        f = np.asarray(force_N, dtype=float)
        if len(d) < 4:
            raise ValueError("need at least 4 samples for a cubic spline")
        if np.any(np.diff(d) <= 0):
            raise ValueError("d_m must be strictly ascending")
        self.d_min = float(d[0])
        self.d_max = float(d[-1])
        self._spline = CubicSpline(d, f)
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.d_min) or np.any(x > self.d_max):
            bad = x[(x < self.d_min) | (x > self.d_max)]
            worst = float(bad.flat[np.argmax(np.abs(bad - 0.5 * (self.d_min + self.d_max)))])
            raise DomainError(
                f"separation {worst:g} outside tabulated range "
                f"[{self.d_min:g}, {self.d_max:g}]"
            )
        return x

    def __call__(self, x):
        x = self._check(x)
        out = self._spline(x)
        return float(out) if out.ndim == 0 else out

    def gradient(self, x):
        x = self._check(x)
        out = self._d1(x)
        return float(out) if out.ndim == 0 else out

    def curvature(self, x):
        x = self._check(x)
        out = self._d2(x)
        return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# numerical differentiation


@dataclass(frozen=True)
class DerivativeResult:
    """Finite-difference derivative with a truncation-error estimate."""

    value: float
    error: float
    flagged: bool
    step: float


def derivative(func: Callable, x: float, order: int = 1, step: float | None = None) -> DerivativeResult:
    """Richardson-extrapolated central difference of ``func`` at ``x``.

    ``order`` is 1 or 2.  Default step max(1e-3*|x|, 1e-9); the evaluator
    must be defined on [x - h, x + h].  The result is flagged when the
    error estimate exceeds 1% of the value.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    h = step if step is not None else max(1e-3 * abs(x), 1e-9)
    if not h > 0:
        raise ValueError(f"step must be > 0, got {h}")

    def central(hh: float) -> float:
        if order == 1:
            return (func(x + hh) - func(x - hh)) / (2.0 * hh)
        return (func(x + hh) - 2.0 * func(x) + func(x - hh)) / (hh * hh)

    coarse = central(h)
    fine = central(0.5 * h)
    value = (4.0 * fine - coarse) / 3.0
    error = abs(fine - coarse) / 3.0
    flagged = error > 0.01 * abs(value) if value != 0.0 else error > 0.0
    return DerivativeResult(value=value, error=error, flagged=flagged, step=h)


def gradient_of(force: Callable, x: float, step: float | None = None) -> float:
    """dF/dx, using the evaluator's analytic gradient when it advertises one."""
    g = getattr(force, "gradient", None)
    if callable(g):
        return float(g(x))
    return derivative(force, x, order=1, step=step).value


def curvature_of(force: Callable, x: float, step: float | None = None) -> float:
    """d2F/dx2, using the evaluator's analytic curvature when it advertises one."""
    c2 = getattr(force, "curvature", None)
    if callable(c2):
        return float(c2(x))
    return derivative(force, x, order=2, step=step).value
