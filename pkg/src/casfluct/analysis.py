"""Chi-squared model comparison, tail probabilities, and scatter diagnostics.

Tail probabilities are computed exactly: the finite Poisson sum for even
degrees of freedom and the regularized incomplete gamma function (series
or Lentz continued fraction) for odd ones.  Asymptotic approximations are
deliberately avoided because the interesting values live in the tails.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .dataset import ForceDataset
from .units import DomainError

__all__ = [
    "Chi2Report",
    "TheoryEvaluationError",
    "chi2_sf",
    "chi_squared",
    "ScanResult",
    "scan_delta",
    "BinningExcess",
    "binning_consistency",
]

_EPS = 1e-16
_MAX_ITER = 600


class TheoryEvaluationError(RuntimeError):
    """Theory evaluator failed at a data point; names the point."""


def _upper_gamma_reg(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x), NR-style series/CF split."""
    if x < a + 1.0:
        # lower series, then complement
        term = 1.0 / a
        total = term
        n = a
        for _ in range(_MAX_ITER):
            n += 1.0
            term *= x / n
            total += term
            if abs(term) < abs(total) * _EPS:
                break
        p = total * math.exp(-x + a * math.log(x) - math.lgamma(a))
        return min(max(1.0 - p, 0.0), 1.0)
    # Lentz continued fraction for the upper function
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    q = h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    return min(max(q, 0.0), 1.0)


def chi2_sf(x: float, k: int) -> float:
    """Upper-tail probability P(X >= x) for a chi-squared variable, k d.o.f.

    Even k uses the exact finite sum exp(-x/2) * sum_{j<k/2} (x/2)^j / j!;
    odd k goes through the regularized incomplete gamma function.
    Absolute accuracy is ~1e-12, comfortably below the 1e-9 contract.
    """
    if x < 0:
        raise DomainError(f"chi2 statistic must be >= 0, got {x}")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError(f"degrees of freedom must be an integer >= 1, got {k}")
    if x == 0.0:
        return 1.0
    m = 0.5 * x
    if k % 2 == 0:
        if m > 745.0:  # exp underflows; tail is far below any tolerance
            return 0.0
        term = math.exp(-m)
        total = term
        for j in range(1, k // 2):
            term *= m / j
            total += term
        return min(total, 1.0)
    return _upper_gamma_reg(0.5 * k, m)


@dataclass(frozen=True)
class Chi2Report:
    """Goodness-of-fit summary for one theory curve against one dataset."""

    chi2: float
    dof: int
    reduced: float
    p_value: float
    residuals: tuple[tuple[float, float], ...]  # (d_um, residual in sigma units)

    def to_json_dict(self) -> dict:
        return {
            "chi2": self.chi2,
            "dof": self.dof,
            "reduced": self.reduced,
            "p_value": self.p_value,
            "residuals": [
                {"d_um": d, "resid_sigma": r} for d, r in self.residuals
            ],
        }


def chi_squared(
    data: ForceDataset,
    theory: Callable,
    fitted_params: int = 0,
    dof_override: int | None = None,
) -> Chi2Report:
    """chi^2 = sum ((F_i - theory(d_i)) / sigma_i)^2 with explicit dof accounting.

    ``theory`` maps separation in meters to force in newtons.  Degrees of
    freedom are never inferred: they are n - fitted_params, or exactly
    ``dof_override`` when given.
    """
    if len(data) == 0:
        raise ValueError("dataset is empty")
    preds = np.empty(len(data))
    for i, d in enumerate(data.d_m):
        try:
            preds[i] = float(theory(d))
        except Exception as exc:
            raise TheoryEvaluationError(
                f"theory evaluation failed at d = {data.d_um[i]:g} um: {exc}"
            ) from exc
    resid = (data.force_N - preds) / data.sigma_N
    chi2 = float(np.sum(resid**2))
    dof = dof_override if dof_override is not None else len(data) - fitted_params
    if dof < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {dof}")
    return Chi2Report(
        chi2=chi2,
        dof=int(dof),
        reduced=chi2 / dof,
        p_value=chi2_sf(chi2, int(dof)),
        residuals=tuple(zip(data.d_um.tolist(), resid.tolist())),
    )


@dataclass(frozen=True)
class ScanResult:
    """chi^2 profile over a fluctuation-amplitude grid."""

    deltas: tuple[float, ...]
    reports: tuple[Chi2Report, ...]
    argmin_delta: float

    @property
    def best_report(self) -> Chi2Report:
        return self.reports[self.deltas.index(self.argmin_delta)]


def scan_delta(
    data: ForceDataset,
    theory_family: Callable[[float], Callable],
    grid,
) -> ScanResult:
    """Profile chi^2 over a grid of rms-fluctuation amplitudes.

    ``theory_family(delta)`` must return a force evaluator.  One parameter
    (the amplitude) counts as fitted, so dof = n - 1.  Ties break toward
    the smaller amplitude.
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError("grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly ascending")
    reports = tuple(
        chi_squared(data, theory_family(delta), fitted_params=1) for delta in grid
    )
    best = int(np.argmin([r.chi2 for r in reports]))  # first minimum = smallest delta
    return ScanResult(deltas=tuple(grid), reports=reports, argmin_delta=grid[best])


class BinningExcess(NamedTuple):
    """Excess in-band scatter extracted from observed vs expected sigma."""

    excess: float
    inverted: bool


def binning_consistency(sigma_observed: float, sigma_expected: float) -> BinningExcess:
    """Excess scatter sqrt(sigma_obs^2 - sigma_exp^2).

    This is the in-band fluctuation contribution to be matched against
    F' * delta_rms.  Inverted inputs (observed below expected) return a
    zero excess with the ``inverted`` flag set and a warning.
    """
    if sigma_expected < 0 or sigma_observed < 0:
        raise DomainError("sigmas must be >= 0")
    if sigma_observed < sigma_expected:
        warnings.warn(
            "observed scatter below expectation; no fluctuation excess extractable",
            stacklevel=2,
        )
        return BinningExcess(0.0, True)
    return BinningExcess(
        math.sqrt(sigma_observed**2 - sigma_expected**2), False
    )
