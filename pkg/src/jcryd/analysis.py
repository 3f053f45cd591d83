"""Least-squares fits of splitting versus Rabi frequency and slope ratios."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FitError


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    slope_std_err: float
    residual_rms: float
    point_count: int
    constrain_origin: bool


@dataclass(frozen=True)
class RatioEstimate:
    ratio: float
    std_err: float


def fit_linear(points, constrain_origin: bool = True, weights=None) -> LinearFit:
    """Weighted least squares line through ``points`` (rows of x, y).

    With ``weights=None`` this is ordinary least squares. For multiplicative
    noise pass ``weights = 1 / x**2``. The slope standard error comes from
    the weighted residual variance and needs at least 3 points; with fewer
    it is NaN.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise FitError("need at least 2 (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != x.shape or np.any(~np.isfinite(w)) or np.any(w < 0):
        raise FitError("weights must be finite, non-negative, one per point")
    if np.ptp(x) == 0:
        raise FitError("all x values are equal; slope is undetermined")

    n = x.size
    if constrain_origin:
        sxx = np.sum(w * x * x)
        slope = float(np.sum(w * x * y) / sxx)
        intercept = 0.0
        dof = n - 1
        leverage = sxx
    else:
        sw = np.sum(w)
        xm, ym = np.sum(w * x) / sw, np.sum(w * y) / sw
        sxx = np.sum(w * (x - xm) ** 2)
        slope = float(np.sum(w * (x - xm) * (y - ym)) / sxx)
        intercept = float(ym - slope * xm)
        dof = n - 2
        leverage = sxx
    resid = y - (slope * x + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    if n < 3 or dof < 1:
        se = math.nan
    else:
        se = float(np.sqrt(np.sum(w * resid**2) / dof / leverage))
    return LinearFit(slope, intercept, se, rms, n, constrain_origin)


def slope_ratio(fit_two_atom: LinearFit, fit_single: LinearFit) -> RatioEstimate:
    """Ratio of slopes with first-order (delta-method) uncertainty."""
    s2, s1 = fit_two_atom.slope, fit_single.slope
    if not (s1 > 0 and s2 > 0):
        raise DomainError("slope ratio needs positive slopes")
    ratio = s2 / s1
    rel = math.hypot(fit_two_atom.slope_std_err / s2, fit_single.slope_std_err / s1)
    return RatioEstimate(ratio, ratio * rel)


def fit_splittings(table, constrain_origin: bool = True, weighting: str = "none"):
    """Fit both columns of a (omega_r, single, two-atom) table and take the ratio.

    ``weighting="relative"`` uses ``1/x**2`` weights and drops x = 0 rows,
    which carry no information under multiplicative noise.
    """
    t = np.asarray(table, dtype=float)
    if weighting == "relative":
        t = t[t[:, 0] != 0]
        w = 1.0 / t[:, 0] ** 2
    elif weighting == "none":
        w = None
    else:
        raise DomainError(f"unknown weighting {weighting!r}")
    single = fit_linear(t[:, [0, 1]], constrain_origin, w)
    double = fit_linear(t[:, [0, 2]], constrain_origin, w)
    return single, double, slope_ratio(double, single)


def noisy_ratio_trials(table, noise_fraction: float, trials: int, seed: int,
                       constrain_origin: bool = True, weighting: str = "relative") -> np.ndarray:
    """Repeat the slope-ratio fit on data with Gaussian multiplicative noise.

    Trial ``i`` draws from ``SeedSequence(seed, spawn_key=(i,))``. Returns
    rows of (ratio, std_err).
    """
    t = np.asarray(table, dtype=float)
    out = np.empty((trials, 2))
    for i in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        noise = 1.0 + noise_fraction * rng.standard_normal((t.shape[0], 2))
        noisy = np.column_stack([t[:, 0], t[:, 1:] * noise])
        _, _, est = fit_splittings(noisy, constrain_origin, weighting)
        out[i] = est.ratio, est.std_err
    return out
