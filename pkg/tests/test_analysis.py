from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jcryd import FitError, ModelParams, fit_linear, slope_ratio, splitting_vs_rabi
from jcryd.analysis import fit_splittings, noisy_ratio_trials


def test_exact_line():
    x = np.linspace(0.5, 4, 8)
    fit = fit_linear(np.column_stack([x, 3 * x]))
    assert fit.slope == pytest.approx(3.0)
    assert fit.slope_std_err == pytest.approx(0.0, abs=1e-12)
    free = fit_linear(np.column_stack([x, 3 * x + 1]), constrain_origin=False)
    assert free.intercept == pytest.approx(1.0)


def test_fit_errors():
    with pytest.raises(FitError):
        fit_linear(np.array([[1.0, 2.0]]))
    with pytest.raises(FitError):
        fit_linear(np.array([[1.0, 2.0], [1.0, 3.0]]))
    assert math.isnan(fit_linear(np.array([[1.0, 2.0], [2.0, 4.1]])).slope_std_err)


@given(st.floats(0.1, 10), st.integers(0, 1000))
def test_scale_equivariance(c, seed):
    rng = np.random.default_rng(seed)
    x = np.linspace(0.4, 4, 10)
    y1 = x * (1 + 0.05 * rng.standard_normal(10))
    y2 = 1.4 * x * (1 + 0.05 * rng.standard_normal(10))
    f1, f2 = fit_linear(np.column_stack([x, y1])), fit_linear(np.column_stack([x, y2]))
    g1, g2 = fit_linear(np.column_stack([x, c * y1])), fit_linear(np.column_stack([x, c * y2]))
    assert g1.slope == pytest.approx(c * f1.slope, rel=1e-12)
    assert slope_ratio(g2, g1).ratio == pytest.approx(slope_ratio(f2, f1).ratio, rel=1e-12)


@given(st.integers(0, 1000))
def test_origin_fit_agrees_with_free_fit(seed):
    rng = np.random.default_rng(seed)
    x = np.linspace(0.4, 4, 10)
    pts = np.column_stack([x, 2 * x + 0.05 * rng.standard_normal(10)])
    a, b = fit_linear(pts), fit_linear(pts, constrain_origin=False)
    assert abs(a.slope - b.slope) <= 3 * b.slope_std_err


def test_noiseless_ratio():
    tab = splitting_vs_rabi(ModelParams(2, 1.0), np.linspace(0.4, 4, 10))
    _, _, est = fit_splittings(tab)
    assert est.ratio == pytest.approx(math.sqrt(2), abs=1e-12)


def test_trials_deterministic():
    tab = splitting_vs_rabi(ModelParams(2, 1.0), np.linspace(0.4, 4, 10))
    a = noisy_ratio_trials(tab, 0.05, 20, seed=4)
    b = noisy_ratio_trials(tab, 0.05, 20, seed=4)
    np.testing.assert_array_equal(a, b)
