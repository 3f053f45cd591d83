from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from jcryd import DomainError, ModelParams, kappa_asymptotics, ladder, mixing_angle
from jcryd.errors import UnsupportedModelError
from jcryd.ladder import MINUS, PLUS, analytic_epsilon, analytic_kappa, dressed_state, rung_eigenvalues
from jcryd.symbasis import SymIndex, index_of

positive = st.floats(0.05, 5)
detuning = st.floats(-10, 10)


def test_reference_rungs():
    lad = ladder(ModelParams(2, 1.0, 1.0))
    assert lad.epsilon(1, PLUS) == pytest.approx(0.20711, abs=1e-5)
    assert lad.epsilon(1, MINUS) == pytest.approx(-1.20711, abs=1e-5)
    assert lad.epsilon(2, PLUS) == pytest.approx(0.36603, abs=1e-5)
    assert lad.epsilon(2, MINUS) == pytest.approx(-1.36603, abs=1e-5)
    assert lad.kappa_plus == pytest.approx(-0.04819, abs=1e-5)
    assert lad.kappa_minus == pytest.approx(1.04819, abs=1e-5)


def test_resonant_splittings():
    lad = ladder(ModelParams(2, 2.5))
    assert lad.splittings == pytest.approx([2.5, 2.5 * math.sqrt(2)], rel=1e-12)


def test_mixing_angle_and_dressed_state():
    p = ModelParams(1, 1.0, 1.0)
    theta = mixing_angle(p, 1)
    assert theta == pytest.approx(math.pi / 4)
    v = dressed_state(p, 1, PLUS).amplitudes
    assert abs(v[index_of(SymIndex.ground(1), p)]) == pytest.approx(0.92388, abs=1e-5)


@given(st.integers(1, 4), positive, detuning)
def test_closed_form(n, om, d):
    p = ModelParams(n, om, d)
    lad = ladder(p)
    for lab in (PLUS, MINUS):
        exact = analytic_epsilon(n, om, d, lab)
        assert lad.epsilon(n, lab) == pytest.approx(exact, rel=1e-12, abs=1e-12 * om)


@given(positive, detuning)
def test_kappa_identity(om, d):
    lad = ladder(ModelParams(2, om, d))
    for lab in (PLUS, MINUS):
        assert lad.kappa[lab] == pytest.approx(lad.epsilon(2, lab) - 2 * lad.epsilon(1, lab), abs=1e-12)
    kp, km = analytic_kappa(om, d)
    assert lad.kappa_plus == pytest.approx(kp, abs=1e-11)
    assert lad.kappa_minus == pytest.approx(km, abs=1e-11)


@given(st.integers(1, 4), positive, detuning)
def test_sign_property(n, om, d):
    assume(abs(d) > 1e-6)
    lad = ladder(ModelParams(n, om, d))
    s = math.copysign(1.0, d)
    assert s * lad.epsilon(n, PLUS) > 0
    assert s * lad.epsilon(n, MINUS) < 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sorted_branches_continuous_through_resonance(n):
    # The sorted upper/lower curves are continuous; the labelled branches swap
    # at zero detuning because of the sign property.
    eps = 1e-6
    lo = rung_eigenvalues(ModelParams(n, 1.0), n, np.array([-eps]), 1.0)[0]
    hi = rung_eigenvalues(ModelParams(n, 1.0), n, np.array([eps]), 1.0)[0]
    assert np.max(np.abs(hi - lo)) < 1e-5


def test_kappa_asymptotics_reference():
    p = ModelParams(2, 1.0, 10.0)
    lim = kappa_asymptotics(p)
    assert abs(ladder(p).kappa_plus) == pytest.approx(1.2317e-4, rel=1e-3)
    assert lim["kappa_plus_limit"] == pytest.approx(-1.25e-4)
    assert lim["kappa_minus_limit"] == 10.0


def test_asymptotics_domain():
    with pytest.raises(DomainError):
        kappa_asymptotics(ModelParams(2, 1.0, 1.0))


def test_mixing_angle_guards():
    with pytest.raises(UnsupportedModelError):
        mixing_angle(ModelParams.with_zeeman(2, 1.0), 1)
    with pytest.raises(DomainError):
        mixing_angle(ModelParams(2, 0.0), 1)


def test_zeeman_labels_descend():
    lad = ladder(ModelParams.with_zeeman(2, 1.0, 0.5))
    assert lad.labels == ("b1", "b2", "b3")
    e = [lad.epsilon(1, lab) for lab in lad.labels]
    assert e == sorted(e, reverse=True)
