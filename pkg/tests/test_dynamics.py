from __future__ import annotations

import math

import numpy as np
import pytest

from jcryd import (
    DomainError,
    ModelParams,
    RampProtocol,
    RampSegment,
    SymIndex,
    SymState,
    build_symmetric,
    evolve_ramp,
    evolve_static,
)
from jcryd.dynamics import NORM_TOL
from jcryd.ladder import dressed_state


def test_sqrt_n_rabi_flop():
    p = ModelParams(2, 1.0)
    psi0 = SymState.basis(SymIndex.ground(2), p)
    psi = evolve_static(build_symmetric(p), psi0, math.pi / math.sqrt(2))
    assert psi.populations()[4] == pytest.approx(1.0, abs=1e-12)


def test_static_norm_and_energy():
    p = ModelParams(3, 1.3, -0.4)
    h = np.asarray(build_symmetric(p))
    rng = np.random.default_rng(3)
    v = rng.standard_normal(p.dim) + 1j * rng.standard_normal(p.dim)
    psi0 = SymState(v / np.linalg.norm(v))
    e0 = np.vdot(psi0.amplitudes, h @ psi0.amplitudes).real
    for t in (0.1, 3.0, 57.0):
        psi = evolve_static(h, psi0, t)
        assert abs(psi.norm - 1) <= NORM_TOL
        e = np.vdot(psi.amplitudes, h @ psi.amplitudes).real
        assert abs(e - e0) <= 1e-9 * abs(e0)


def test_static_rejects_unnormalized():
    p = ModelParams(1, 1.0)
    with pytest.raises(DomainError):
        evolve_static(build_symmetric(p), SymState(np.ones(3)), 1.0)


def test_protocol_validation():
    with pytest.raises(DomainError):
        RampProtocol((RampSegment(1.0, (0, 1), (1, 1)), RampSegment(1.0, (2, 2), (1, 1))))
    proto = RampProtocol.constant(2.0, 0.5, 1.0)
    assert proto.total_duration == 2.0
    with pytest.raises(DomainError):
        proto.controls_at(3.0)


def _demote(p, duration):
    proto = RampProtocol((RampSegment(duration, (1.0, 1.0), (1.0, 0.0)),))
    psi0 = dressed_state(p, 1, "plus")
    return evolve_ramp(proto, p, psi0)


def test_adiabatic_demotion_to_bare_state():
    p = ModelParams(1, 1.0, 1.0)
    rep = _demote(p, 200.0)
    assert rep.norm_drift <= NORM_TOL
    assert rep.final_fidelity >= 0.999
    assert rep.final_state.dominant(p) == SymIndex.ground(1)


def test_landau_zener_ladder_monotone():
    p = ModelParams(1, 1.0, 3.0)
    fids = []
    for duration in (1.0, 2.0, 4.0, 8.0):
        proto = RampProtocol((RampSegment(duration, (3.0, -3.0), (1.0, 1.0)),))
        rep = evolve_ramp(proto, p, dressed_state(p, 1, "plus"))
        assert rep.norm_drift <= NORM_TOL
        fids.append(rep.final_fidelity)
    assert all(b > a for a, b in zip(fids, fids[1:]))


def test_ramp_direction_asymmetry():
    p = ModelParams(2, 1.0, 1.0)
    psi0 = dressed_state(p, 2, "minus")
    ends = []
    for target in (40.0, -40.0):
        proto = RampProtocol((RampSegment(120.0, (1.0, target), (1.0, 1.0)),))
        rep = evolve_ramp(proto, p, psi0)
        ends.append(rep.final_state.dominant(p.replace(delta_r=target)))
    assert ends[0] != ends[1]
    assert set(ends) == {SymIndex.excited(1), SymIndex.ground(2)}
