from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jcryd import (
    DomainError,
    DriveParams,
    ModelParams,
    SymIndex,
    build_cavity_jc,
    build_driven,
    build_symmetric,
    index_of,
    is_hermitian,
)
from jcryd.errors import UnsupportedModelError
from jcryd.hamiltonians import affine_driven, restore_ladder
from jcryd.symbasis import flip_numbers

finite = st.floats(-5, 5, allow_nan=False)
positive = st.floats(0.01, 5)


def _h(params):
    return np.asarray(build_symmetric(params))


def test_single_atom_matrix():
    h = _h(ModelParams(1, 1.0, 1.0))
    expected = np.array([[0, 0, 0], [0, 0, 0.5], [0, 0.5, -1.0]])
    np.testing.assert_allclose(h, expected, atol=1e-15)


def test_zeeman_channel_coupling():
    p = ModelParams.with_zeeman(2, 1.0)
    h = _h(p)
    i, j = index_of(SymIndex.excited(0, 2), p), index_of(SymIndex.ground(1), p)
    assert h[i, j].real == pytest.approx(0.28868, abs=1e-5)
    assert h[i, i].real == pytest.approx(-2.13)


@given(st.integers(1, 6), positive, finite)
def test_block_structure(n_atoms, om, d):
    p = ModelParams(n_atoms, om, d)
    h = _h(p)
    f = flip_numbers(p)
    assert np.all(h[f[:, None] != f[None, :]] == 0)
    assert is_hermitian(h)


@given(st.integers(1, 8), positive)
def test_sqrt_n_enhancement(n_atoms, om):
    p = ModelParams(n_atoms, om)
    h = _h(p)
    base = h[index_of(SymIndex.excited(0), p), index_of(SymIndex.ground(1), p)].real
    for n in range(1, n_atoms + 1):
        c = h[index_of(SymIndex.excited(n - 1), p), index_of(SymIndex.ground(n), p)].real
        assert c / base == pytest.approx(math.sqrt(n), rel=1e-15)


def test_driven_probe_elements():
    p = ModelParams(2, 1.0, 0.3)
    h = np.asarray(build_driven(p, DriveParams(omega_uw=0.2, delta_uw=0.1)))
    g0, g1 = index_of(SymIndex.ground(0), p), index_of(SymIndex.ground(1), p)
    e0, e1 = index_of(SymIndex.excited(0), p), index_of(SymIndex.excited(1), p)
    assert h[g1, g0].real == pytest.approx(math.sqrt(2) * 0.1)
    assert h[e1, e0].real == pytest.approx(0.1)
    assert h[g1, g1].real == pytest.approx(-0.1)
    assert h[e0, e0].real == pytest.approx(-0.3 - 0.1)
    assert is_hermitian(h)


@given(positive, finite, st.floats(0, 1), finite)
def test_affine_matches_direct(om, d, ouw, duw):
    p = ModelParams(3, 1.0)
    aff = affine_driven(p)
    direct = np.asarray(build_driven(p.replace(omega_r=om, delta_r=d), DriveParams(ouw, duw)))
    np.testing.assert_allclose(aff.at(d, om, ouw, duw), direct, atol=1e-13)


def test_restore_ladder_adds_flip_energy():
    p = ModelParams(2, 1.0, omega_hf=10.0)
    diff = np.asarray(restore_ladder(build_symmetric(p), p)) - _h(p)
    np.testing.assert_allclose(np.diag(diff).real, 10.0 * flip_numbers(p))


def test_cavity_jc_errors():
    with pytest.raises(UnsupportedModelError):
        build_cavity_jc(ModelParams.with_zeeman(2, 1.0))
    with pytest.raises(DomainError):
        build_cavity_jc(ModelParams(2, 1.0), truncation=3)


def test_matrix_is_read_only():
    h = build_symmetric(ModelParams(1, 1.0))
    with pytest.raises(ValueError):
        h.entries[0, 0] = 1.0
