from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jcryd import DomainError, ModelParams, RydbergChannel, SymIndex, SymState, enumerate_basis, index_of
from jcryd.symbasis import ZEEMAN_RABI_SCALE, basis_dimension, flip_numbers


def test_dimension_examples():
    assert basis_dimension(1) == 3
    assert basis_dimension(2) == 5
    assert basis_dimension(2, 2) == 7
    assert ModelParams(4, 1.0).dim == 9


def test_basis_order_two_atoms():
    labels = [str(s) for s in enumerate_basis(ModelParams(2, 1.0))]
    assert labels == ["|g,0>", "|g,1>", "|g,2>", "|e,0>", "|e,1>"]


@given(st.integers(1, 8), st.integers(1, 2))
def test_index_round_trip(n_atoms, n_channels):
    chans = (RydbergChannel(),) + (RydbergChannel(ZEEMAN_RABI_SCALE, 2.0),) * (n_channels - 1)
    p = ModelParams(n_atoms, 1.0, channels=chans)
    basis = enumerate_basis(p)
    assert len(basis) == basis_dimension(n_atoms, n_channels) == (n_atoms + 1) + n_channels * n_atoms
    assert [index_of(s, p) for s in basis] == list(range(len(basis)))


def test_flip_numbers():
    np.testing.assert_array_equal(flip_numbers(ModelParams(2, 1.0)), [0, 1, 2, 1, 2])


@pytest.mark.parametrize(
    "idx",
    [SymIndex.ground(3), SymIndex.excited(2), SymIndex.excited(0, channel=2)],
)
def test_index_out_of_range(idx):
    with pytest.raises(DomainError):
        index_of(idx, ModelParams(2, 1.0))


@pytest.mark.parametrize(
    "kwargs",
    [dict(n_atoms=0, omega_r=1.0), dict(n_atoms=2, omega_r=-1.0), dict(n_atoms=2, omega_r=float("nan"))],
)
def test_invalid_params(kwargs):
    with pytest.raises(DomainError):
        ModelParams(**kwargs)


def test_state_helpers():
    p = ModelParams(2, 1.0)
    s = SymState.basis(SymIndex.excited(1), p)
    assert s.norm == pytest.approx(1.0)
    assert s.dominant(p) == SymIndex.excited(1)
    assert s.populations()[4] == 1.0
    with pytest.raises(ValueError):
        s.amplitudes[0] = 1.0
