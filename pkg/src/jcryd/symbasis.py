"""Symmetric, perfectly blockaded basis of an N-atom ensemble.

States are ``|g,n>`` (n atoms in |1>, none in a Rydberg level) and
``|e_k,n>`` (n atoms in |1>, exactly one atom in Rydberg channel k). The
canonical ordering is the ground block ``|g,0>..|g,N>`` followed by one
excited block ``|e_k,0>..|e_k,N-1>`` per channel.

Units: angular frequency with hbar = 1 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from .errors import DomainError

#: Rabi-frequency ratio of the m_J=+1/2 channel relative to m_J=+3/2.
ZEEMAN_RABI_SCALE = 1.0 / math.sqrt(3.0)
#: Zeeman separation of the two Rydberg channels in units of Omega_r.
ZEEMAN_SPLITTING_RATIO = 2.13


@dataclass(frozen=True)
class RydbergChannel:
    """One Rydberg level coupled to |1>.

    The channel Rabi frequency is ``rabi_scale * omega_r`` and its laser
    detuning is ``delta_r + detuning_offset``.
    """

    rabi_scale: float = 1.0
    detuning_offset: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.rabi_scale) and self.rabi_scale >= 0):
            raise DomainError(f"rabi_scale must be finite and >= 0, got {self.rabi_scale}")
        if not math.isfinite(self.detuning_offset):
            raise DomainError("detuning_offset must be finite")


PRIMARY_CHANNEL = RydbergChannel(1.0, 0.0)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the blockaded ensemble.

    Parameters
    ----------
    n_atoms : int
        Number of atoms N.
    omega_r : float
        Rydberg Rabi frequency of channel 1.
    delta_r : float
        Signed laser detuning of channel 1.
    omega_hf : float
        Hyperfine splitting. Only the explicit isomorphism check uses it;
        elsewhere energies are measured relative to ``n * omega_hf``.
    channels : tuple of RydbergChannel
        Channel 1 must be ``RydbergChannel(1, 0)``.
    """

    n_atoms: int
    omega_r: float
    delta_r: float = 0.0
    omega_hf: float = 0.0
    channels: tuple[RydbergChannel, ...] = field(default=(PRIMARY_CHANNEL,))

    def __post_init__(self):
        if isinstance(self.n_atoms, bool) or int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise DomainError(f"n_atoms must be a positive integer, got {self.n_atoms!r}")
        object.__setattr__(self, "n_atoms", int(self.n_atoms))
        for name in ("omega_r", "delta_r", "omega_hf"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if self.omega_r < 0:
            raise DomainError("omega_r must be >= 0")
        if self.omega_hf < 0:
            raise DomainError("omega_hf must be >= 0")
        channels = tuple(self.channels)
        if not channels:
            raise DomainError("at least one Rydberg channel is required")
        if channels[0] != PRIMARY_CHANNEL:
            raise DomainError("channel 1 must have rabi_scale=1 and detuning_offset=0")
        object.__setattr__(self, "channels", channels)

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    @property
    def dim(self) -> int:
        return basis_dimension(self.n_atoms, self.n_channels)

    def replace(self, **changes) -> ModelParams:
        return replace(self, **changes)

    @classmethod
    def with_zeeman(
        cls,
        n_atoms: int,
        omega_r: float,
        delta_r: float = 0.0,
        omega_hf: float = 0.0,
        sign: int = +1,
        splitting_ratio: float = ZEEMAN_SPLITTING_RATIO,
    ) -> ModelParams:
        """Two-channel model: m_J=+3/2 plus an m_J=+1/2 channel.

        The second channel has Rabi frequency ``omega_r/sqrt(3)`` and sits
        ``sign * splitting_ratio * omega_r`` away in detuning. The sign is a
        configuration choice; ``+1`` is the default.
        """
        if sign not in (+1, -1):
            raise DomainError("sign must be +1 or -1")
        second = RydbergChannel(ZEEMAN_RABI_SCALE, sign * splitting_ratio * omega_r)
        return cls(n_atoms, omega_r, delta_r, omega_hf, (PRIMARY_CHANNEL, second))


@dataclass(frozen=True, order=True)
class SymIndex:
    """Label of one symmetric basis state.

    ``kind`` is ``"g"`` (no Rydberg excitation) or ``"e"`` (one excitation in
    ``channel``, 1-based). ``n`` counts atoms in |1>, excluding the Rydberg atom.
    """

    kind: Literal["g", "e"]
    n: int
    channel: int = 0

    @classmethod
    def ground(cls, n: int) -> SymIndex:
        return cls("g", n, 0)

    @classmethod
    def excited(cls, n: int, channel: int = 1) -> SymIndex:
        return cls("e", n, channel)

    @property
    def flips(self) -> int:
        """Total flip number: atoms out of |0>, which fixes the ladder rung."""
        return self.n if self.kind == "g" else self.n + 1

    def __str__(self):
        if self.kind == "g":
            return f"|g,{self.n}>"
        return f"|e{self.channel},{self.n}>" if self.channel != 1 else f"|e,{self.n}>"


def basis_dimension(n_atoms: int, n_channels: int = 1) -> int:
    return (n_atoms + 1) + n_channels * n_atoms


def enumerate_basis(params: ModelParams) -> list[SymIndex]:
    """Canonical ordering: ground block, then one excited block per channel."""
    N = params.n_atoms
    states = [SymIndex.ground(n) for n in range(N + 1)]
    for k in range(1, params.n_channels + 1):
        states.extend(SymIndex.excited(n, k) for n in range(N))
    return states


def index_of(idx: SymIndex, params: ModelParams) -> int:
    N, K = params.n_atoms, params.n_channels
    if idx.kind == "g":
        if not 0 <= idx.n <= N:
            raise DomainError(f"{idx} out of range for N={N}")
        return idx.n
    if idx.kind == "e":
        if not (0 <= idx.n <= N - 1 and 1 <= idx.channel <= K):
            raise DomainError(f"{idx} out of range for N={N}, K={K}")
        return (N + 1) + (idx.channel - 1) * N + idx.n
    raise DomainError(f"unknown state kind {idx.kind!r}")


def flip_numbers(params: ModelParams) -> np.ndarray:
    """Total flip number of every basis state, in canonical order."""
    return np.array([s.flips for s in enumerate_basis(params)], dtype=int)


@dataclass(frozen=True)
class SymState:
    """Complex amplitude vector over the symmetric basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise DomainError("amplitudes must be a 1-d vector")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, idx: SymIndex, params: ModelParams) -> SymState:
        amps = np.zeros(params.dim, dtype=complex)
        amps[index_of(idx, params)] = 1.0
        return cls(amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def overlap(self, other: SymState) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def dominant(self, params: ModelParams) -> SymIndex:
        """Basis state carrying the largest population."""
        return enumerate_basis(params)[int(np.argmax(self.populations()))]
