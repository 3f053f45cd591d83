"""Hamiltonian constructors for the blockaded ensemble.

All symmetric-basis matrices measure energy relative to ``n * omega_hf``
(the linear ladder is removed), except where :func:`restore_ladder` puts it
back for the comparison with the cavity model.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, UnsupportedModelError
from .symbasis import ModelParams, enumerate_basis, flip_numbers, index_of, SymIndex

HERMITIAN_RTOL = 1e-12


class BasisTag(enum.Enum):
    SYMMETRIC = "symmetric"
    PRODUCT = "product"
    CAVITY_JC = "cavity_jc"


class FrameTag(enum.Enum):
    LASER = "laser"
    DOUBLY_ROTATING = "doubly_rotating"


@dataclass(frozen=True)
class HMatrix:
    """Dense complex Hermitian matrix with basis metadata.

    ``labels`` optionally names the basis states (symmetric indices, product
    occupation tuples, or ``(photons, qubit)`` pairs).
    """

    entries: np.ndarray
    basis_tag: BasisTag = BasisTag.SYMMETRIC
    frame_tag: FrameTag = FrameTag.LASER
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class DriveParams:
    """Global microwave/Raman probe on the |0> <-> |1> clock transition.

    ``delta_uw`` is the probe detuning from the hyperfine splitting.
    """

    omega_uw: float = 0.0
    delta_uw: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega_uw) and math.isfinite(self.delta_uw)):
            raise DomainError("drive parameters must be finite")
        if self.omega_uw < 0:
            raise DomainError("omega_uw must be >= 0")


def is_hermitian(h: HMatrix | np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    m = np.asarray(h)
    scale = np.max(np.abs(m)) if m.size else 0.0
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= rtol * scale)


def build_symmetric(
    params: ModelParams,
    *,
    collective_factor: Callable[[int], float] = math.sqrt,
) -> HMatrix:
    """Blockaded Hamiltonian in the symmetric bare basis.

    ``<e_k,n-1|H|g,n> = collective_factor(n) * rabi_scale_k * omega_r / 2``.
    ``collective_factor`` exists so verification can be shown to catch a
    wrong enhancement law; leave it at ``sqrt`` for physics.
    """
    N = params.n_atoms
    h = np.zeros((params.dim, params.dim), dtype=complex)
    for k, ch in enumerate(params.channels, start=1):
        detuning = params.delta_r + ch.detuning_offset
        for n in range(1, N + 1):
            g = index_of(SymIndex.ground(n), params)
            e = index_of(SymIndex.excited(n - 1, k), params)
            h[e, e] = -detuning
            h[e, g] = h[g, e] = collective_factor(n) * ch.rabi_scale * params.omega_r / 2
    return HMatrix(h, BasisTag.SYMMETRIC, FrameTag.LASER, tuple(enumerate_basis(params)))


def _probe_coupling(params: ModelParams) -> np.ndarray:
    """Collective spin-raising operator of the clock transition, per unit omega_uw/2."""
    N = params.n_atoms
    m = np.zeros((params.dim, params.dim))
    for n in range(N):
        a, b = index_of(SymIndex.ground(n), params), index_of(SymIndex.ground(n + 1), params)
        m[a, b] = m[b, a] = math.sqrt((n + 1) * (N - n))
    # the Rydberg atom is a spectator; the remaining N-1 atoms carry the spin
    for k in range(1, params.n_channels + 1):
        for j in range(N - 1):
            a = index_of(SymIndex.excited(j, k), params)
            b = index_of(SymIndex.excited(j + 1, k), params)
            m[a, b] = m[b, a] = math.sqrt((j + 1) * (N - 1 - j))
    return m


def build_driven(params: ModelParams, drive: DriveParams) -> HMatrix:
    """Probe-driven Hamiltonian in the doubly rotating frame (time independent)."""
    h = np.array(build_symmetric(params).entries)
    h -= drive.delta_uw * np.diag(flip_numbers(params))
    h += drive.omega_uw / 2 * _probe_coupling(params)
    return HMatrix(h, BasisTag.SYMMETRIC, FrameTag.DOUBLY_ROTATING, tuple(enumerate_basis(params)))


@dataclass(frozen=True)
class AffineHamiltonian:
    """Driven Hamiltonian split into parts linear in each control.

    ``H = const + delta_r*d_delta_r + omega_r*d_omega_r + omega_uw*d_omega_uw
    + delta_uw*d_delta_uw``; channel offsets and Rabi ratios live in the
    parts, so only the four scalars vary along a ramp.
    """

    const: np.ndarray
    d_delta_r: np.ndarray
    d_omega_r: np.ndarray
    d_omega_uw: np.ndarray
    d_delta_uw: np.ndarray

    def at(self, delta_r, omega_r, omega_uw, delta_uw=0.0) -> np.ndarray:
        return (
            self.const
            + delta_r * self.d_delta_r
            + omega_r * self.d_omega_r
            + omega_uw * self.d_omega_uw
            + delta_uw * self.d_delta_uw
        )


def affine_driven(params: ModelParams) -> AffineHamiltonian:
    def sym(delta_r, omega_r):
        return np.asarray(build_symmetric(params.replace(delta_r=delta_r, omega_r=omega_r)))

    const = sym(0.0, 0.0)
    return AffineHamiltonian(
        const=const,
        d_delta_r=sym(1.0, 0.0) - const,
        d_omega_r=sym(0.0, 1.0) - const,
        d_omega_uw=_probe_coupling(params).astype(complex) / 2,
        d_delta_uw=-np.diag(flip_numbers(params)).astype(complex),
    )


def restore_ladder(h: HMatrix, params: ModelParams) -> HMatrix:
    """Add back the ``flips * omega_hf`` energy removed from symmetric matrices."""
    if h.basis_tag is not BasisTag.SYMMETRIC:
        raise DomainError("restore_ladder applies to symmetric-basis matrices only")
    m = np.array(h.entries) + params.omega_hf * np.diag(flip_numbers(params))
    return HMatrix(m, h.basis_tag, h.frame_tag, h.labels)


def build_cavity_jc(params: ModelParams, truncation: int | None = None) -> HMatrix:
    """Cavity-QED Jaynes-Cummings Hamiltonian truncated to <= N excitations.

    ``omega_c = omega_hf``, ``omega_eg = omega_hf - delta_r``,
    ``g = omega_r / 2``. Absolute energies. States are ordered
    ``|0,g>..|N,g>, |0,e>..|N-1,e>`` so they line up with the symmetric basis.
    """
    if params.n_channels != 1:
        raise UnsupportedModelError("the cavity JC model has a single two-level system (K=1)")
    N = params.n_atoms
    if truncation is None:
        truncation = N
    if truncation != N:
        raise DomainError(f"truncation must equal N={N}")

    nmax = truncation
    a = np.diag(np.sqrt(np.arange(1, nmax + 1)), k=1).astype(complex)
    sm = np.array([[0, 1], [0, 0]], dtype=complex)  # qubit order (g, e): sigma_- = |g><e|
    eye_c, eye_q = np.eye(nmax + 1), np.eye(2)
    g = params.omega_r / 2
    omega_c = params.omega_hf
    omega_eg = params.omega_hf - params.delta_r
    h_full = (
        omega_c * np.kron(a.conj().T @ a, eye_q)
        + omega_eg * np.kron(eye_c, sm.conj().T @ sm)
        + g * (np.kron(a.conj().T, sm) + np.kron(a, sm.conj().T))
    )
    # product index = photons*2 + qubit; keep excitation number photons+qubit <= N
    keep = [p * 2 for p in range(nmax + 1)] + [p * 2 + 1 for p in range(nmax)]
    h = h_full[np.ix_(keep, keep)]
    labels = tuple((p, "g") for p in range(nmax + 1)) + tuple((p, "e") for p in range(nmax))
    return HMatrix(h, BasisTag.CAVITY_JC, FrameTag.LASER, labels)
