"""Time evolution over the symmetric basis.

Static Hamiltonians are propagated exactly through their eigen-decomposition.
Ramps are piecewise linear in (delta_r, omega_r, omega_uw), which makes the
Hamiltonian affine in time on each segment; those segments are integrated by
fixed-step RK4 (compiled kernel when available) with a step-halving check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .errors import DomainError, IntegrationError
from .hamiltonians import HMatrix, affine_driven, is_hermitian
from .ladder import LadderResult, ladder
from .symbasis import ModelParams, SymState

NORM_TOL = 1e-9
CONVERGENCE_TOL = 1e-8
STEP_FRACTION = 1e-3
MAX_HALVINGS = 4


def _as_vector(psi) -> np.ndarray:
    return np.asarray(psi.amplitudes if isinstance(psi, SymState) else psi, dtype=complex)


def evolve_static(h: HMatrix | np.ndarray, psi0: SymState, t: float) -> SymState:
    """``exp(-i H t) psi0`` by eigen-decomposition."""
    m = np.asarray(h)
    if not is_hermitian(m):
        raise DomainError("evolve_static needs a Hermitian Hamiltonian")
    psi = _as_vector(psi0)
    if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
        raise DomainError("initial state must be normalized")
    if t == 0:
        return SymState(psi)
    w, v = np.linalg.eigh(m)
    return SymState(v @ (np.exp(-1j * w * t) * (v.conj().T @ psi)))


@dataclass(frozen=True)
class RampSegment:
    """Linear ramp of the controls over ``duration``; each control is (start, end)."""

    duration: float
    delta_r: tuple[float, float]
    omega_r: tuple[float, float]
    omega_uw: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not (math.isfinite(self.duration) and self.duration >= 0):
            raise DomainError("segment duration must be finite and >= 0")
        for name in ("delta_r", "omega_r", "omega_uw"):
            pair = tuple(float(x) for x in getattr(self, name))
            if len(pair) != 2 or not all(math.isfinite(x) for x in pair):
                raise DomainError(f"{name} must be a finite (start, end) pair")
            object.__setattr__(self, name, pair)
        if min(self.omega_r) < 0 or min(self.omega_uw) < 0:
            raise DomainError("Rabi frequencies must be >= 0")

    def start(self) -> np.ndarray:
        return np.array([self.delta_r[0], self.omega_r[0], self.omega_uw[0]])

    def end(self) -> np.ndarray:
        return np.array([self.delta_r[1], self.omega_r[1], self.omega_uw[1]])


@dataclass(frozen=True)
class RampProtocol:
    """Piecewise-linear schedule of (delta_r, omega_r, omega_uw).

    ``delta_uw`` (probe detuning) is held fixed for the whole protocol.
    """

    segments: tuple[RampSegment, ...]
    delta_uw: float = 0.0

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise DomainError("a ramp needs at least one segment")
        object.__setattr__(self, "segments", segs)
        if not self.total_duration > 0:
            raise DomainError("total ramp duration must be > 0")
        for prev, nxt in zip(segs, segs[1:]):
            if np.max(np.abs(prev.end() - nxt.start())) > 1e-12:
                raise DomainError("ramp controls must be continuous at segment joins")

    @classmethod
    def constant(cls, duration: float, delta_r: float, omega_r: float, omega_uw: float = 0.0,
                 delta_uw: float = 0.0) -> RampProtocol:
        seg = RampSegment(duration, (delta_r, delta_r), (omega_r, omega_r), (omega_uw, omega_uw))
        return cls((seg,), delta_uw)

    @property
    def total_duration(self) -> float:
        return float(sum(s.duration for s in self.segments))

    def controls_at(self, t: float) -> np.ndarray:
        """(delta_r, omega_r, omega_uw) at time ``t``."""
        if not 0 <= t <= self.total_duration * (1 + 1e-12):
            raise DomainError(f"t={t} outside [0, {self.total_duration}]")
        t0 = 0.0
        for seg in self.segments:
            if t <= t0 + seg.duration or seg is self.segments[-1]:
                if seg.duration == 0:
                    return seg.end()
                frac = min(max((t - t0) / seg.duration, 0.0), 1.0)
                return seg.start() + frac * (seg.end() - seg.start())
            t0 += seg.duration
        raise AssertionError("unreachable")

    def params_at(self, params: ModelParams, t: float) -> ModelParams:
        delta_r, omega_r, _ = self.controls_at(t)
        return params.replace(delta_r=float(delta_r), omega_r=float(omega_r))


@dataclass(frozen=True)
class EvolutionReport:
    """Outcome of a ramp integration.

    ``fidelity_trace`` holds (t, |<tracked eigenstate|psi(t)>|^2) samples;
    ``min_gap`` is the smallest distance from the tracked eigenvalue to any
    other eigenvalue of the same coupled sector.
    """

    final_state: SymState
    norm_drift: float
    times: np.ndarray
    fidelity_trace: np.ndarray
    tracked_energy: np.ndarray
    min_gap: float
    step: float
    convergence_delta: float
    n_steps: int = field(default=0)

    @property
    def final_fidelity(self) -> float:
        return float(self.fidelity_trace[-1])


def instantaneous_spectrum(protocol: RampProtocol, params: ModelParams, t: float) -> LadderResult:
    """Ladder of the probe-free Hamiltonian at the controls reached at time ``t``."""
    return ladder(protocol.params_at(params, t))


def default_step(protocol: RampProtocol, params: ModelParams) -> float:
    """``STEP_FRACTION`` of the shortest period ``2 pi / ||H||`` over the ramp."""
    aff = affine_driven(params)
    bound = 0.0
    for seg in protocol.segments:
        for ctl in (seg.start(), seg.end()):
            bound = max(bound, np.linalg.norm(aff.at(*ctl, protocol.delta_uw), 2))
    if bound == 0:
        return protocol.total_duration * STEP_FRACTION
    return STEP_FRACTION * 2 * math.pi / bound


def _segment_plan(protocol, step):
    """Per segment: (number of steps, exact step) hitting the segment end."""
    plan = []
    for seg in protocol.segments:
        if seg.duration == 0:
            plan.append((0, 0.0))
            continue
        n = max(1, math.ceil(seg.duration / step - 1e-9))
        plan.append((n, seg.duration / n))
    return plan


def _integrate(protocol, aff, psi0, step, n_samples):
    """Integrate; return final state and the state at evenly spaced sample indices."""
    plan = _segment_plan(protocol, step)
    total_steps = sum(n for n, _ in plan)
    chunk = max(1, total_steps // max(n_samples - 1, 1))
    psi = psi0.copy()
    t_global = 0.0
    times, states = [0.0], [psi.copy()]
    for seg, (n, h) in zip(protocol.segments, plan):
        if n == 0:
            continue
        start, end = seg.start(), seg.end()
        rate = (end - start) / seg.duration
        a = aff.at(*start, protocol.delta_uw)
        b = rate[0] * aff.d_delta_r + rate[1] * aff.d_omega_r + rate[2] * aff.d_omega_uw
        done = 0
        while done < n:
            todo = min(chunk, n - done)
            psi = _kernels.rk4_affine(psi, a, b, done * h, h, todo)
            done += todo
            times.append(t_global + done * h)
            states.append(psi.copy())
        t_global += seg.duration
    return psi, np.array(times), states, total_steps


def _sectors(protocol, aff, times) -> np.ndarray:
    """Connected components of the union coupling graph over the ramp."""
    pattern = np.zeros(aff.const.shape, dtype=bool)
    for t in times:
        pattern |= np.abs(aff.at(*protocol.controls_at(t), protocol.delta_uw)) > 0
    _, comp = connected_components(pattern, directed=False)
    return comp


def _track(protocol, aff, psi0, times, states):
    comp = _sectors(protocol, aff, times)
    fid, energy, gaps = [], [], []
    prev = None
    for t, psi in zip(times, states):
        h = aff.at(*protocol.controls_at(min(t, protocol.total_duration)), protocol.delta_uw)
        if prev is None:
            sector = comp[np.argmax(np.abs(psi0))]
            idx = np.flatnonzero(comp == sector)
            w, v = np.linalg.eigh(h[np.ix_(idx, idx)])
            j = int(np.argmax(np.abs(v.conj().T @ psi0[idx]) ** 2))
        else:
            w, v = np.linalg.eigh(h[np.ix_(idx, idx)])
            j = int(np.argmax(np.abs(v.conj().T @ prev) ** 2))
        prev = v[:, j]
        fid.append(float(np.abs(np.vdot(prev, psi[idx])) ** 2))
        energy.append(float(w[j]))
        others = np.delete(w, j)
        gaps.append(float(np.min(np.abs(others - w[j]))) if others.size else math.inf)
    return np.array(fid), np.array(energy), min(gaps)


def evolve_ramp(
    protocol: RampProtocol,
    params: ModelParams,
    psi0: SymState,
    step: float | None = None,
    n_samples: int = 101,
) -> EvolutionReport:
    """Integrate the driven Schroedinger equation along ``protocol``.

    The run is repeated with the step halved until the final amplitudes move
    by less than ``CONVERGENCE_TOL`` and the norm drift stays below
    ``NORM_TOL``; the finer run is reported.
    """
    psi = _as_vector(psi0)
    if psi.size != params.dim:
        raise DomainError("state dimension does not match the model")
    if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
        raise DomainError("initial state must be normalized")
    if step is None:
        step = default_step(protocol, params)
    if not step > 0:
        raise DomainError("step must be > 0")
    aff = affine_driven(params)

    coarse, *_ = _integrate(protocol, aff, psi, step, 2)
    for _ in range(MAX_HALVINGS):
        step /= 2
        fine, times, states, n_steps = _integrate(protocol, aff, psi, step, n_samples)
        delta = float(np.max(np.abs(fine - coarse)))
        drift = float(abs(np.linalg.norm(fine) - 1))
        if delta < CONVERGENCE_TOL and drift <= NORM_TOL:
            break
        coarse = fine
    else:
        raise IntegrationError(
            f"ramp did not converge: amplitude change {delta:.2e}, norm drift {drift:.2e}"
        )
    fid, energy, gap = _track(protocol, aff, psi, times, states)
    return EvolutionReport(SymState(fine), drift, times, fid, energy, gap, step, delta, n_steps)
