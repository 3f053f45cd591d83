"""Autler-Townes spectroscopy of the dressed ladder.

A probe starting in ``|g,0>`` reaches rung n with n spin flips, so its
resonance sits at the per-flip detuning ``delta_uw = epsilon_{n,k} / n``.
This module provides those analytic positions, numerical scans that
recover them from driven dynamics, drift envelopes, and the multi-channel
branch structure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.signal import find_peaks, peak_widths

from .errors import DomainError
from .hamiltonians import DriveParams, build_driven
from .ladder import PLUS, analytic_epsilon, branch_labels, ladder, rung_eigenvalues
from .symbasis import ModelParams, SymIndex, flip_numbers, index_of

DEFAULT_THRESHOLD = 0.10
NO_SIGNAL_FLOOR = 1e-9


class Signal(enum.Enum):
    TOTAL_TRANSFER = "total"
    PER_FLIP = "per_flip"


class SweepAxis(enum.Enum):
    DELTA_R = "delta_r"
    OMEGA_R = "omega_r"


@dataclass(frozen=True)
class Peak:
    position: float
    n: int
    branch: str
    height: float = math.nan
    width: float = math.nan
    channel: str = "analytic"


@dataclass(frozen=True)
class PeakSet:
    """Resonances with branch assignments.

    ``reference`` holds the non-interacting lines (two independent atoms
    resonate at the single-atom position ``epsilon_{1,k}``).
    """

    peaks: tuple[Peak, ...]
    reference: tuple[Peak, ...] = ()
    diagnostic: str | None = None

    def __len__(self):
        return len(self.peaks)

    def __iter__(self):
        return iter(self.peaks)

    def get(self, n: int, branch: str) -> Peak:
        for p in self.peaks:
            if p.n == n and p.branch == branch:
                return p
        raise KeyError((n, branch))

    def positions(self) -> dict[tuple[int, str], float]:
        return {(p.n, p.branch): p.position for p in self.peaks}


def peak_positions(params: ModelParams) -> PeakSet:
    """Analytic per-flip resonances ``epsilon_{n,k} / n`` for n = 1..N."""
    lad = ladder(params)
    peaks = tuple(
        Peak(float(lad.epsilon(n, lab)) / n, n, lab)
        for n in range(1, params.n_atoms + 1)
        for lab in lad.labels
    )
    reference = tuple(Peak(lad.epsilon(1, lab), 1, lab, channel="reference") for lab in lad.labels)
    return PeakSet(peaks, reference)


def closed_form_position(n: int, omega_r: float, delta_r: float, branch: str) -> float:
    """Single-channel per-flip resonance straight from the closed form."""
    return analytic_epsilon(n, omega_r, delta_r, branch) / n


def nearest_assignment(position: float, analytic: PeakSet) -> Peak:
    return min(analytic.peaks, key=lambda p: (abs(p.position - position), p.n))


@dataclass(frozen=True)
class ScanConfig:
    """Probe scan settings.

    ``resolution`` is the separation below which two local maxima count as
    one feature (the higher is kept); it defaults to the Fourier limit
    ``2 pi / pulse_time``.
    """

    delta_uw_grid: np.ndarray
    pulse_time: float
    omega_uw: float
    initial_state: SymIndex = SymIndex.ground(0)
    signal: Signal = Signal.TOTAL_TRANSFER
    threshold: float = DEFAULT_THRESHOLD
    resolution: float | None = None

    def __post_init__(self):
        grid = np.array(self.delta_uw_grid, dtype=float)
        if grid.ndim != 1 or grid.size < 3:
            raise DomainError("delta_uw_grid needs at least 3 points")
        if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0):
            raise DomainError("delta_uw_grid must be finite and strictly increasing")
        grid.setflags(write=False)
        object.__setattr__(self, "delta_uw_grid", grid)
        if not self.pulse_time > 0:
            raise DomainError("pulse_time must be > 0")
        if self.omega_uw < 0:
            raise DomainError("omega_uw must be >= 0")
        object.__setattr__(self, "signal", Signal(self.signal))

    @property
    def peak_resolution(self) -> float:
        return self.resolution if self.resolution is not None else 2 * math.pi / self.pulse_time


@dataclass(frozen=True)
class Spectrum:
    """Scan samples and extracted peaks.

    ``values`` has shape ``(G,)`` for total transfer, ``(G, N+1)`` for
    per-flip populations (column n = population with n flips).
    """

    grid: np.ndarray
    values: np.ndarray
    signal: Signal
    peaks: PeakSet

    def channel(self, name: str) -> np.ndarray:
        if self.signal is Signal.TOTAL_TRANSFER:
            if name != "total":
                raise KeyError(name)
            return self.values
        return self.values[:, int(name.removeprefix("flip"))]


def _scan_populations(params: ModelParams, scan: ScanConfig) -> np.ndarray:
    base = np.asarray(build_driven(params, DriveParams(scan.omega_uw, 0.0)))
    flips = flip_numbers(params).astype(float)
    grid = scan.delta_uw_grid
    stack = base[None, :, :] - grid[:, None, None] * np.diag(flips)[None, :, :]
    w, v = np.linalg.eigh(stack)
    i0 = index_of(scan.initial_state, params)
    coeff = v[:, i0, :].conj() * np.exp(-1j * w * scan.pulse_time)
    psi = np.einsum("gij,gj->gi", v, coeff)
    return np.abs(psi) ** 2


def _extract(grid, sig, scan, analytic, channel, flips=None) -> list[Peak]:
    top = float(np.max(sig))
    if top < NO_SIGNAL_FLOOR:
        return []
    step = float(np.median(np.diff(grid)))
    distance = max(1, int(scan.peak_resolution / step))
    idx, _ = find_peaks(sig, height=scan.threshold * top, distance=distance)
    if idx.size == 0:
        return []
    widths = peak_widths(sig, idx, rel_height=0.5)[0] * step
    # a flip-n channel is fed by the n-flip resonances; fall back to all if none exist
    pool = [p for p in analytic.peaks if p.n == flips] if flips is not None else []
    candidates = PeakSet(tuple(pool)) if pool else analytic
    out = []
    for i, wdt in zip(idx, widths):
        ref = nearest_assignment(float(grid[i]), candidates)
        out.append(Peak(float(grid[i]), ref.n, ref.branch, float(sig[i]), float(wdt), channel))
    return out


def simulate_scan(params: ModelParams, scan: ScanConfig) -> Spectrum:
    """Square probe pulse at every grid detuning, then peak extraction.

    Peaks are local maxima above ``threshold * max``; each is assigned to the
    nearest analytic resonance (per-flip channels only consider resonances of
    their own flip number). A flat (all-zero) signal yields an empty
    PeakSet with ``diagnostic="no_signal"``.
    """
    pops = _scan_populations(params, scan)
    analytic = peak_positions(params)
    grid = scan.delta_uw_grid
    if scan.signal is Signal.TOTAL_TRANSFER:
        values = np.clip(1.0 - pops[:, index_of(scan.initial_state, params)], 0.0, 1.0)
        channels = {"total": values}
    else:
        flips = flip_numbers(params)
        values = np.clip(
            np.stack([pops[:, flips == n].sum(axis=1) for n in range(params.n_atoms + 1)], axis=1),
            0.0, 1.0,
        )
        start = scan.initial_state.flips
        channels = {f"flip{n}": values[:, n] for n in range(params.n_atoms + 1) if n != start}
    peaks = []
    for name, sig in channels.items():
        flips = int(name.removeprefix("flip")) if name.startswith("flip") else None
        peaks.extend(_extract(grid, sig, scan, analytic, name, flips))
    diagnostic = None if peaks else "no_signal"
    return Spectrum(grid, values, scan.signal, PeakSet(tuple(peaks), analytic.reference, diagnostic))


def splitting_vs_rabi(template: ModelParams, omega_r_grid) -> np.ndarray:
    """Resonant level splittings: rows of (omega_r, single-atom, two-atom)."""
    grid = np.asarray(omega_r_grid, dtype=float)
    if template.delta_r != 0 and np.any(abs(template.delta_r) >= 1e-9 * grid):
        raise DomainError("splitting_vs_rabi requires delta_r = 0")
    if template.n_channels != 1:
        raise DomainError("splitting_vs_rabi is defined for a single Rydberg channel")
    rows = []
    for om in grid:
        p = template.replace(omega_r=float(om), n_atoms=max(template.n_atoms, 2))
        lad = ladder(p)
        single = abs(lad.epsilon(1, "plus") - lad.epsilon(1, "minus"))
        double = abs(lad.epsilon(2, "plus") - lad.epsilon(2, "minus"))
        rows.append((float(om), single, double))
    return np.array(rows)


@dataclass(frozen=True)
class DriftBand:
    """Pointwise drift envelopes.

    ``curves[(n, label)] = (nominal, lower, upper)`` over ``grid``: per-flip
    peak positions for a detuning sweep, rung splittings (label
    ``"splitting"``) for a Rabi sweep.
    """

    axis: SweepAxis
    grid: np.ndarray
    curves: dict[tuple[int, str], tuple[np.ndarray, np.ndarray, np.ndarray]]
    drift_fraction: float
    sample_count: int
    seed: int = field(default=0)


def drift_factors(seed: int, point: int, sample_count: int, drift_fraction: float,
                  distribution: str = "uniform") -> np.ndarray:
    """Multiplicative (delta_r, omega_r) factors for one sweep point.

    Seeded per point from ``(seed, point)``, so points can be evaluated in any
    order or in parallel with identical results.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(point,)))
    if distribution == "uniform":
        u = rng.uniform(-1.0, 1.0, size=(sample_count, 2))
    elif distribution == "normal":
        u = rng.standard_normal(size=(sample_count, 2))
    else:
        raise DomainError(f"unknown drift distribution {distribution!r}")
    return 1.0 + drift_fraction * u


def _curve_values(params, axis, x, d, om):
    """Curve values for arrays of drifted (delta_r, omega_r) at one sweep point."""
    out = {}
    labels = branch_labels(params.replace(delta_r=float(x) if axis is SweepAxis.DELTA_R else params.delta_r))
    for n in range(1, params.n_atoms + 1):
        ev = rung_eigenvalues(params, n, d, om)
        if axis is SweepAxis.DELTA_R:
            for i, lab in enumerate(labels):
                out[(n, lab)] = ev[..., i] / n
        else:
            out[(n, "splitting")] = ev[..., 0] - ev[..., -1]
    return out


def drift_bands(
    params: ModelParams,
    axis: SweepAxis | str,
    grid,
    drift_fraction: float = 0.05,
    sample_count: int = 400,
    seed: int = 0,
    distribution: str = "uniform",
) -> DriftBand:
    """Min/max envelopes of the theory curves under multiplicative drift."""
    axis = SweepAxis(axis)
    grid = np.asarray(grid, dtype=float)
    if drift_fraction < 0:
        raise DomainError("drift_fraction must be >= 0")
    if sample_count < 2:
        raise DomainError("sample_count must be >= 2")
    acc: dict = {}
    for i, x in enumerate(grid):
        d0, om0 = (x, params.omega_r) if axis is SweepAxis.DELTA_R else (params.delta_r, x)
        f = drift_factors(seed, i, sample_count, drift_fraction, distribution)
        nominal = _curve_values(params, axis, x, np.array(d0), np.array(om0))
        drifted = _curve_values(params, axis, x, d0 * f[:, 0], om0 * f[:, 1])
        for key, nom in nominal.items():
            nom = float(nom)
            vals = drifted[key]
            acc.setdefault(key, []).append((nom, min(nom, vals.min()), max(nom, vals.max())))
    curves = {k: tuple(np.array(col) for col in zip(*rows)) for k, rows in acc.items()}
    return DriftBand(axis, grid, curves, drift_fraction, sample_count, seed)


def branch_curves(params: ModelParams, delta_r_grid, n: int) -> np.ndarray:
    """Per-flip rung-n positions over a detuning grid, descending per row."""
    d = np.asarray(delta_r_grid, dtype=float)
    return rung_eigenvalues(params, n, d, params.omega_r) / n


def avoided_crossings(params: ModelParams, delta_r_grid, n: int) -> list[tuple[float, float, int]]:
    """Local minima of adjacent-branch gaps: (delta_r, gap, upper branch index)."""
    d = np.asarray(delta_r_grid, dtype=float)
    ev = rung_eigenvalues(params, n, d, params.omega_r)
    gaps = ev[:, :-1] - ev[:, 1:]
    out = []
    for j in range(gaps.shape[1]):
        g = gaps[:, j]
        for i in range(1, len(d) - 1):
            if g[i] <= g[i - 1] and g[i] < g[i + 1]:
                out.append((float(d[i]), float(g[i]), j))
    return sorted(out)


def dressed_channel_resonance(params: ModelParams, channel: int, n: int) -> float:
    """Detuning where channel ``channel``'s bare rung-n level meets the ground-like level.

    The ground-like level is that of the channel-1-only model, so the result
    includes the light shift that channel 1 imposes on ``|g,n>``.
    """
    if not 2 <= channel <= params.n_channels:
        raise DomainError("channel must index an additional Rydberg channel")
    off = params.channels[channel - 1].detuning_offset
    if off == 0:
        raise DomainError("channel offset must be nonzero")
    om = params.omega_r

    def f(d):
        return -(d + off) - analytic_epsilon(n, om, d, PLUS)

    half = abs(off) / 2
    lo, hi = -off - half, -off + half
    if f(lo) * f(hi) > 0:
        raise DomainError("no dressed resonance near the channel offset")
    return float(brentq(f, lo, hi, xtol=1e-14, rtol=1e-14))
