"""Dressed-state ladder of the undriven blockaded Hamiltonian.

The Hamiltonian is block diagonal in the total flip number n: the rung-n
block couples ``|g,n>`` to ``|e_k,n-1>`` for every channel k. Each rung is
diagonalized independently; for a single channel the two dressed states
are labelled ``plus`` (ground-like) and ``minus`` (Rydberg-like) following
``E_{n,+-} = (-delta_r +- sign(delta_r) sqrt(n omega_r^2 + delta_r^2)) / 2``
with ``sign(0) = +1``, so at resonance ``plus`` is the upper state.
With several channels the rung eigenvalues carry positional labels
``b1, b2, ...`` counted from the top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, UnsupportedModelError
from .hamiltonians import build_symmetric
from .symbasis import ModelParams, SymState, flip_numbers

RESIDUAL_RTOL = 1e-10
PLUS, MINUS = "plus", "minus"


def _sign(x: float) -> float:
    return 1.0 if x >= 0 else -1.0


def analytic_epsilon(n: int, omega_r: float, delta_r: float, branch: str) -> float:
    """Closed-form rung energy relative to ``n * omega_hf`` (single channel)."""
    root = math.sqrt(n * omega_r**2 + delta_r**2)
    sg = _sign(delta_r)
    if branch == PLUS:
        # root - |delta| rewritten to avoid cancellation at large detuning
        return sg * n * omega_r**2 / (2.0 * (root + abs(delta_r)))
    return -sg * 0.5 * (root + abs(delta_r))


def analytic_kappa(omega_r: float, delta_r: float) -> tuple[float, float]:
    """Closed-form nonlinear shifts ``(kappa_plus, kappa_minus)``."""
    s = _sign(delta_r)
    core = math.sqrt(2 * omega_r**2 + delta_r**2) - 2 * math.sqrt(omega_r**2 + delta_r**2)
    return 0.5 * (delta_r + s * core), 0.5 * (delta_r - s * core)


def branch_labels(params: ModelParams) -> tuple[str, ...]:
    """Labels in descending-energy order for one rung."""
    if params.n_channels == 1:
        return (PLUS, MINUS) if params.delta_r >= 0 else (MINUS, PLUS)
    return tuple(f"b{i}" for i in range(1, params.n_channels + 2))


@dataclass(frozen=True)
class Rung:
    """One diagonalized n-block.

    ``eigenvalues`` ascend; ``eigenvectors[:, i]`` is the full-basis vector of
    ``eigenvalues[i]`` and ``labels[i]`` its branch label.
    """

    n: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    labels: tuple[str, ...]

    def energy(self, label: str) -> float:
        return float(self.eigenvalues[self.labels.index(label)])

    def vector(self, label: str) -> np.ndarray:
        return self.eigenvectors[:, self.labels.index(label)]

    @property
    def splitting(self) -> float:
        """Spread of the rung: ``|E+ - E-|`` for a single channel."""
        return float(self.eigenvalues[-1] - self.eigenvalues[0])


@dataclass(frozen=True)
class LadderResult:
    params: ModelParams
    rungs: tuple[Rung, ...]
    kappa: dict[str, float]
    mixing_angles: tuple[float, ...] | None

    def rung(self, n: int) -> Rung:
        return self.rungs[n - 1]

    def epsilon(self, n: int, label: str) -> float:
        return self.rung(n).energy(label)

    @property
    def labels(self) -> tuple[str, ...]:
        return branch_labels(self.params)

    @property
    def splittings(self) -> list[float]:
        return [r.splitting for r in self.rungs]

    @property
    def kappa_plus(self) -> float:
        return self.kappa[PLUS] if PLUS in self.kappa else self.kappa[self.labels[0]]

    @property
    def kappa_minus(self) -> float:
        return self.kappa[MINUS] if MINUS in self.kappa else self.kappa[self.labels[-1]]


def _fix_phase(v: np.ndarray) -> np.ndarray:
    j = int(np.argmax(np.abs(v) > 1e-14))
    return v * (abs(v[j]) / v[j])


def diagonalize_rung(params: ModelParams, n: int, h: np.ndarray | None = None) -> Rung:
    """Eigen-decomposition of the rung-n block (any ``n >= 1``).

    Rungs above ``N`` are evaluated on the ``N = n`` model; the block itself
    does not depend on ``N``.
    """
    if n < 1:
        raise DomainError("rung index n must be >= 1")
    if n > params.n_atoms:
        params = params.replace(n_atoms=n)
        h = None
    if h is None:
        h = np.asarray(build_symmetric(params))
    idx = np.flatnonzero(flip_numbers(params) == n)
    block = h[np.ix_(idx, idx)]
    w, v = np.linalg.eigh(block)
    scale = max(np.linalg.norm(block, 2), np.finfo(float).tiny)
    resid = np.linalg.norm(block @ v - v * w, axis=0).max()
    if resid > RESIDUAL_RTOL * scale and resid > 1e-300:
        raise ConvergenceError(f"rung {n}: eigen residual {resid:.3e} exceeds tolerance")
    vecs = np.zeros((h.shape[0], len(w)), dtype=complex)
    vecs[idx, :] = v
    vecs = np.column_stack([_fix_phase(vecs[:, i]) for i in range(len(w))])
    labels = tuple(reversed(branch_labels(params)))
    return Rung(n, w, vecs, labels)


def ladder(params: ModelParams) -> LadderResult:
    h = np.asarray(build_symmetric(params))
    rungs = tuple(diagonalize_rung(params, n, h) for n in range(1, params.n_atoms + 1))
    r1 = rungs[0]
    r2 = rungs[1] if len(rungs) > 1 else diagonalize_rung(params, 2)
    kappa = {lab: r2.energy(lab) - 2 * r1.energy(lab) for lab in branch_labels(params)}
    angles = None
    if params.n_channels == 1 and params.omega_r > 0:
        angles = tuple(mixing_angle(params, n) for n in range(1, params.n_atoms + 1))
    return LadderResult(params, rungs, kappa, angles)


def mixing_angle(params: ModelParams, n: int) -> float:
    """``theta_n = atan2(sqrt(n) omega_r, delta_r)`` in (0, pi).

    ``cos(theta/2)|g,n> + sin(theta/2)|e,n-1>`` is the upper dressed state,
    which is the ground-like one for ``delta_r >= 0``.
    """
    if params.n_channels != 1:
        raise UnsupportedModelError("mixing angle is defined for a single Rydberg channel")
    if params.omega_r == 0:
        raise DomainError("mixing angle is undefined at omega_r = 0")
    if not 1 <= n <= params.n_atoms:
        raise DomainError(f"n must be in 1..{params.n_atoms}")
    return math.atan2(math.sqrt(n) * params.omega_r, params.delta_r)


def dressed_state(params: ModelParams, n: int, label: str = PLUS) -> SymState:
    """Numerically computed dressed eigenstate of rung ``n``."""
    if not 1 <= n <= params.n_atoms:
        raise DomainError(f"n must be in 1..{params.n_atoms}")
    return SymState(diagonalize_rung(params, n).vector(label))


def kappa_asymptotics(params: ModelParams) -> dict[str, float]:
    """Leading far-detuned behaviour of the nonlinear shifts.

    ``kappa_plus ~ -omega_r**4 / (8 delta_r**3)`` and ``kappa_minus ~ delta_r``,
    valid for ``|delta_r| >= 5 omega_r``.
    """
    d, om = params.delta_r, params.omega_r
    if d == 0 or abs(d) < 5 * om:
        raise DomainError("asymptotic forms need |delta_r| >= 5 omega_r and delta_r != 0")
    return {"kappa_plus_limit": -(om**4) / (8 * d**3), "kappa_minus_limit": d}



def rung_eigenvalues(params: ModelParams, n: int, delta_r, omega_r) -> np.ndarray:
    """Batched rung-n eigenvalues, descending, for arrays of (delta_r, omega_r).

    Returns shape ``broadcast(delta_r, omega_r).shape + (K + 1,)``; column i
    carries ``branch_labels(params)[i]`` provided every ``delta_r`` has the
    sign of ``params.delta_r``.
    """
    d, om = np.broadcast_arrays(np.asarray(delta_r, float), np.asarray(omega_r, float))
    K = params.n_channels
    blocks = np.zeros(d.shape + (K + 1, K + 1))
    root_n = math.sqrt(n)
    for k, ch in enumerate(params.channels, start=1):
        blocks[..., k, k] = -(d + ch.detuning_offset)
        blocks[..., 0, k] = blocks[..., k, 0] = root_n * ch.rabi_scale * om / 2
    return np.linalg.eigvalsh(blocks)[..., ::-1]
