"""Brute-force product-space model used to validate the symmetric reduction.

Each atom has levels ``0 -> |0>``, ``1 -> |1>``, ``1+k -> |r_k>``. Product
index is the base-(2+K) number formed by the atom levels, atom 0 most
significant. Energies are relative to ``flips * omega_hf`` as in the
symmetric model; a Rydberg atom counts as one flip.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError, DomainError
from .hamiltonians import BasisTag, FrameTag, HMatrix, build_symmetric
from .symbasis import ModelParams, enumerate_basis

MAX_PRODUCT_DIM = 100_000
MAX_DENSE_DIM = 4096
INFINITE = math.inf


@dataclass(frozen=True)
class ProductParams:
    """Symmetric-model parameters plus a pairwise blockade energy.

    ``blockade = math.inf`` removes every state with two or more Rydberg
    atoms instead of penalizing it.
    """

    base: ModelParams
    blockade: float = INFINITE

    def __post_init__(self):
        if math.isnan(self.blockade) or self.blockade < 0:
            raise DomainError("blockade strength must be >= 0 or inf")
        if self.full_dim > MAX_PRODUCT_DIM:
            raise CapacityError(
                f"product dimension {self.full_dim} exceeds the guard {MAX_PRODUCT_DIM}"
            )

    @property
    def levels(self) -> int:
        return 2 + self.base.n_channels

    @property
    def full_dim(self) -> int:
        return self.levels ** self.base.n_atoms

    @property
    def perfect(self) -> bool:
        return math.isinf(self.blockade)


def product_digits(pp: ProductParams) -> np.ndarray:
    """Per-atom level of every product state, shape (L**N, N)."""
    N, L = pp.base.n_atoms, pp.levels
    idx = np.arange(L**N)
    return np.stack([(idx // L ** (N - 1 - i)) % L for i in range(N)], axis=1)


def kept_states(pp: ProductParams) -> np.ndarray:
    """Product indices retained: all, or those with at most one Rydberg atom."""
    digits = product_digits(pp)
    if not pp.perfect:
        return np.arange(digits.shape[0])
    return np.flatnonzero((digits >= 2).sum(axis=1) <= 1)


def single_atom_hamiltonian(params: ModelParams) -> np.ndarray:
    L = 2 + params.n_channels
    h = np.zeros((L, L), dtype=complex)
    for k, ch in enumerate(params.channels, start=1):
        h[1 + k, 1 + k] = -(params.delta_r + ch.detuning_offset)
        h[1 + k, 1] = h[1, 1 + k] = ch.rabi_scale * params.omega_r / 2
    return h


def product_hamiltonian(pp: ProductParams) -> sp.csr_matrix:
    """Sparse product-space Hamiltonian on :func:`kept_states`."""
    N, L = pp.base.n_atoms, pp.levels
    h1 = sp.csr_matrix(single_atom_hamiltonian(pp.base))
    total = sp.csr_matrix((L**N, L**N), dtype=complex)
    for i in range(N):
        term = sp.identity(1, dtype=complex, format="csr")
        for j in range(N):
            term = sp.kron(term, h1 if j == i else sp.identity(L, format="csr"), format="csr")
        total = total + term
    if not pp.perfect and pp.blockade > 0:
        nr = (product_digits(pp) >= 2).sum(axis=1)
        total = total + sp.diags(pp.blockade * nr * (nr - 1) / 2.0)
    keep = kept_states(pp)
    return total[keep][:, keep].tocsr()


def build_product(pp: ProductParams) -> HMatrix:
    """Dense product-space Hamiltonian (dimension capped at ``MAX_DENSE_DIM``)."""
    keep = kept_states(pp)
    if keep.size > MAX_DENSE_DIM:
        raise CapacityError(f"dense product matrix of dimension {keep.size} exceeds {MAX_DENSE_DIM}")
    digits = product_digits(pp)[keep]
    labels = tuple(tuple(int(x) for x in row) for row in digits)
    return HMatrix(product_hamiltonian(pp).toarray(), BasisTag.PRODUCT, FrameTag.LASER, labels)


def _occupations(pp: ProductParams) -> np.ndarray:
    digits = product_digits(pp)[kept_states(pp)]
    return np.stack([(digits == lev).sum(axis=1) for lev in range(pp.levels)], axis=1)


def _isometry(pp: ProductParams, targets: list[tuple[int, ...]]) -> sp.csr_matrix:
    """Columns are normalized equal superpositions over each occupation pattern."""
    occ = _occupations(pp)
    rows, cols, vals = [], [], []
    for c, target in enumerate(targets):
        members = np.flatnonzero(np.all(occ == np.array(target), axis=1))
        rows.extend(members)
        cols.extend([c] * members.size)
        vals.extend([1.0 / math.sqrt(members.size)] * members.size)
    return sp.csr_matrix((vals, (rows, cols)), shape=(occ.shape[0], len(targets)), dtype=complex)


def _pattern(idx, N, K) -> tuple[int, ...]:
    occ = [0] * (2 + K)
    if idx.kind == "g":
        occ[0], occ[1] = N - idx.n, idx.n
    else:
        occ[0], occ[1], occ[1 + idx.channel] = N - idx.n - 1, idx.n, 1
    return tuple(occ)


@dataclass(frozen=True)
class Symmetrizer:
    """Isometry from the symmetric blockaded basis into the product space."""

    matrix: sp.csr_matrix
    params: ProductParams

    def embed(self, amplitudes) -> np.ndarray:
        return self.matrix @ np.asarray(amplitudes, dtype=complex)

    def column(self, i: int) -> np.ndarray:
        return self.matrix[:, i].toarray().ravel()


def symmetrize(pp: ProductParams) -> Symmetrizer:
    N, K = pp.base.n_atoms, pp.base.n_channels
    targets = [_pattern(s, N, K) for s in enumerate_basis(pp.base)]
    return Symmetrizer(_isometry(pp, targets), pp)


def full_symmetric_patterns(pp: ProductParams) -> list[tuple[int, ...]]:
    """Every occupation pattern present in the kept product space."""
    N, L = pp.base.n_atoms, pp.levels
    pats = [c for c in itertools.product(range(N + 1), repeat=L) if sum(c) == N]
    if pp.perfect:
        pats = [c for c in pats if sum(c[2:]) <= 1]
    return sorted(pats)


def swap_operator(pp: ProductParams, i: int, j: int) -> sp.csr_matrix:
    """Permutation matrix exchanging atoms ``i`` and ``j`` on the kept space."""
    N, L = pp.base.n_atoms, pp.levels
    keep = kept_states(pp)
    digits = product_digits(pp)[keep]
    swapped = digits.copy()
    swapped[:, [i, j]] = swapped[:, [j, i]]
    weights = L ** np.arange(N - 1, -1, -1)
    target = swapped @ weights
    pos = np.full(L**N, -1)
    pos[keep] = np.arange(keep.size)
    data = np.ones(keep.size)
    return sp.csr_matrix((data, (pos[target], np.arange(keep.size))), shape=(keep.size, keep.size))


@dataclass(frozen=True)
class ProjectionReport:
    max_matrix_deviation: float
    max_eigenvalue_deviation: float
    symmetric_eigenvalues: np.ndarray
    product_eigenvalues: np.ndarray


def verify_projection(pp: ProductParams, reference: HMatrix | None = None) -> ProjectionReport:
    """Compare the product model, reduced to the symmetric sector, with the symmetric model.

    The matrix check is ``S^dag H_product S`` against ``reference``
    (default :func:`build_symmetric`). The eigenvalue check diagonalizes
    ``H_product`` on the full permutation-symmetric sector, keeps the
    eigenstates with less than half their weight on multi-Rydberg patterns,
    and compares them with the reference spectrum.
    """
    ref = np.asarray(reference if reference is not None else build_symmetric(pp.base))
    h = product_hamiltonian(pp)
    s = symmetrize(pp).matrix
    reduced = (s.conj().T @ h @ s).toarray()
    matrix_dev = float(np.max(np.abs(reduced - ref)))

    patterns = full_symmetric_patterns(pp)
    s_full = _isometry(pp, patterns)
    h_sector = (s_full.conj().T @ h @ s_full).toarray()
    w, v = np.linalg.eigh(h_sector)
    multi = np.array([sum(p[2:]) >= 2 for p in patterns])
    weight = (np.abs(v[multi, :]) ** 2).sum(axis=0) if multi.any() else np.zeros(w.size)
    low = np.sort(w[weight < 0.5])
    sym = np.linalg.eigvalsh(ref)
    eig_dev = float(np.max(np.abs(low - sym))) if low.size == sym.size else math.inf
    return ProjectionReport(matrix_dev, eig_dev, sym, low)
