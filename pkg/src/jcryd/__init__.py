"""Jaynes-Cummings ladder of symmetric Rydberg-blockaded atomic ensembles.

Units: angular frequency with hbar = 1; symmetric-basis energies are
measured relative to ``n * omega_hf``.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .analysis import LinearFit, fit_linear, slope_ratio
from .dynamics import RampProtocol, RampSegment, evolve_ramp, evolve_static, instantaneous_spectrum
from .errors import (
    CapacityError,
    ConfigError,
    ConvergenceError,
    DomainError,
    FitError,
    IntegrationError,
    JcrydError,
    UnsupportedModelError,
)
from .hamiltonians import (
    DriveParams,
    HMatrix,
    build_cavity_jc,
    build_driven,
    build_symmetric,
    is_hermitian,
)
from .ladder import LadderResult, kappa_asymptotics, ladder, mixing_angle
from .oracle import ProductParams, build_product, symmetrize, verify_projection
from .spectroscopy import (
    ScanConfig,
    drift_bands,
    peak_positions,
    simulate_scan,
    splitting_vs_rabi,
)
from .symbasis import ModelParams, RydbergChannel, SymIndex, SymState, enumerate_basis, index_of

__version__ = "0.1.0"
