"""Sampling theorems on the sphere and total-variation inpainting.

Modules
-------
grids
    DH and MW equiangular grids, quadrature weights, integration.
transforms
    Inverse spherical harmonic transform, its adjoint and its left-inverse.
operators
    Masking, noise, discrete gradient, weighted TV norm, SNR.
solver
    Primal-dual solvers of the spatial and harmonic TV inpainting problems.
signals
    Band-limited test signals (Earth land mask, random caps).
experiment
    Seeded Monte Carlo sweeps and CSV output.
render
    Map images of signals.
"""

from .grids import Scheme, SphereGrid, build_grid, integrate, node_count, ring_quadrature_weights
from .operators import MeasurementSet, snr_db, tv_norm
from .solver import SolverConfig, SolverResult, solve_harmonic, solve_spatial
from .transforms import adjoint_inverse_sht, forward_sht, inverse_sht

__version__ = "0.1.0"

__all__ = [
    "Scheme",
    "SphereGrid",
    "build_grid",
    "node_count",
    "ring_quadrature_weights",
    "integrate",
    "inverse_sht",
    "forward_sht",
    "adjoint_inverse_sht",
    "MeasurementSet",
    "tv_norm",
    "snr_db",
    "SolverConfig",
    "SolverResult",
    "solve_spatial",
    "solve_harmonic",
]
