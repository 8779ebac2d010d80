"""Equiangular sampling grids on the sphere and their quadrature weights.

Two schemes are supported:

* ``DH``: 2L colatitude rings at ``pi (2t + 1) / (4L)`` and 2L longitudes,
  ``4 L**2`` nodes in total.
* ``MW``: L colatitude rings at ``pi (2t + 1) / (2L - 1)`` (the last ring sits
  on the south pole) and 2L - 1 longitudes, ``L (2L - 1)`` nodes in total.

Samples on a grid are stored as arrays of shape ``(ntheta, nphi)``; the flat
node index is ``t * nphi + p``.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache

import numpy as np
from numpy.polynomial import legendre

__all__ = [
    "Scheme",
    "SphereGrid",
    "build_grid",
    "node_count",
    "ring_quadrature_weights",
    "integrate",
]


class Scheme(str, Enum):
    DH = "DH"
    MW = "MW"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown sampling scheme {value!r}; expected DH or MW") from None


def _check_band_limit(L):
    if int(L) != L or L < 1:
        raise ValueError(f"band-limit must be a positive integer, got {L!r}")
    return int(L)


def node_count(scheme, L):
    """Number of sample nodes of ``scheme`` at band-limit ``L``."""
    L = _check_band_limit(L)
    if Scheme.parse(scheme) is Scheme.MW:
        return L * (2 * L - 1)
    return 4 * L * L


@dataclass(frozen=True)
class SphereGrid:
    """Equiangular node set of one sampling scheme at band-limit ``L``.

    Instances are immutable and hashable, so they can key caches of
    precomputed tables.
    """

    scheme: Scheme
    L: int

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        object.__setattr__(self, "L", _check_band_limit(self.L))

    @property
    def ntheta(self):
        return self.L if self.scheme is Scheme.MW else 2 * self.L

    @property
    def nphi(self):
        return 2 * self.L - 1 if self.scheme is Scheme.MW else 2 * self.L

    @property
    def shape(self):
        return (self.ntheta, self.nphi)

    @property
    def size(self):
        return self.ntheta * self.nphi

    @cached_property
    def thetas(self):
        t = np.arange(self.ntheta)
        if self.scheme is Scheme.MW:
            th = (2 * t + 1) / (2 * self.L - 1) * np.pi
        else:
            th = np.pi * (2 * t + 1) / (4 * self.L)
        th.flags.writeable = False
        return th

    @cached_property
    def phis(self):
        ph = 2 * np.pi * np.arange(self.nphi) / self.nphi
        ph.flags.writeable = False
        return ph

    @property
    def dtheta(self):
        """Spacing between consecutive rings (radians)."""
        return 2 * np.pi / (2 * self.L - 1) if self.scheme is Scheme.MW else np.pi / (2 * self.L)

    @property
    def dphi(self):
        return 2 * np.pi / self.nphi

    def nodes(self):
        """Return ``(theta, phi)`` arrays of shape :attr:`shape`."""
        return np.meshgrid(self.thetas, self.phis, indexing="ij")

    def check_signal(self, x):
        x = np.asarray(x)
        if x.shape == self.shape:
            return x
        if x.shape == (self.size,):
            return x.reshape(self.shape)
        raise ValueError(f"signal of shape {x.shape} does not live on a {self.scheme.value} grid "
                         f"with L={self.L} (expected {self.shape})")


def build_grid(scheme, L):
    """Construct the equiangular grid of ``scheme`` at band-limit ``L``."""
    return SphereGrid(Scheme.parse(scheme), L)


@lru_cache(maxsize=None)
def ring_quadrature_weights(grid):
    """Per-ring quadrature weights ``w_t`` of ``grid``.

    The weights integrate in ``cos(theta)``: they are defined by the
    exactness conditions ``sum_t w_t P_l(cos theta_t) = 2 delta_l0`` for
    ``l < 2L`` on DH grids and ``l < L`` on MW grids (solved in the least
    squares sense). A full node's area element is ``w_t * grid.dphi``.

    Raises
    ------
    numpy.linalg.LinAlgError
        If the exactness system is numerically singular.
    """
    z = np.cos(grid.thetas)
    n = grid.ntheta
    A = legendre.legvander(z, n - 1).T
    b = np.zeros(n)
    b[0] = 2.0
    if grid.scheme is Scheme.DH:
        w = np.linalg.solve(A, b)
    else:
        w, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
        if rank < n:
            raise np.linalg.LinAlgError(f"MW quadrature system is rank deficient (rank {rank} < {n})")
    w.flags.writeable = False
    return w


def integrate(grid, weights, samples):
    """Quadrature sum ``sum_{t,p} w_t dphi x_{tp}`` of samples on ``grid``."""
    x = grid.check_signal(samples)
    weights = np.asarray(weights)
    if weights.shape != (grid.ntheta,):
        raise ValueError(f"expected {grid.ntheta} ring weights, got shape {weights.shape}")
    return grid.dphi * np.sum(weights * x.sum(axis=1))
