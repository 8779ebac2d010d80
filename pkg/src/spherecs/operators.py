"""Measurement model, discrete total variation and error metrics on a grid.

The discrete gradient uses forward differences: periodic in longitude,
closed with a zero difference on the last colatitude ring, and with the
longitude difference scaled by ``1 / sin(theta)``. Rings sitting on a pole
(the last MW ring) collapse to a single point, so their longitude
differences are defined to be zero.

Randomness follows a fixed contract so that experiments are reproducible
bit for bit: every draw comes from a Philox counter-based stream keyed by
``(seed, stream)``; masks use a partial Fisher-Yates shuffle on uniform
doubles and Gaussian noise uses the Box-Muller transform.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .grids import ring_quadrature_weights

__all__ = [
    "GradientField",
    "MeasurementSet",
    "philox_stream",
    "spherical_gradient",
    "adjoint_gradient",
    "node_areas",
    "tv_norm",
    "draw_mask",
    "apply_measurement",
    "adjoint_measurement",
    "standard_normal",
    "add_noise",
    "epsilon_bound",
    "noise_sigma",
    "snr_db",
]

MASK_STREAM = 0
NOISE_STREAM = 1
_POLE_SIN = 1e-12


class GradientField(NamedTuple):
    """Discrete gradient of a signal; both components have the grid's shape."""

    dtheta: np.ndarray
    dphi_scaled: np.ndarray

    def magnitude(self):
        return np.sqrt(np.abs(self.dtheta) ** 2 + np.abs(self.dphi_scaled) ** 2)


@dataclass(frozen=True)
class MeasurementSet:
    """Noisy samples ``values`` of a signal at flat node ``indices``."""

    indices: np.ndarray
    values: np.ndarray
    sigma: float
    epsilon: float

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        vals = np.asarray(self.values)
        if idx.ndim != 1 or idx.size < 1:
            raise ValueError("a measurement set needs at least one index")
        if np.unique(idx).size != idx.size:
            raise ValueError("measurement indices must be distinct")
        if vals.shape != idx.shape:
            raise ValueError(f"{idx.size} indices but {vals.size} values")
        if self.epsilon < 0 or self.sigma < 0:
            raise ValueError("sigma and epsilon must be non-negative")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", vals)

    @property
    def M(self):
        return self.indices.size


def philox_stream(seed, stream=0):
    """Generator on the Philox stream keyed by ``(seed, stream)``."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be non-negative")
    return np.random.Generator(np.random.Philox(key=(int(stream) << 64) | int(seed)))


def _ring_factor(grid):
    s = np.sin(grid.thetas)
    with np.errstate(divide="ignore"):
        c = np.where(np.abs(s) > _POLE_SIN, 1.0 / (grid.dphi * s), 0.0)
    return c[:, None]


def spherical_gradient(x, grid):
    x = grid.check_signal(x)
    dth = np.zeros_like(x)
    dth[:-1] = (x[1:] - x[:-1]) / grid.dtheta
    dph = (np.roll(x, -1, axis=1) - x) * _ring_factor(grid)
    return GradientField(dth, dph)


def adjoint_gradient(g, grid):
    """Transpose of :func:`spherical_gradient` for the Euclidean inner product."""
    gt = grid.check_signal(g.dtheta)
    gp = grid.check_signal(g.dphi_scaled)
    out = np.zeros(gt.shape, dtype=np.result_type(gt, gp))
    out[:-1] -= gt[:-1]
    out[1:] += gt[:-1]
    out /= grid.dtheta
    c = _ring_factor(grid)
    out += c * (np.roll(gp, 1, axis=1) - gp)
    return out


def node_areas(grid, weights=None):
    """Area element ``w_t * dphi`` of each ring, as a column of shape ``(ntheta, 1)``."""
    if weights is None:
        weights = ring_quadrature_weights(grid)
    return (np.asarray(weights) * grid.dphi)[:, None]


def tv_norm(x, grid, weights=None):
    """Quadrature-weighted isotropic total variation of a real signal."""
    if np.iscomplexobj(x):
        raise TypeError("tv_norm expects a real-valued signal")
    g = spherical_gradient(x, grid)
    return float(np.sum(node_areas(grid, weights) * g.magnitude()))


def draw_mask(N, M, seed):
    """``M`` distinct node indices out of ``N``, sorted, reproducible per seed."""
    if not 1 <= M <= N:
        raise ValueError(f"need 1 <= M <= N, got M={M}, N={N}")
    u = philox_stream(seed, MASK_STREAM).random(M)
    perm = np.arange(N)
    for i in range(M):
        j = i + int(u[i] * (N - i))
        perm[i], perm[j] = perm[j], perm[i]
    return np.sort(perm[:M])


def apply_measurement(indices, x):
    x = np.asarray(x).ravel()
    indices = np.asarray(indices)
    if indices.size and (indices.min() < 0 or indices.max() >= x.size):
        raise IndexError(f"mask index out of range for a signal of {x.size} nodes")
    return x[indices]


def adjoint_measurement(indices, v, shape):
    """Scatter ``v`` to ``indices`` of a zero signal of the given shape (or size)."""
    out = np.zeros(int(np.prod(shape)), dtype=np.asarray(v).dtype)
    indices = np.asarray(indices)
    if indices.size and (indices.min() < 0 or indices.max() >= out.size):
        raise IndexError(f"mask index out of range for a signal of {out.size} nodes")
    out[indices] = v
    return out.reshape(shape)


def standard_normal(n, seed, stream=NOISE_STREAM):
    """``n`` standard Gaussian draws by Box-Muller on a Philox stream."""
    k = (n + 1) // 2
    rng = philox_stream(seed, stream)
    u1 = 1.0 - rng.random(k)  # (0, 1]
    u2 = rng.random(k)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(2 * k)
    z[0::2] = r * np.cos(2 * np.pi * u2)
    z[1::2] = r * np.sin(2 * np.pi * u2)
    return z[:n]


def add_noise(values, sigma, seed):
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    values = np.asarray(values, dtype=float)
    if sigma == 0:
        return values.copy()
    return values + sigma * standard_normal(values.size, seed).reshape(values.shape)


def epsilon_bound(M, sigma):
    """Radius ``sigma sqrt(M + 2 sqrt(2M))`` bounding the noise norm.

    This is the mean plus two standard deviations of the chi-squared
    distribution with ``M`` degrees of freedom, on the norm scale.
    """
    if M < 1 or sigma < 0:
        raise ValueError("need M >= 1 and sigma >= 0")
    return sigma * np.sqrt(M + 2 * np.sqrt(2 * M))


def noise_sigma(clean_values, isnr_db):
    """Noise level giving an input SNR of ``isnr_db`` on the measured values."""
    rms = np.sqrt(np.mean(np.abs(np.asarray(clean_values)) ** 2))
    return 10 ** (-isnr_db / 20) * rms


def snr_db(x_true, x_rec):
    """Reconstruction SNR in dB; ``inf`` for an exact reconstruction."""
    x_true = np.asarray(x_true)
    x_rec = np.asarray(x_rec)
    if x_true.shape != x_rec.shape:
        raise ValueError(f"shape mismatch {x_true.shape} vs {x_rec.shape}")
    err = np.sum(np.abs(x_true - x_rec) ** 2)
    if err == 0:
        return np.inf
    return 10 * np.log10(np.sum(np.abs(x_true) ** 2) / err)
