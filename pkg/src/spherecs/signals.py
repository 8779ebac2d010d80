"""Band-limited test signals built from binary maps on the sphere.

A binary map (land mask or a union of spherical caps) is sampled on a DH
grid at an analysis band-limit ``4 L``, transformed, multiplied by the
Gaussian harmonic window ``exp(-l (l + 1) s**2)`` and truncated to ``L``.
By default ``s**2 = 3 ln(10) / ((L - 1) L)``, which attenuates degree
``L - 1`` by a factor of 1000.

Elevation rasters are plain text: a first line ``rows cols`` followed by
row-major elevations in metres, north row first, first column at longitude
zero, cells equally spaced in latitude and longitude.
"""

from importlib import resources

import numpy as np

from .grids import build_grid
from .operators import philox_stream
from .transforms import (
    coefficients_to_real_params,
    forward_sht,
    index_lm,
    real_params_to_coefficients,
)

__all__ = [
    "EARTH_RASTER",
    "read_raster",
    "write_raster",
    "default_smoothing",
    "smooth_and_truncate",
    "binary_map_signal",
    "raster_indicator",
    "build_earth_test_signal",
    "cap_test_signal",
    "procedural_test_signal",
]

EARTH_RASTER = "earth_land_360x720.txt"
CAP_STREAM = 2


def read_raster(path):
    try:
        with open(path) as f:
            header = f.readline().split()
            rows, cols = int(header[0]), int(header[1])
            data = np.loadtxt(f, dtype=float, ndmin=2)
    except (OSError, ValueError, IndexError) as exc:
        raise ValueError(f"cannot read elevation raster {path}: {exc}") from exc
    if data.size != rows * cols:
        raise ValueError(f"{path}: header says {rows}x{cols} but found {data.size} values")
    return data.reshape(rows, cols)


def write_raster(path, elevation):
    elevation = np.asarray(elevation)
    with open(path, "w") as f:
        f.write(f"{elevation.shape[0]} {elevation.shape[1]}\n")
        np.savetxt(f, elevation, fmt="%.10g")


def _bundled_raster():
    with resources.as_file(resources.files("spherecs") / "data" / EARTH_RASTER) as p:
        return read_raster(p)


def default_smoothing(L):
    """Squared Gaussian window scale attenuating degree ``L - 1`` by 1e-3."""
    if L < 2:
        return 0.0
    return 3 * np.log(10) / ((L - 1) * L)


def smooth_and_truncate(xhat, L, s2):
    """Apply the Gaussian harmonic window to ``xhat`` and keep degrees below ``L``."""
    ell, _ = index_lm(np.arange(L * L))
    return np.asarray(xhat)[: L * L] * np.exp(-ell * (ell + 1) * s2)


def binary_map_signal(L, indicator, smoothing=None, oversample=4):
    """Smoothed band-limited coefficients of ``indicator(theta, phi)``.

    ``indicator`` is evaluated at the nodes of a DH grid with band-limit
    ``oversample * L``; the result satisfies the reality condition exactly.
    """
    La = oversample * L
    grid = build_grid("DH", La)
    th, ph = grid.nodes()
    values = np.asarray(indicator(th, ph), dtype=float)
    s2 = default_smoothing(L) if smoothing is None else smoothing
    xhat = smooth_and_truncate(forward_sht(values, grid), L, s2)
    return real_params_to_coefficients(coefficients_to_real_params(xhat))


def raster_indicator(elevation):
    """Land indicator (elevation above zero) with nearest-cell lookup."""
    elevation = np.asarray(elevation)
    rows, cols = elevation.shape
    land = elevation > 0

    def indicator(theta, phi):
        i = np.clip((theta / np.pi * rows).astype(int), 0, rows - 1)
        j = (phi / (2 * np.pi) * cols).astype(int) % cols
        return land[i, j]

    return indicator


def build_earth_test_signal(L, source=None, smoothing=None):
    """Band-limited Earth test signal from an elevation raster.

    ``source`` is a raster path, an elevation array, or ``None`` for the
    bundled coarse land mask.
    """
    if source is None:
        elevation = _bundled_raster()
    elif isinstance(source, np.ndarray):
        elevation = source
    else:
        elevation = read_raster(source)
    if elevation.shape[0] < 2 * 4 * L:
        raise ValueError(
            f"raster has {elevation.shape[0]} rows; at least {8 * L} are needed for L={L}")
    return binary_map_signal(L, raster_indicator(elevation), smoothing)


def _cap_indicator(centers, radii):
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    radii = np.atleast_1d(np.asarray(radii, dtype=float))

    def indicator(theta, phi):
        out = np.zeros(np.shape(theta))
        for (ct, cp), rad in zip(centers, radii):
            cosd = np.cos(theta) * np.cos(ct) + np.sin(theta) * np.sin(ct) * np.cos(phi - cp)
            out += np.arccos(np.clip(cosd, -1, 1)) < rad
        return out

    return indicator


def cap_test_signal(L, centers, radii, smoothing=None):
    """Smoothed sum of cap indicators; ``centers`` are ``(theta, phi)`` pairs."""
    return binary_map_signal(L, _cap_indicator(centers, radii), smoothing)


def procedural_test_signal(L, n_caps=12, seed=0, radius_range=(0.15, 0.7), smoothing=None):
    """Sum of ``n_caps`` random spherical caps, smoothed like the Earth signal."""
    if n_caps < 1:
        raise ValueError("n_caps must be at least 1")
    u = philox_stream(seed, CAP_STREAM).random((n_caps, 3))
    centers = np.column_stack([np.arccos(1 - 2 * u[:, 0]), 2 * np.pi * u[:, 1]])
    lo, hi = radius_range
    radii = lo + (hi - lo) * u[:, 2]
    return cap_test_signal(L, centers, radii, smoothing)
