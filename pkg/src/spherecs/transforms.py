"""Spherical harmonic transforms on DH and MW grids.

Harmonic coefficients are flat complex arrays of length ``L**2`` indexed by
``l**2 + l + m`` for ``0 <= l < L`` and ``-l <= m <= l``. Spherical
harmonics are orthonormal with the Condon-Shortley phase and are split as::

    Y_lm(theta, phi) = Pbar_lm(cos theta) exp(i m phi) / sqrt(2 pi)

where ``Pbar_lm`` is the associated Legendre function normalised to unit
``L2`` norm on ``[-1, 1]``.

The inverse transform (synthesis) and its adjoint separate the longitude sum,
done by FFT, from the colatitude sum against a precomputed Legendre table.
On DH grids the forward transform is the exact quadrature sum. On MW grids
ring quadrature is not exact at band-limit L, so the forward transform is the
linear left-inverse of the synthesis: after the FFT in longitude, each order
``m`` is recovered by applying the pseudo-inverse of its ``L x (L - |m|)``
Legendre block.
"""

from functools import lru_cache

import numpy as np

from .grids import Scheme, ring_quadrature_weights

__all__ = [
    "harmonic_dim",
    "lm_index",
    "index_lm",
    "legendre_table",
    "legendre_values",
    "inverse_sht",
    "forward_sht",
    "adjoint_inverse_sht",
    "is_real_coefficients",
    "random_coefficients",
    "real_params_to_coefficients",
    "coefficients_to_real_params",
    "real_params_adjoint",
    "write_coefficients",
    "read_coefficients",
]

_SQRT_2PI = np.sqrt(2 * np.pi)


def harmonic_dim(L):
    return L * L


def lm_index(ell, m):
    return ell * ell + ell + m


def index_lm(idx):
    """Inverse of :func:`lm_index`; works elementwise on arrays."""
    idx = np.asarray(idx)
    ell = np.floor(np.sqrt(idx)).astype(int)
    return ell, idx - ell * ell - ell


@lru_cache(maxsize=None)
def _flat_lm(L):
    ell, m = index_lm(np.arange(L * L))
    ell.flags.writeable = False
    m.flags.writeable = False
    return ell, m


def _check_coeffs(xhat, L):
    xhat = np.asarray(xhat)
    if xhat.shape != (L * L,):
        raise ValueError(f"expected {L * L} harmonic coefficients for L={L}, got shape {xhat.shape}")
    return xhat


def legendre_values(L, z):
    """Normalised associated Legendre values ``Pbar_lm(z)`` for ``0 <= m <= l < L``.

    Uses the standard ascending three-term recurrence in ``l`` seeded from
    the sectoral values ``Pbar_mm``. Returns an array of shape
    ``z.shape + (L, L)`` indexed ``[..., l, m]`` with zeros where ``m > l``.
    """
    z = np.asarray(z, dtype=float)
    s = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    out = np.zeros(z.shape + (L, L))
    pmm = np.full(z.shape, 1.0 / np.sqrt(2.0))
    for m in range(L):
        if m > 0:
            pmm = -np.sqrt((2 * m + 1) / (2.0 * m)) * s * pmm
        out[..., m, m] = pmm
        if m + 1 >= L:
            break
        p_prev = pmm
        p_cur = np.sqrt(2 * m + 3.0) * z * pmm
        out[..., m + 1, m] = p_cur
        a_prev = np.sqrt(2 * m + 3.0)
        for ell in range(m + 2, L):
            a = np.sqrt((4.0 * ell * ell - 1) / (ell * ell - m * m))
            p_prev, p_cur = p_cur, a * (z * p_cur - p_prev / a_prev)
            out[..., ell, m] = p_cur
            a_prev = a
    return out


@lru_cache(maxsize=None)
def legendre_table(grid):
    """``Pbar_lm(cos theta_t)`` on the rings of ``grid``, shape ``(ntheta, L, L)``."""
    table = legendre_values(grid.L, np.cos(grid.thetas))
    table.flags.writeable = False
    return table


@lru_cache(maxsize=None)
def _signed_table(grid):
    # [t, l, m + L - 1] for m = -(L-1)..L-1, with Pbar_{l,-m} = (-1)^m Pbar_lm
    L = grid.L
    P = legendre_table(grid)
    ms = np.arange(-(L - 1), L)
    full = P[:, :, np.abs(ms)] * np.where(ms < 0, (-1.0) ** np.abs(ms), 1.0)
    full.flags.writeable = False
    return full


def _to_matrix(xhat, L):
    ell, m = _flat_lm(L)
    C = np.zeros((L, 2 * L - 1), dtype=complex)
    C[ell, m + L - 1] = xhat
    return C


def _from_matrix(C, L):
    ell, m = _flat_lm(L)
    return C[ell, m + L - 1]


def _phi_columns(grid):
    L = grid.L
    return np.arange(-(L - 1), L) % grid.nphi


def inverse_sht(xhat, grid):
    """Synthesise samples on ``grid`` from harmonic coefficients."""
    L = grid.L
    xhat = _check_coeffs(xhat, L)
    G = np.einsum("tlm,lm->tm", _signed_table(grid), _to_matrix(xhat, L)) / _SQRT_2PI
    F = np.zeros(grid.shape, dtype=complex)
    F[:, _phi_columns(grid)] = G
    return np.fft.ifft(F, axis=1) * grid.nphi


def adjoint_inverse_sht(x, grid):
    """Adjoint of :func:`inverse_sht`: ``sum_j conj(Y_lm(node_j)) x_j`` (no weights)."""
    x = grid.check_signal(x)
    H = np.fft.fft(x, axis=1)[:, _phi_columns(grid)]
    C = np.einsum("tlm,tm->lm", _signed_table(grid), H) / _SQRT_2PI
    return _from_matrix(C, grid.L)


@lru_cache(maxsize=None)
def _mw_inverse_blocks(grid):
    L = grid.L
    P = _signed_table(grid) / _SQRT_2PI
    blocks = np.zeros((2 * L - 1, L, grid.ntheta))
    for mi, m in enumerate(range(-(L - 1), L)):
        A = P[:, abs(m):, mi]
        sv = np.linalg.svd(A, compute_uv=False)
        if sv[-1] <= 1e-12 * sv[0]:
            raise np.linalg.LinAlgError(f"MW synthesis block for m={m} is numerically singular")
        blocks[mi, abs(m):, :] = np.linalg.pinv(A)
    blocks.flags.writeable = False
    return blocks


def forward_sht(x, grid):
    """Harmonic coefficients of a band-limited signal sampled on ``grid``.

    Exact (to rounding) for signals band-limited at ``grid.L``: this is the
    left-inverse of :func:`inverse_sht` on both schemes.
    """
    x = grid.check_signal(x)
    if grid.scheme is Scheme.DH:
        w = ring_quadrature_weights(grid) * grid.dphi
        return adjoint_inverse_sht(w[:, None] * x, grid)
    G = np.fft.fft(x, axis=1)[:, _phi_columns(grid)] / grid.nphi
    C = np.einsum("mlt,tm->lm", _mw_inverse_blocks(grid), G)
    return _from_matrix(C, grid.L)


def is_real_coefficients(xhat, atol=1e-12):
    """Whether ``xhat`` satisfies ``x_{l,-m} = (-1)^m conj(x_{lm})``."""
    xhat = np.asarray(xhat)
    L = int(round(np.sqrt(xhat.size)))
    ell, m = _flat_lm(L)
    mirror = xhat[lm_index(ell, -m)]
    return np.allclose(xhat, (-1.0) ** np.abs(m) * np.conj(mirror), rtol=0, atol=atol)


# Real parameterisation of reality-conditioned coefficient vectors. The L**2
# real parameters are stored in flat (l, m) order: m = 0 holds x_l0, m > 0
# holds sqrt(2) Re x_lm and m < 0 holds sqrt(2) Im x_l|m|. The map is an
# isometry onto the reality-conditioned subspace.

def real_params_to_coefficients(u):
    u = np.asarray(u, dtype=float)
    L = int(round(np.sqrt(u.size)))
    ell, m = _flat_lm(L)
    pos = m > 0
    re = u[lm_index(ell[pos], m[pos])]
    im = u[lm_index(ell[pos], -m[pos])]
    xhat = np.zeros(u.size, dtype=complex)
    xhat[m == 0] = u[m == 0]
    z = (re + 1j * im) / np.sqrt(2)
    xhat[pos] = z
    xhat[lm_index(ell[pos], -m[pos])] = (-1.0) ** m[pos] * np.conj(z)
    return xhat


def coefficients_to_real_params(xhat):
    """Inverse of :func:`real_params_to_coefficients` on reality-conditioned input."""
    xhat = np.asarray(xhat)
    L = int(round(np.sqrt(xhat.size)))
    ell, m = _flat_lm(L)
    pos = m > 0
    u = np.zeros(xhat.size)
    u[m == 0] = xhat[m == 0].real
    u[pos] = np.sqrt(2) * xhat[pos].real
    u[lm_index(ell[pos], -m[pos])] = np.sqrt(2) * xhat[pos].imag
    return u


def real_params_adjoint(z):
    """Adjoint of :func:`real_params_to_coefficients` for the real inner product
    ``Re <a, b>`` on complex coefficients."""
    z = np.asarray(z)
    L = int(round(np.sqrt(z.size)))
    ell, m = _flat_lm(L)
    pos = m > 0
    zp = z[pos]
    zn = z[lm_index(ell[pos], -m[pos])] * (-1.0) ** m[pos]
    u = np.zeros(z.size)
    u[m == 0] = z[m == 0].real
    u[pos] = (zp.real + zn.real) / np.sqrt(2)
    u[lm_index(ell[pos], -m[pos])] = (zp.imag - zn.imag) / np.sqrt(2)
    return u


def random_coefficients(L, rng=None, real=True):
    """Standard complex Gaussian coefficients, reality-conditioned if ``real``."""
    rng = np.random.default_rng(rng)
    if real:
        return real_params_to_coefficients(rng.standard_normal(L * L))
    return (rng.standard_normal(L * L) + 1j * rng.standard_normal(L * L)) / np.sqrt(2)


def write_coefficients(path, xhat):
    """Write coefficients as text: ``L <L>`` then ``l m re im`` per line."""
    xhat = np.asarray(xhat, dtype=complex)
    L = int(round(np.sqrt(xhat.size)))
    _check_coeffs(xhat, L)
    ell, m = _flat_lm(L)
    with open(path, "w") as f:
        f.write(f"L {L}\n")
        for l_, m_, c in zip(ell, m, xhat):
            f.write(f"{l_} {m_} {c.real:.17g} {c.imag:.17g}\n")


def read_coefficients(path):
    with open(path) as f:
        header = f.readline().split()
        if len(header) != 2 or header[0] != "L":
            raise ValueError(f"{path}: expected header 'L <value>', got {' '.join(header)!r}")
        L = int(header[1])
        xhat = np.zeros(L * L, dtype=complex)
        seen = 0
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            l_, m_, re, im = line.split()
            l_, m_ = int(l_), int(m_)
            if not (0 <= l_ < L and -l_ <= m_ <= l_):
                raise ValueError(f"{path}:{lineno}: invalid (l, m) = ({l_}, {m_}) for L={L}")
            xhat[lm_index(l_, m_)] = float(re) + 1j * float(im)
            seen += 1
    if seen != L * L:
        raise ValueError(f"{path}: expected {L * L} coefficients, found {seen}")
    return xhat
