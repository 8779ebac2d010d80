"""
Harmonic transforms
===================

The inverse transform synthesises grid samples from L^2 harmonic
coefficients; the forward transform recovers them exactly from the samples.
The adjoint of the inverse transform is what the harmonic-domain solver uses.
"""

import time

import numpy as np

from spherecs import adjoint_inverse_sht, build_grid, forward_sht, inverse_sht
from spherecs.transforms import random_coefficients

rng = np.random.default_rng(0)

for scheme in ("DH", "MW"):
    for L in (8, 16, 32, 64):
        grid = build_grid(scheme, L)
        xhat = random_coefficients(L, rng)
        forward_sht(inverse_sht(xhat, grid), grid)  # warm the caches
        t0 = time.perf_counter()
        x = inverse_sht(xhat, grid)
        back = forward_sht(x, grid)
        dt = time.perf_counter() - t0
        print(f"{scheme} L={L:3d}: round-trip error {np.abs(back - xhat).max():.1e}, "
              f"max |Im x| {np.abs(x.imag).max():.1e}, {1e3 * dt:.1f} ms")

###############################################################################
# Dot test for the adjoint.

grid = build_grid("MW", 16)
a = random_coefficients(16, rng, real=False)
b = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
lhs = np.vdot(b, inverse_sht(a, grid))
rhs = np.vdot(adjoint_inverse_sht(b, grid), a)
print("adjoint mismatch:", abs(lhs - rhs) / abs(lhs))
