"""
Sampling grids and quadrature
=============================

The DH and MW equiangular grids represent a signal band-limited at L with
about 4 L^2 and 2 L^2 samples respectively. Here we compare their sizes and
check that their quadrature weights integrate band-limited functions exactly.
"""

import numpy as np
from scipy.special import sph_harm_y

from spherecs import build_grid, integrate, node_count, ring_quadrature_weights

###############################################################################
# Node counts against the harmonic dimension L^2.

print(" L    DH     MW    MW/DH")
for L in (4, 8, 16, 32, 64):
    dh, mw = node_count("DH", L), node_count("MW", L)
    print(f"{L:3d} {dh:6d} {mw:6d}   {mw / dh:.4f}")

###############################################################################
# Ring weights. Both grids integrate the constant function to 4 pi.

for scheme in ("DH", "MW"):
    grid = build_grid(scheme, 16)
    w = ring_quadrature_weights(grid)
    area = integrate(grid, w, np.ones(grid.shape))
    print(f"{scheme}: {grid.ntheta} rings x {grid.nphi} longitudes, area - 4 pi = {area - 4 * np.pi:.2e}")

###############################################################################
# Orthonormality of sampled harmonics under DH quadrature.

grid = build_grid("DH", 16)
w = ring_quadrature_weights(grid)
th, ph = grid.nodes()
y21 = sph_harm_y(2, 1, th, ph)
y53 = sph_harm_y(5, 3, th, ph)
print("<Y21, Y21> =", integrate(grid, w, np.conj(y21) * y21).real)
print("|<Y21, Y53>| =", abs(integrate(grid, w, np.conj(y21) * y53)))
