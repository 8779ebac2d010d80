"""
The Earth test signal
=====================

A binary land mask is smoothed with a Gaussian harmonic window and truncated
to band-limit 32. The result is real, exactly band-limited and close to
piecewise constant, so it is sparse in its gradient.
"""

import os

import numpy as np

from spherecs import build_grid, inverse_sht
from spherecs.operators import spherical_gradient
from spherecs.render import render_map
from spherecs.signals import build_earth_test_signal, procedural_test_signal

out = os.environ.get("SPHERECS_DEMO_OUT", "demo_output")
os.makedirs(out, exist_ok=True)

L = 32
xhat = build_earth_test_signal(L)
grid = build_grid("MW", L)
x = inverse_sht(xhat, grid).real
print(f"signal range [{x.min():.3f}, {x.max():.3f}], land fraction ~ {xhat[0].real / np.sqrt(4 * np.pi):.3f}")

mag = spherical_gradient(x, grid).magnitude()
for frac in (0.01, 0.05, 0.1):
    print(f"nodes with |grad| below {frac:.0%} of max: {np.mean(mag < frac * mag.max()):.1%}")

render_map(x, grid, os.path.join(out, "earth_equirectangular.pgm"), width=512)
render_map(x, grid, os.path.join(out, "earth_mollweide.pgm"), width=512, projection="mollweide")

###############################################################################
# A procedural stand-in made of random spherical caps.

caps = inverse_sht(procedural_test_signal(L, n_caps=12, seed=1), grid).real
render_map(caps, grid, os.path.join(out, "caps.pgm"), width=512)
print("maps written to", out)
