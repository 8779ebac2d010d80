"""Regenerate the bundled coarse land/sea raster.

Block-averages the 1 km GLOBE land mask shipped by the ``global-land-mask``
package (public-domain NOAA data) down to a 0.5 degree equirectangular grid
and writes it in the plain-text raster format read by
``spherecs.signals.read_raster``.  Land cells (land fraction above one half)
are written as +1, sea cells as -1; only the sign is used downstream.

Usage::

    pip install global-land-mask
    python tools/make_earth_raster.py src/spherecs/data/earth_land_360x720.txt
"""

import sys

import numpy as np
from global_land_mask import globe

ROWS, COLS = 360, 720


def main(path):
    ocean = globe._mask  # (21600, 43200), north row first, lon from -180
    fr, fc = ocean.shape[0] // ROWS, ocean.shape[1] // COLS
    frac = (~ocean).reshape(ROWS, fr, COLS, fc).mean(axis=(1, 3))
    # rasters start at longitude 0
    frac = np.roll(frac, -COLS // 2, axis=1)
    elev = np.where(frac > 0.5, 1, -1)
    with open(path, "w") as f:
        f.write(f"{ROWS} {COLS}\n")
        for row in elev:
            f.write(" ".join(str(v) for v in row) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
