"""Greyscale map images of signals on the sphere, written as binary PGM."""

import numpy as np

__all__ = ["project", "render_map", "write_pgm", "read_pgm"]


def _equirectangular(width):
    h = width // 2
    theta = (np.arange(h) + 0.5) * np.pi / h
    phi = (np.arange(width) + 0.5) * 2 * np.pi / width
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    return th, ph, np.ones(th.shape, dtype=bool)


def _mollweide(width):
    h = width // 2
    r2 = np.sqrt(2)
    X = ((np.arange(width) + 0.5) / width * 2 - 1) * 2 * r2
    Y = (1 - (np.arange(h) + 0.5) / h * 2) * r2
    X, Y = np.meshgrid(X, Y)
    inside = (X / (2 * r2)) ** 2 + (Y / r2) ** 2 <= 1
    aux = np.arcsin(np.clip(Y / r2, -1, 1))
    lat = np.arcsin(np.clip((2 * aux + np.sin(2 * aux)) / np.pi, -1, 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        lon = np.where(inside, np.pi * X / (2 * r2 * np.cos(aux)), 0.0)
    return np.pi / 2 - lat, np.mod(lon, 2 * np.pi), inside


def project(x, grid, width=512, projection="equirectangular"):
    """Nearest-node resampling of ``x`` onto an image of ``width x width // 2`` pixels.

    Returns ``(image, inside)``; ``inside`` is False for pixels outside the
    projected sphere (Mollweide corners).
    """
    x = np.real(grid.check_signal(x))
    if projection == "equirectangular":
        th, ph, inside = _equirectangular(width)
    elif projection == "mollweide":
        th, ph, inside = _mollweide(width)
    else:
        raise ValueError(f"unknown projection {projection!r}")
    mids = 0.5 * (grid.thetas[1:] + grid.thetas[:-1])
    t = np.searchsorted(mids, th)
    p = np.rint(ph / grid.dphi).astype(int) % grid.nphi
    return x[t, p], inside


def render_map(x, grid, path=None, width=512, projection="equirectangular",
               vmin=None, vmax=None, background=0):
    """Render ``x`` as an 8-bit greyscale image, optionally writing a PGM file.

    Values are mapped linearly from ``[vmin, vmax]`` (default: the signal's
    range) to ``[0, 255]``; a constant signal renders mid-grey.
    """
    img, inside = project(x, grid, width, projection)
    lo = np.min(img[inside]) if vmin is None else vmin
    hi = np.max(img[inside]) if vmax is None else vmax
    if hi > lo:
        grey = np.rint(np.clip((img - lo) / (hi - lo), 0, 1) * 255)
    else:
        grey = np.full(img.shape, 128.0)
    grey = np.where(inside, grey, background).astype(np.uint8)
    if path is not None:
        write_pgm(path, grey)
    return grey


def write_pgm(path, image):
    image = np.asarray(image, dtype=np.uint8)
    h, w = image.shape
    try:
        with open(path, "wb") as f:
            f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            f.write(image.tobytes())
    except OSError as exc:
        raise OSError(f"cannot write image {path}: {exc}") from exc


def read_pgm(path):
    with open(path, "rb") as f:
        data = f.read()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    if tokens[0] != b"P5" or int(tokens[3]) != 255:
        raise ValueError(f"{path}: not an 8-bit binary PGM")
    w, h = int(tokens[1]), int(tokens[2])
    return np.frombuffer(data[pos + 1:pos + 1 + w * h], dtype=np.uint8).reshape(h, w)
