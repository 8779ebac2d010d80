import numpy as np
import pytest
from scipy.special import sph_harm_y

from spherecs.transforms import index_lm


def dense_synthesis(grid):
    """Synthesis matrix ``Y[j, idx] = Y_lm(node_j)`` evaluated with scipy."""
    th, ph = grid.nodes()
    ell, m = index_lm(np.arange(grid.L ** 2))
    return sph_harm_y(ell[None, :], m[None, :], th.ravel()[:, None], ph.ravel()[:, None])


@pytest.fixture
def rng():
    return np.random.default_rng(20111)


# Acceptance criteria register their outcome here; the terminal summary
# prints one line per criterion whatever the capture mode.
ACCEPTANCE = {}


def record_criterion(number, part, ok, detail=""):
    ACCEPTANCE.setdefault(number, []).append((part, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        details = "; ".join(f"{p}: {'ok' if ok else 'FAIL'} ({d})" if d else f"{p}: {'ok' if ok else 'FAIL'}"
                            for p, ok, d in parts)
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {details}")
