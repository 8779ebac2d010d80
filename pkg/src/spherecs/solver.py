"""Total-variation inpainting on the sphere by a first-order primal-dual method.

Both problems are written as ``min_u F(K u)`` with::

    K u = (grad(A u), c * Phi(A u))
    F(g, r) = sum_nodes area_t |g_node| + indicator(|r - c y| <= c eps)

where ``A`` is the identity for the spatial problem and ``Re Psi R`` for the
harmonic problem (``R`` maps the L**2 real parameters of a reality-conditioned
coefficient vector to its complex coefficients, ``Psi`` is the inverse
spherical harmonic transform). The data block is rescaled by
``c = |grad A| / |Phi A|`` so both blocks have comparable norms; the
constraint is unchanged by this scaling.

Iterations follow Chambolle & Pock with zero primal and dual starts,
over-relaxation ``theta = 1`` and steps ``tau sigma |K|**2 = step_scale**2``
with ``tau / sigma = step_ratio``.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    GradientField,
    adjoint_gradient,
    adjoint_measurement,
    node_areas,
    philox_stream,
    spherical_gradient,
)
from .transforms import (
    adjoint_inverse_sht,
    inverse_sht,
    real_params_adjoint,
    real_params_to_coefficients,
)

__all__ = [
    "SolverConfig",
    "SolverResult",
    "estimate_operator_norm",
    "project_l2_ball",
    "prox_weighted_l21",
    "solve_spatial",
    "solve_harmonic",
]

logger = logging.getLogger(__name__)

# Default tau / sigma is 1 for the harmonic problem. Spatial unknowns are
# sample values, larger than orthonormal coefficients by about
# sqrt(N / 4 pi), so the spatial ratio is N / (4 pi).
HARMONIC_STEP_RATIO = 1.0


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 100_000
    feasibility_tol: float = 1e-3
    rel_change_tol: float = 1e-6
    step_scale: float = 0.99
    step_ratio: float = None
    power_iters: int = 200
    log_every: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1 or self.power_iters < 1 or self.log_every < 1:
            raise ValueError("iteration counts must be positive")
        if self.feasibility_tol <= 0 or self.rel_change_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.step_ratio is not None and self.step_ratio <= 0:
            raise ValueError("step_ratio must be positive")
        if not 0 < self.step_scale < 1:
            raise ValueError("step_scale must lie in (0, 1)")


@dataclass
class SolverResult:
    """Outcome of one inpainting solve.

    ``solution`` is the recovered signal (spatial problem) or coefficient
    vector (harmonic problem); ``signal`` is always the recovered signal on
    the grid.
    """

    solution: np.ndarray
    signal: np.ndarray
    objective_trace: np.ndarray
    feasibility_gap: float
    iterations: int
    converged: bool
    info: dict = field(default_factory=dict)


def estimate_operator_norm(apply, adjoint, shape, iters=200, seed=0, rtol=1e-10):
    """Largest singular value of a linear operator by power iteration on ``A^T A``.

    ``apply`` and ``adjoint`` act on real arrays; ``shape`` is the domain shape.
    """
    x = philox_stream(seed, 7).standard_normal(shape)
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(iters):
        y = adjoint(apply(x))
        nrm = np.linalg.norm(y)
        if nrm == 0:
            return 0.0
        x = y / nrm
        prev, est = est, np.sqrt(nrm)
        if abs(est - prev) <= rtol * est:
            break
    return float(np.linalg.norm(apply(x)))


def project_l2_ball(z, center, radius):
    """Euclidean projection of ``z`` onto the ball ``|v - center| <= radius``."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    d = np.asarray(z) - center
    nrm = np.linalg.norm(d)
    if nrm <= radius:
        return np.array(z, copy=True)
    return center + (radius / nrm) * d


def prox_weighted_l21(g, weights, step):
    """Proximal map of ``step * sum_nodes weights |g_node|``: node-wise shrinkage.

    ``g`` is a :class:`GradientField`; ``weights`` broadcasts against one
    component (for instance :func:`node_areas`).
    """
    if step <= 0:
        raise ValueError("step must be positive")
    mag = g.magnitude()
    thresh = step * np.asarray(weights)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(mag > thresh, 1.0 - thresh / mag, 0.0)
    return GradientField(g.dtheta * scale, g.dphi_scaled * scale)


def _primal_dual(synth, synth_adj, n_primal, grid, weights, meas, cfg, name, step_ratio):
    idx = meas.indices
    y = np.asarray(meas.values, dtype=float)
    eps = float(meas.epsilon)
    area = node_areas(grid, weights)

    def grad_op(u):
        g = spherical_gradient(synth(u), grid)
        return np.stack([g.dtheta, g.dphi_scaled])

    def grad_adj(p):
        return synth_adj(adjoint_gradient(GradientField(p[0], p[1]), grid))

    def data_op(u):
        return synth(u).ravel()[idx]

    def data_adj(r):
        return synth_adj(adjoint_measurement(idx, r, grid.shape))

    norm_grad = estimate_operator_norm(grad_op, grad_adj, n_primal, cfg.power_iters, cfg.seed)
    norm_data = estimate_operator_norm(data_op, data_adj, n_primal, cfg.power_iters, cfg.seed)
    c = norm_grad / norm_data if norm_data > 0 and norm_grad > 0 else 1.0

    def k_op(u):
        x = synth(u)
        g = spherical_gradient(x, grid)
        return np.stack([g.dtheta, g.dphi_scaled]), c * x.ravel()[idx]

    def k_adj(p, r):
        x = adjoint_gradient(GradientField(p[0], p[1]), grid)
        x = x + c * adjoint_measurement(idx, r, grid.shape)
        return synth_adj(x)

    norm_k = estimate_operator_norm(
        lambda u: np.concatenate([a.ravel() for a in k_op(u)]),
        lambda v: k_adj(v[: 2 * grid.size].reshape((2,) + grid.shape), v[2 * grid.size:]),
        n_primal, cfg.power_iters, cfg.seed,
    )
    if cfg.step_ratio is not None:
        step_ratio = cfg.step_ratio
    tau = cfg.step_scale / norm_k * np.sqrt(step_ratio)
    sigma = cfg.step_scale / norm_k / np.sqrt(step_ratio)

    cy, ceps = c * y, c * eps
    u = np.zeros(n_primal)
    x = synth(u)
    p = np.zeros((2,) + grid.shape)
    r = np.zeros(idx.size)
    u_bar, x_bar = u, x
    slack = cfg.feasibility_tol * (eps if eps > 0 else 1e-3 * np.linalg.norm(y))
    trace = []
    converged = False
    it = 0
    gap = np.linalg.norm(y - x.ravel()[idx]) - eps
    for it in range(1, cfg.max_iters + 1):
        g = spherical_gradient(x_bar, grid)
        vp = p + sigma * np.stack([g.dtheta, g.dphi_scaled])
        shrunk = prox_weighted_l21(GradientField(vp[0] / sigma, vp[1] / sigma), area, 1.0 / sigma)
        p = vp - sigma * np.stack([shrunk.dtheta, shrunk.dphi_scaled])
        vr = r + sigma * c * x_bar.ravel()[idx]
        r = vr - sigma * project_l2_ball(vr / sigma, cy, ceps)

        u_new = u - tau * k_adj(p, r)
        x_new = synth(u_new)
        u_bar = 2 * u_new - u
        x_bar = 2 * x_new - x
        change = np.linalg.norm(u_new - u) / max(np.linalg.norm(u_new), 1e-300)
        u, x = u_new, x_new

        if it % cfg.log_every == 0 or change < cfg.rel_change_tol:
            g = spherical_gradient(x, grid)
            trace.append(float(np.sum(area * g.magnitude())))
            gap = np.linalg.norm(y - x.ravel()[idx]) - eps
            if change < cfg.rel_change_tol and gap <= slack:
                converged = True
                break
    gap = float(np.linalg.norm(y - x.ravel()[idx]) - eps)
    logger.info("%s: %d iterations, converged=%s, feasibility gap %.3g", name, it, converged, gap)
    info = {"tau": tau, "sigma": sigma, "operator_norm": norm_k, "data_scale": c}
    return u, x, np.asarray(trace), gap, it, converged, info


def _check_meas(meas, grid):
    if meas.indices.max() >= grid.size or meas.indices.min() < 0:
        raise IndexError("measurement indices fall outside the grid")


def solve_spatial(meas, grid, weights=None, cfg=None):
    """Minimise the weighted TV of a signal on ``grid`` subject to ``|y - Phi x| <= eps``."""
    cfg = cfg or SolverConfig()
    _check_meas(meas, grid)
    u, x, trace, gap, it, ok, info = _primal_dual(
        lambda u: u.reshape(grid.shape),
        lambda x: np.real(x).ravel(),
        grid.size, grid, weights, meas, cfg, "spatial", grid.size / (4 * np.pi),
    )
    return SolverResult(x.copy(), x, trace, gap, it, ok, info)


def solve_harmonic(meas, grid, weights=None, cfg=None):
    """Minimise ``TV(Psi xhat)`` over reality-conditioned ``xhat`` subject to
    ``|y - Phi Psi xhat| <= eps``.
    """
    cfg = cfg or SolverConfig()
    _check_meas(meas, grid)
    u, x, trace, gap, it, ok, info = _primal_dual(
        lambda u: inverse_sht(real_params_to_coefficients(u), grid).real,
        lambda x: real_params_adjoint(adjoint_inverse_sht(x, grid)),
        grid.L ** 2, grid, weights, meas, cfg, "harmonic", HARMONIC_STEP_RATIO,
    )
    return SolverResult(real_params_to_coefficients(u), x, trace, gap, it, ok, info)
