"""Monte Carlo comparison of DH and MW inpainting over sampling ratios.

Each trial draws its mask and noise from streams keyed by
``seed = base_seed + trial``, so a sweep is reproducible from its config
whatever the order or parallelism of execution. Records are merged sorted by
``(scheme, domain, rho, trial)``.
"""

import csv
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from functools import lru_cache
from itertools import product

import numpy as np

from .grids import Scheme, build_grid, ring_quadrature_weights
from .operators import (
    MeasurementSet,
    add_noise,
    apply_measurement,
    draw_mask,
    epsilon_bound,
    noise_sigma,
    snr_db,
)
from .render import render_map
from .signals import build_earth_test_signal, procedural_test_signal
from .solver import SolverConfig, solve_harmonic, solve_spatial
from .transforms import forward_sht, inverse_sht

__all__ = [
    "PAPER_RHOS",
    "FULL_RHOS",
    "DOMAINS",
    "ExperimentConfig",
    "TrialRecord",
    "CurvePoint",
    "measurement_count",
    "test_signal",
    "make_measurements",
    "solve_trial",
    "run_trial",
    "sweep_jobs",
    "run_sweep",
    "aggregate",
    "export_csv",
    "read_csv",
    "export_curves",
    "read_curves",
    "reconstruct_example",
]

logger = logging.getLogger(__name__)

PAPER_RHOS = (0.25, 0.5, 1.0, 1.5, 2.0)
FULL_RHOS = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0)
DOMAINS = ("spatial", "harmonic")


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of a sweep. ``signal_source`` is ``"earth"`` (bundled
    raster), ``"procedural"`` or a raster path."""

    base_seed: int
    L: int = 32
    schemes: tuple = ("DH", "MW")
    domains: tuple = DOMAINS
    rhos: tuple = PAPER_RHOS
    trials: int = 10
    isnr_db: float = 30.0
    epsilon: float = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    signal_source: str = "earth"
    n_caps: int = 12
    output_dir: str = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(Scheme.parse(s).value for s in self.schemes))
        object.__setattr__(self, "rhos", tuple(float(r) for r in self.rhos))
        object.__setattr__(self, "domains", tuple(self.domains))
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        for d in self.domains:
            if d not in DOMAINS:
                raise ValueError(f"unknown domain {d!r}; expected one of {DOMAINS}")
        max_ratio = max(build_grid(s, self.L).size for s in self.schemes) / self.L ** 2
        for r in self.rhos:
            if not 0 < r <= max_ratio:
                raise ValueError(f"sampling ratio {r} outside (0, {max_ratio}]")


@dataclass(frozen=True)
class TrialRecord:
    scheme: str
    domain: str
    rho: float
    trial: int
    seed: int
    M: int
    sigma: float
    epsilon: float
    snr_db_harmonic: float
    snr_db_spatial: float
    iterations: int
    converged: bool
    clamped: bool = field(default=False, compare=False)
    wall_time: float = field(default=float("nan"), compare=False)


CSV_COLUMNS = tuple(f.name for f in fields(TrialRecord))[:12]


@dataclass(frozen=True)
class CurvePoint:
    scheme: str
    domain: str
    rho: float
    mean_snr_db_harmonic: float
    mean_snr_db_spatial: float
    n_trials: int


CURVE_COLUMNS = tuple(f.name for f in fields(CurvePoint))


def measurement_count(rho, L, N):
    """``round(rho L**2)`` clamped to ``N``; returns ``(M, clamped)``."""
    M = int(math.floor(rho * L * L + 0.5))
    return min(max(M, 1), N), M > N


@lru_cache(maxsize=8)
def _signal(L, source, n_caps, seed):
    if source == "procedural":
        return procedural_test_signal(L, n_caps, seed)
    return build_earth_test_signal(L, None if source == "earth" else source)


def test_signal(cfg):
    """Ground-truth coefficients for ``cfg`` (cached; read-only)."""
    xhat = _signal(cfg.L, cfg.signal_source, cfg.n_caps, cfg.base_seed)
    xhat.flags.writeable = False
    return xhat


def make_measurements(x, grid, M, seed, isnr_db, epsilon=None):
    """Random mask of ``M`` nodes and noisy values at an input SNR of ``isnr_db``."""
    idx = draw_mask(grid.size, M, seed)
    clean = apply_measurement(idx, x)
    sigma = noise_sigma(clean, isnr_db)
    y = add_noise(clean, sigma, seed)
    eps = epsilon_bound(M, sigma) if epsilon is None else float(epsilon)
    return MeasurementSet(idx, y, sigma, eps)


def solve_trial(xhat, grid, domain, meas, solver_cfg):
    """Solve one formulation; returns ``(recovered coefficients, signal, result)``."""
    weights = ring_quadrature_weights(grid)
    if domain == "harmonic":
        res = solve_harmonic(meas, grid, weights, solver_cfg)
        return res.solution, res.signal, res
    res = solve_spatial(meas, grid, weights, solver_cfg)
    return forward_sht(res.signal, grid), res.signal, res


def run_trial(cfg, scheme, domain, rho, trial_index):
    start = time.perf_counter()
    grid = build_grid(scheme, cfg.L)
    xhat = test_signal(cfg)
    x = inverse_sht(xhat, grid).real
    M, clamped = measurement_count(rho, cfg.L, grid.size)
    if clamped:
        logger.info("rho=%g on %s L=%d: M clamped to N=%d", rho, grid.scheme.value, cfg.L, M)
    seed = cfg.base_seed + trial_index
    meas = make_measurements(x, grid, M, seed, cfg.isnr_db, cfg.epsilon)
    xhat_rec, x_rec, res = solve_trial(xhat, grid, domain, meas, cfg.solver)
    return TrialRecord(
        scheme=grid.scheme.value, domain=domain, rho=float(rho), trial=int(trial_index),
        seed=int(seed), M=int(M), sigma=float(meas.sigma), epsilon=float(meas.epsilon),
        snr_db_harmonic=float(snr_db(xhat, xhat_rec)),
        snr_db_spatial=float(snr_db(x, x_rec)),
        iterations=int(res.iterations), converged=bool(res.converged),
        clamped=clamped, wall_time=time.perf_counter() - start,
    )


def _run_job(args):
    return run_trial(*args)


def _sort_key(rec):
    return (rec.scheme, rec.domain, rec.rho, rec.trial)


def aggregate(records):
    """Mean SNRs per ``(scheme, domain, rho)``; independent of record order."""
    groups = {}
    for rec in records:
        groups.setdefault((rec.scheme, rec.domain, rec.rho), []).append(rec)
    curves = []
    for key in sorted(groups):
        recs = groups[key]
        n = len(recs)
        curves.append(CurvePoint(
            *key,
            mean_snr_db_harmonic=math.fsum(r.snr_db_harmonic for r in recs) / n,
            mean_snr_db_spatial=math.fsum(r.snr_db_spatial for r in recs) / n,
            n_trials=n,
        ))
    return curves


def sweep_jobs(cfg):
    """Every ``(scheme, domain, rho, trial)`` combination of ``cfg``."""
    return list(product(cfg.schemes, cfg.domains, cfg.rhos, range(cfg.trials)))


def run_sweep(cfg, progress=None):
    """Run every ``(scheme, domain, rho, trial)`` combination of ``cfg``.

    Returns ``(records, curves)``. When ``cfg.output_dir`` is set, writes
    ``trials.csv`` and ``curves.csv`` there.
    """
    jobs = [(cfg,) + job for job in sweep_jobs(cfg)]
    test_signal(cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            records = list(pool.map(_run_job, jobs))
    else:
        records = []
        for job in jobs:
            records.append(_run_job(job))
            if progress is not None:
                progress(records[-1])
    records.sort(key=_sort_key)
    curves = aggregate(records)
    if cfg.output_dir is not None:
        os.makedirs(cfg.output_dir, exist_ok=True)
        export_csv(records, os.path.join(cfg.output_dir, "trials.csv"))
        export_curves(curves, os.path.join(cfg.output_dir, "curves.csv"))
    return records, curves


def _fmt(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write(rows, columns, path):
    try:
        with open(path, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                d = asdict(row)
                w.writerow([_fmt(d[c]) for c in columns])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _parse(cls, columns, row):
    kinds = {f.name: f.type for f in fields(cls)}
    out = {}
    for c in columns:
        v, kind = row[c], kinds[c]
        if kind in (bool, "bool"):
            out[c] = v == "true"
        elif kind in (int, "int"):
            out[c] = int(v)
        elif kind in (float, "float"):
            out[c] = float(v)
        else:
            out[c] = v
    return cls(**out)


def _read(cls, columns, path):
    try:
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            if tuple(reader.fieldnames or ()) != columns:
                raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
            return [_parse(cls, columns, row) for row in reader]
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc


def export_csv(records, path):
    _write(records, CSV_COLUMNS, path)


def read_csv(path):
    return _read(TrialRecord, CSV_COLUMNS, path)


def export_curves(curves, path):
    _write(curves, CURVE_COLUMNS, path)


def read_curves(path):
    return _read(CurvePoint, CURVE_COLUMNS, path)


def reconstruct_example(cfg, rho=0.5, trial=0, domain="harmonic", output_dir=None, width=512):
    """Reconstruct the test signal on both grids at one sampling ratio.

    Returns a dict with per-scheme records and recovered signals. With
    ``output_dir``, writes ``truth.pgm``, ``dh.pgm`` and ``mw.pgm`` on a
    common grey scale.
    """
    cfg = replace(cfg, schemes=("DH", "MW"))
    xhat = test_signal(cfg)
    out = {"truth": xhat}
    for scheme in cfg.schemes:
        grid = build_grid(scheme, cfg.L)
        x = inverse_sht(xhat, grid).real
        M, _ = measurement_count(rho, cfg.L, grid.size)
        seed = cfg.base_seed + trial
        meas = make_measurements(x, grid, M, seed, cfg.isnr_db, cfg.epsilon)
        xhat_rec, x_rec, res = solve_trial(xhat, grid, domain, meas, cfg.solver)
        out[scheme] = {
            "grid": grid, "signal": x_rec, "coefficients": xhat_rec, "result": res,
            "snr_db_harmonic": float(snr_db(xhat, xhat_rec)),
        }
    if output_dir is not None:
        os.makedirs(output_dir, exist_ok=True)
        ref = build_grid("MW", cfg.L)
        truth = inverse_sht(xhat, ref).real
        lo, hi = float(truth.min()), float(truth.max())
        render_map(truth, ref, os.path.join(output_dir, "truth.pgm"), width, vmin=lo, vmax=hi)
        for scheme in cfg.schemes:
            e = out[scheme]
            render_map(e["signal"], e["grid"], os.path.join(output_dir, f"{scheme.lower()}.pgm"),
                       width, vmin=lo, vmax=hi)
    return out
