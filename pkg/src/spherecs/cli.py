"""Command line interface.

Subcommands::

    spherecs grid info      --scheme MW --L 32
    spherecs sht roundtrip  --scheme MW --L 32 --seed 0
    spherecs signal build   --L 32 --signal-source earth --out coeffs.txt
    spherecs inpaint run    --scheme MW --domain harmonic --rho 0.5 --seed 1 --out-dir out/
    spherecs sweep run      --seed 0 --L 16 --trials 3 --out-dir out/
    spherecs render         --coeffs coeffs.txt --scheme MW --out map.pgm

Every command accepts ``--config FILE``: a flat ``key = value`` text file
whose keys are flag names (``isnr-db = 30``); flags given on the command
line take precedence.
"""

import argparse
import logging
import os
import sys

import numpy as np

from .experiment import (
    PAPER_RHOS,
    ExperimentConfig,
    reconstruct_example,
    run_sweep,
    test_signal,
)
from .grids import build_grid, integrate, node_count, ring_quadrature_weights
from .render import render_map
from .solver import SolverConfig
from .transforms import forward_sht, inverse_sht, random_coefficients, read_coefficients, \
    write_coefficients

logger = logging.getLogger("spherecs")


def read_config(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _floats(text):
    return tuple(float(eval_ratio(t)) for t in str(text).replace(",", " ").split())


def eval_ratio(text):
    """Parse ``"0.5"`` or ``"1/2"``."""
    if "/" in text:
        num, den = text.split("/")
        return float(num) / float(den)
    return float(text)


def _words(text):
    return tuple(str(text).replace(",", " ").split())


def _add_band_limit(p, default=32):
    p.add_argument("--L", type=int, default=default, help="harmonic band-limit")


def _add_solver(p):
    d = SolverConfig()
    p.add_argument("--max-iters", type=int, default=d.max_iters)
    p.add_argument("--feasibility-tol", type=float, default=d.feasibility_tol)
    p.add_argument("--rel-change-tol", type=float, default=d.rel_change_tol)
    p.add_argument("--step-scale", type=float, default=d.step_scale)
    p.add_argument("--power-iters", type=int, default=d.power_iters)


def _add_experiment(p, sweep):
    _add_band_limit(p)
    p.add_argument("--isnr-db", type=float, default=30.0, help="input SNR of the measurements")
    p.add_argument("--epsilon", type=float, default=None,
                   help="fidelity radius (default: chi-squared bound from the noise level)")
    p.add_argument("--signal-source", default="earth",
                   help="'earth' (bundled raster), 'procedural' or a raster path")
    p.add_argument("--n-caps", type=int, default=12, help="caps of the procedural signal")
    p.add_argument("--out-dir", default=None)
    if sweep:
        p.add_argument("--schemes", type=_words, default=("DH", "MW"))
        p.add_argument("--domains", type=_words, default=("spatial", "harmonic"))
        p.add_argument("--rhos", type=_floats, default=PAPER_RHOS)
        p.add_argument("--trials", type=int, default=10)
        p.add_argument("--workers", type=int, default=1)
    _add_solver(p)


def build_parser():
    parser = argparse.ArgumentParser(prog="spherecs", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(subparsers, name, func, help_):
        p = subparsers.add_parser(name, help=help_)
        p.add_argument("--config", default=None, help="key = value defaults file")
        p.set_defaults(func=func)
        return p

    grid = sub.add_parser("grid", help="sampling grids").add_subparsers(dest="action", required=True)
    p = leaf(grid, "info", cmd_grid_info, "node counts and quadrature summary")
    p.add_argument("--scheme", default="MW")
    _add_band_limit(p)

    sht = sub.add_parser("sht", help="harmonic transforms").add_subparsers(dest="action", required=True)
    p = leaf(sht, "roundtrip", cmd_sht_roundtrip, "forward(inverse(x)) error on random input")
    p.add_argument("--scheme", default="MW")
    _add_band_limit(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)

    sig = sub.add_parser("signal", help="test signals").add_subparsers(dest="action", required=True)
    p = leaf(sig, "build", cmd_signal_build, "write test-signal coefficients")
    _add_band_limit(p)
    p.add_argument("--signal-source", default="earth")
    p.add_argument("--n-caps", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    inp = sub.add_parser("inpaint", help="single reconstruction").add_subparsers(
        dest="action", required=True)
    p = leaf(inp, "run", cmd_inpaint_run, "reconstruct on DH and MW at one sampling ratio")
    _add_experiment(p, sweep=False)
    p.add_argument("--domain", default="harmonic", choices=("spatial", "harmonic"))
    p.add_argument("--rho", type=eval_ratio, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=512)

    swp = sub.add_parser("sweep", help="Monte Carlo sweep").add_subparsers(dest="action", required=True)
    p = leaf(swp, "run", cmd_sweep_run, "SNR against sampling ratio for both schemes")
    _add_experiment(p, sweep=True)
    p.add_argument("--seed", type=int, required=True, help="base seed; trial t uses seed + t")

    p = leaf(sub, "render", cmd_render, "render coefficients as a PGM map")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--scheme", default="MW")
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int, default=512)
    p.add_argument("--projection", default="equirectangular", choices=("equirectangular", "mollweide"))
    return parser


def _solver_config(args):
    return SolverConfig(max_iters=args.max_iters, feasibility_tol=args.feasibility_tol,
                        rel_change_tol=args.rel_change_tol, step_scale=args.step_scale,
                        power_iters=args.power_iters)


def cmd_grid_info(args):
    grid = build_grid(args.scheme, args.L)
    w = ring_quadrature_weights(grid)
    area = integrate(grid, w, np.ones(grid.shape))
    print(f"scheme {grid.scheme.value}  L {grid.L}")
    print(f"rings {grid.ntheta}  longitudes {grid.nphi}  nodes {node_count(grid.scheme, grid.L)}")
    print(f"harmonic dimension {grid.L ** 2}  nodes / L^2 {grid.size / grid.L ** 2:.4f}")
    print(f"total area {area:.15f}  (4 pi = {4 * np.pi:.15f})")


def cmd_sht_roundtrip(args):
    grid = build_grid(args.scheme, args.L)
    worst = 0.0
    for t in range(args.trials):
        xhat = random_coefficients(args.L, args.seed + t)
        worst = max(worst, float(np.abs(forward_sht(inverse_sht(xhat, grid), grid) - xhat).max()))
    print(f"{grid.scheme.value} L={grid.L}: max abs round-trip error {worst:.3e} over {args.trials} vectors")


def cmd_signal_build(args):
    cfg = ExperimentConfig(base_seed=args.seed, L=args.L, signal_source=args.signal_source,
                           n_caps=args.n_caps)
    write_coefficients(args.out, test_signal(cfg))
    print(f"wrote {args.L ** 2} coefficients to {args.out}")


def _experiment_config(args, seed, **extra):
    return ExperimentConfig(
        base_seed=seed, L=args.L, isnr_db=args.isnr_db, epsilon=args.epsilon,
        solver=_solver_config(args), signal_source=args.signal_source, n_caps=args.n_caps,
        output_dir=args.out_dir, **extra)


def cmd_inpaint_run(args):
    cfg = _experiment_config(args, args.seed)
    out = reconstruct_example(cfg, rho=args.rho, domain=args.domain, output_dir=args.out_dir,
                              width=args.width)
    for scheme in ("DH", "MW"):
        e = out[scheme]
        r = e["result"]
        print(f"{scheme}: harmonic SNR {e['snr_db_harmonic']:.2f} dB, {r.iterations} iterations, "
              f"converged={r.converged}")
        if args.out_dir:
            write_coefficients(os.path.join(args.out_dir, f"{scheme.lower()}_coeffs.txt"),
                               e["coefficients"])


def cmd_sweep_run(args):
    cfg = _experiment_config(args, args.seed, schemes=args.schemes, domains=args.domains,
                             rhos=args.rhos, trials=args.trials, workers=args.workers)
    _, curves = run_sweep(cfg)
    print("scheme domain rho mean_snr_db_harmonic mean_snr_db_spatial n_trials")
    for c in curves:
        print(f"{c.scheme} {c.domain} {c.rho:g} {c.mean_snr_db_harmonic:.3f} "
              f"{c.mean_snr_db_spatial:.3f} {c.n_trials}")


def cmd_render(args):
    xhat = read_coefficients(args.coeffs)
    L = int(round(np.sqrt(xhat.size)))
    grid = build_grid(args.scheme, L)
    render_map(inverse_sht(xhat, grid).real, grid, args.out, args.width, args.projection)
    print(f"wrote {args.out}")


def _leaf_parser(parser, argv):
    """Follow subcommand names in ``argv`` down to the parser that handles them."""
    leaf = parser
    for token in argv:
        if token.startswith("-") or leaf._subparsers is None:
            continue
        choices = leaf._subparsers._group_actions[0].choices
        if token not in choices:
            break
        leaf = choices[token]
    return leaf


def _apply_config_file(parser, argv):
    """Parse ``argv`` with defaults taken from its ``--config`` file, if any."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config is not None:
        leaf = _leaf_parser(parser, argv)
        actions = {a.dest: a for a in leaf._actions}
        defaults = {}
        for key, raw in read_config(known.config).items():
            if key not in actions or key in ("help", "config"):
                parser.error(f"{known.config}: unknown key {key!r}")
            act = actions[key]
            defaults[key] = act.type(raw) if act.type is not None else raw
            act.required = False
        leaf.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None):
    parser = build_parser()
    args = _apply_config_file(parser, sys.argv[1:] if argv is None else argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
