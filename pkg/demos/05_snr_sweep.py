"""
SNR against number of measurements
==================================

Mean reconstruction SNR over random masks and noise for both sampling
schemes and both formulations. The defaults are a quick L = 16 run; set
SPHERECS_DEMO_L=32 and SPHERECS_DEMO_TRIALS=10 for the full comparison
(tens of minutes).
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from spherecs.experiment import PAPER_RHOS, ExperimentConfig, run_sweep  # noqa: E402

out = os.environ.get("SPHERECS_DEMO_OUT", "demo_output")
L = int(os.environ.get("SPHERECS_DEMO_L", 16))
trials = int(os.environ.get("SPHERECS_DEMO_TRIALS", 3))

cfg = ExperimentConfig(base_seed=0, L=L, trials=trials, rhos=PAPER_RHOS,
                       output_dir=os.path.join(out, f"sweep_L{L}"))
records, curves = run_sweep(cfg)

fig, ax = plt.subplots(figsize=(5, 3.5))
styles = {("DH", "spatial"): "b--", ("MW", "spatial"): "r--",
          ("DH", "harmonic"): "b-", ("MW", "harmonic"): "r-"}
for (scheme, domain), style in styles.items():
    pts = [c for c in curves if c.scheme == scheme and c.domain == domain]
    ax.plot([c.rho for c in pts], [c.mean_snr_db_harmonic for c in pts], style, marker="o",
            label=f"{scheme} ({domain})")
ax.set_xlabel("M / L$^2$")
ax.set_ylabel("SNR (dB)")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(out, f"snr_L{L}.png"), dpi=120)

for c in curves:
    print(f"{c.scheme} {c.domain:8s} rho={c.rho:4.2f}  {c.mean_snr_db_harmonic:6.2f} dB")
