"""Iterate the textbook system at h=1 for three predation rates and plot.

alpha=0.05 spirals out, alpha=0.048 sits on the knife edge, alpha=0.04
spirals in. Writes CSV plus a three-panel PNG under demos/output/.

    python3 demos/trajectory_gallery.py
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pp_stability_lab import (
    ModelKind,
    ModelParams,
    State,
    diagnose,
    equilibria,
    iterate,
)

OUT = Path(__file__).resolve().parent / "output"

ALPHAS = (0.05, 0.048, 0.04)
STEPS = 400


def run_one(alpha):
    params = ModelParams(r=0.5, K=2500.0, alpha=alpha, gamma=0.01, c=0.2)
    e3 = equilibria(params)[2].point
    start = State(0.9 * e3.N, 0.9 * e3.P)
    traj = iterate(ModelKind.RICKER, params, 1.0, start, STEPS)
    # Diagnosis wants a longer run than the plot does.
    long = iterate(ModelKind.RICKER, params, 1.0, start, 5000)
    return params, e3, traj, diagnose(long)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    fig, axes = plt.subplots(1, 3, figsize=(13, 4), sharey=False)

    for ax, alpha in zip(axes, ALPHAS):
        params, e3, traj, diag = run_one(alpha)

        path = OUT / f"trajectory_alpha_{alpha}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "N", "P"])
            for t, n, p in zip(traj.t, traj.N, traj.P):
                writer.writerow([f"{t:.17g}", f"{n:.17g}", f"{p:.17g}"])
        print(f"{path.name}: verdict {diag.verdict.name}, "
              f"{len(diag.peak_amplitudes)} prey peaks")

        ax.plot(traj.N, traj.P, lw=0.7, color="tab:blue")
        ax.plot([e3.N], [e3.P], "k+", ms=10)
        ax.set_title(f"alpha={alpha}  ({diag.verdict.name})", fontsize=10)
        ax.set_xlabel("prey N")
    axes[0].set_ylabel("predator P")

    fig.suptitle("exponential-map iterates at h=1, started at 0.9 of coexistence")
    fig.tight_layout()
    png = OUT / "trajectory_gallery.png"
    fig.savefig(png, dpi=150)
    print(f"wrote {png}")


if __name__ == "__main__":
    main()
