"""Sweep the (h, beta) and (c, beta) planes and render stability maps.

Each cell is classified at its center; the closed-form boundary curves
are drawn on top so you can see the map and the formulas agree. Writes
PNGs and a CSV under demos/output/.

    python3 demos/region_maps.py
"""

import csv
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.colors import ListedColormap

from pp_stability_lab import (
    Axis,
    GridSpec,
    ModelKind,
    RegionLabel,
    lower_boundary,
    sweep,
    upper_boundary,
)

OUT = Path(__file__).resolve().parent / "output"

ORDER = (
    RegionLabel.E3_INFEASIBLE,
    RegionLabel.FIXED_POINT_CONVERGENT,
    RegionLabel.BOUNDARY,
    RegionLabel.OSCILLATORY_DIVERGENT,
    RegionLabel.OTHER,
)
COLORS = ("#bbbbbb", "#2b76b2", "#111111", "#d95f02", "#ffd92f")


def render(result, x_label, png_name, boundary=None):
    index = {label: k for k, label in enumerate(ORDER)}
    img = np.vectorize(lambda lab: index[lab])(result.cells).T

    fig, ax = plt.subplots(figsize=(7, 5))
    ax.imshow(
        img,
        origin="lower",
        aspect="auto",
        cmap=ListedColormap(COLORS),
        vmin=-0.5,
        vmax=len(ORDER) - 0.5,
        extent=(
            result.x_values[0],
            result.x_values[-1],
            result.beta_values[0],
            result.beta_values[-1],
        ),
    )
    if boundary is not None:
        xs, ys = boundary
        ax.plot(xs, ys, "w--", lw=1.2, label="closed-form threshold")
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel(x_label)
    ax.set_ylabel("beta = alpha * gamma")
    ax.set_title(png_name.replace(".png", ""))
    fig.tight_layout()
    fig.savefig(OUT / png_name, dpi=150)
    print(f"wrote {OUT / png_name}")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)

    # Step size along x, fixed mortality.
    h_spec = GridSpec(
        kind=ModelKind.RICKER,
        x_axis=Axis.H,
        x_range=(0.05, 4.0, 240),
        beta_range=(0.0, 1e-3, 240),
        r=0.5,
        K=2500.0,
        gamma=0.01,
        c=0.2,
    )
    h_result = sweep(h_spec)
    xs = np.asarray(h_result.x_values)
    render(
        h_result,
        "step size h",
        "region_map_step_size.png",
        boundary=(xs, np.array([upper_boundary(0.2, 2500.0, h) for h in xs])),
    )

    path = OUT / "region_map_step_size.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "beta", "label"])
        for i, x in enumerate(h_result.x_values):
            for j, b in enumerate(h_result.beta_values):
                writer.writerow([f"{x:.17g}", f"{b:.17g}", h_result.cells[i, j].name])
    print(f"wrote {path}")

    # Mortality along x, fixed step size; smaller h grows the stable band.
    for h in (0.5, 1.0):
        c_spec = GridSpec(
            kind=ModelKind.RICKER,
            x_axis=Axis.C,
            x_range=(0.05, 1.0, 240),
            beta_range=(0.0, 1e-3, 240),
            r=0.5,
            K=2500.0,
            gamma=0.01,
            h=h,
        )
        result = sweep(c_spec)
        xs = np.asarray(result.x_values)
        render(
            result,
            "predator mortality c",
            f"region_map_mortality_h{h}.png",
            boundary=(xs, np.array([upper_boundary(c, 2500.0, h) for c in xs])),
        )
        feasible_floor = np.array([lower_boundary(c, 2500.0) for c in xs])
        print(f"   h={h}: feasibility floor spans "
              f"{feasible_floor.min():.3g} .. {feasible_floor.max():.3g}")


if __name__ == "__main__":
    main()
