"""Walk the step-size thresholds for each equilibrium and model kind.

Shows the closed-form bounds, then scans h across each threshold and
reports how the classification flips. Run from the repo root:

    python3 demos/step_bound_gallery.py
"""

from pp_stability_lab import (
    ModelKind,
    ModelParams,
    classify_at_step,
    e1_bounds,
    e2_bounds,
    e3_case,
    e3_step_bound,
)

TEXTBOOK = ModelParams(r=0.5, K=2500.0, alpha=0.05, gamma=0.01, c=0.2)
REAL_ROOTS = ModelParams(r=1.0, K=100.0, alpha=0.1, gamma=0.1, c=0.9)


def show_bounds(title, report):
    print(f"-- {title} --")
    print(f"   case: {report.case_tag.name}")
    for name, value in report.h_upper_bounds:
        shown = "unbounded" if value is None else f"{value:.6g}"
        print(f"   bound {name} = {shown}")
    for text, holds in report.conditions:
        mark = "?" if holds is None else ("yes" if holds else "no")
        print(f"   [{mark}] {text}")
    for note in report.annotations:
        print(f"   note: {note}")
    print()


def scan(kind, params, steps):
    print(f"-- classification scan, {kind.name.lower()} --")
    for h in steps:
        labels = []
        for report in classify_at_step(kind, params, h):
            cls = report.classification_closed_form
            spin = "~" if cls.oscillatory else " "
            labels.append(f"{report.equilibrium}:{cls.variant.name}{spin}")
        print(f"   h={h:<8g} " + "  ".join(labels))
    print()


def main() -> None:
    print(f"coexistence case for the textbook set: {e3_case(TEXTBOOK).name}\n")
    show_bounds("coexistence, textbook (complex pair)", e3_step_bound(TEXTBOOK))
    show_bounds("coexistence, real roots", e3_step_bound(REAL_ROOTS))
    show_bounds("prey-only, exponential map", e2_bounds(ModelKind.RICKER, TEXTBOOK))
    show_bounds("prey-only, linearized map", e2_bounds(ModelKind.LOTKA_VOLTERRA, TEXTBOOK))
    show_bounds("extinction, exponential map", e1_bounds(ModelKind.RICKER, TEXTBOOK))

    # 20/21 is the coexistence threshold for the textbook set; watch the
    # sink flip to a source as h crosses it.
    scan(ModelKind.RICKER, TEXTBOOK, (0.5, 20.0 / 21.0, 1.0, 2.0))
    scan(ModelKind.LOTKA_VOLTERRA, TEXTBOOK, (0.5, 20.0 / 21.0, 1.0, 2.0))


if __name__ == "__main__":
    main()
