"""Print the equilibrium structure for a handful of parameter sets.

For each set: the three rest points, the derived constants, and the
continuous-time eigenvalues at coexistence. Run from the repo root:

    python3 demos/equilibrium_report.py
"""

from pp_stability_lab import (
    ModelKind,
    ModelParams,
    derived_quantities,
    eigenvalues_2x2,
    equilibria,
    jacobian_continuous,
)

CASES = {
    "textbook": ModelParams(r=0.5, K=2500.0, alpha=0.05, gamma=0.01, c=0.2),
    "softer coupling": ModelParams(r=0.5, K=2500.0, alpha=0.04, gamma=0.01, c=0.2),
    "overharvested": ModelParams(r=0.5, K=100.0, alpha=0.01, gamma=0.01, c=0.5),
}


def fmt_complex(z: complex) -> str:
    if z.imag == 0.0:
        return f"{z.real:+.6g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:+.6g} {sign} {abs(z.imag):.6g}i"


def main() -> None:
    for name, params in CASES.items():
        q = derived_quantities(params)
        print(f"== {name} ==")
        print(f"   params: r={params.r} K={params.K} alpha={params.alpha}"
              f" gamma={params.gamma} c={params.c}")
        print(f"   theta={q.theta:.6g}  T={q.T:.6g}  D={q.D:.6g}  beta={q.beta:.6g}")
        for eq in equilibria(params):
            tag = "feasible" if eq.feasible else "infeasible"
            print(f"   {eq.label:<12} ({eq.point.N:.6g}, {eq.point.P:.6g})  [{tag}]")

        # The continuous Jacobian at coexistence is the same for both kinds,
        # so one model suffices here.
        point = equilibria(params)[2].point
        eigs = eigenvalues_2x2(jacobian_continuous(ModelKind.RICKER, params, point))
        print(f"   coexistence eigenvalues: {fmt_complex(eigs.lambda1)},"
              f" {fmt_complex(eigs.lambda2)}")
        print()


if __name__ == "__main__":
    main()
