"""End-to-end acceptance checks, one per shipped guarantee.

Each test prints a single [PASS]/[FAIL] line (visible with ``pytest -s``)
and enforces the stated tolerance; nothing here may be loosened to pass.
"""

import math
import time
from contextlib import contextmanager

import numpy as np

from pp_stability_lab import (
    Axis,
    CaseTag,
    GridSpec,
    ModelKind,
    ModelParams,
    RegionLabel,
    Stability,
    State,
    Verdict,
    classify_at_step,
    derived_quantities,
    diagnose,
    e3_case,
    e3_step_bound,
    eigenvalues_2x2,
    equilibria,
    integrate_reference,
    iterate,
    jacobian_continuous,
    jacobian_discrete,
    lower_boundary,
    make_rng,
    random_kind,
    random_params,
    random_state,
    random_step,
    sweep,
    upper_boundary,
)

TEXTBOOK = ModelParams(r=0.5, K=2500.0, alpha=0.05, gamma=0.01, c=0.2)


@contextmanager
def criterion(number: int, text: str):
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {number}: {text}")
        raise
    print(f"[PASS] criterion {number}: {text}")


def rel_close(got, want, rel):
    return abs(got - want) <= rel * max(1.0, abs(want))


def nudged_start(params):
    e3 = equilibria(params)[2].point
    return State(0.9 * e3.N, 0.9 * e3.P)


def test_criterion_01_worked_constants():
    with criterion(1, "derived constants match 21/20 and 2/25 to 1e-12"):
        q = derived_quantities(TEXTBOOK)
        assert math.isclose(q.theta, 21.0 / 20.0, rel_tol=1e-12)
        assert math.isclose(q.T, 2.0 / 25.0, rel_tol=1e-12)


def test_criterion_02_step_bound():
    with criterion(2, "coexistence step threshold equals 20/21 to 1e-12"):
        bound = dict(e3_step_bound(TEXTBOOK).h_upper_bounds)["1/theta"]
        assert math.isclose(bound, 20.0 / 21.0, rel_tol=1e-12)


def test_criterion_03_eigenvalues():
    with criterion(3, "continuous coexistence eigenvalues are -0.04 +/- sqrt(206)/50 i"):
        point = equilibria(TEXTBOOK)[2].point
        eigs = eigenvalues_2x2(jacobian_continuous(ModelKind.RICKER, TEXTBOOK, point))
        want_im = math.sqrt(206.0) / 50.0
        assert math.isclose(eigs.lambda1.real, -0.04, rel_tol=1e-12, abs_tol=1e-15)
        assert math.isclose(eigs.lambda1.imag, want_im, rel_tol=1e-12, abs_tol=1e-15)
        assert math.isclose(eigs.lambda2.real, -0.04, rel_tol=1e-12, abs_tol=1e-15)
        assert math.isclose(eigs.lambda2.imag, -want_im, rel_tol=1e-12, abs_tol=1e-15)


def test_criterion_04_alpha_triptych():
    with criterion(4, "alpha sweep at h=1: escape / knife edge / capture"):
        start = time.perf_counter()

        sharp = TEXTBOOK
        edge = ModelParams(r=0.5, K=2500.0, alpha=0.048, gamma=0.01, c=0.2)
        soft = ModelParams(r=0.5, K=2500.0, alpha=0.04, gamma=0.01, c=0.2)

        assert (
            classify_at_step(ModelKind.RICKER, sharp, 1.0)[2]
            .classification_closed_form.variant
            is not Stability.SINK
        )
        edge_report = classify_at_step(ModelKind.RICKER, edge, 1.0)[2]
        assert edge_report.classification_closed_form.variant is Stability.NON_HYPERBOLIC
        edge_point = equilibria(edge)[2].point
        stepped = eigenvalues_2x2(jacobian_discrete(ModelKind.RICKER, edge, 1.0, edge_point))
        assert abs(abs(stepped.lambda1) - 1.0) <= 1e-9
        soft_cls = classify_at_step(ModelKind.RICKER, soft, 1.0)[2].classification_closed_form
        assert soft_cls.variant is Stability.SINK and soft_cls.oscillatory

        for kind in ModelKind:
            escape = diagnose(iterate(kind, sharp, 1.0, nudged_start(sharp), 5000))
            assert escape.verdict is Verdict.DIVERGENT

            ridge = diagnose(iterate(kind, edge, 1.0, nudged_start(edge), 5000))
            assert ridge.verdict in (Verdict.BOUNDED_OSCILLATION, Verdict.INCONCLUSIVE)

            capture = diagnose(
                iterate(kind, soft, 1.0, nudged_start(soft), 5000),
                target=State(500.0, 10.0),
            )
            assert capture.verdict is Verdict.CONVERGENT
            assert capture.final_error < 1e-3

        assert time.perf_counter() - start < 1.0


def test_criterion_05_mortality_sweep():
    with criterion(5, "raising mortality at h=1 moves escape to capture; 0.05 is the edge"):
        for kind in ModelKind:
            for zeta in (0.0, 0.01):
                params = ModelParams(0.5, 2500.0, 0.05, 0.01, 0.2 + zeta)
                diag = diagnose(iterate(kind, params, 1.0, nudged_start(params), 5000))
                assert diag.verdict is Verdict.DIVERGENT, (kind, zeta)
            for zeta in (0.1, 0.2):
                params = ModelParams(0.5, 2500.0, 0.05, 0.01, 0.2 + zeta)
                diag = diagnose(iterate(kind, params, 1.0, nudged_start(params), 5000))
                assert diag.verdict is Verdict.CONVERGENT, (kind, zeta)
            edge = ModelParams(0.5, 2500.0, 0.05, 0.01, 0.25)
            assert math.isclose(derived_quantities(edge).theta, 1.0, rel_tol=1e-12)
            report = classify_at_step(kind, edge, 1.0)[2]
            assert report.classification_closed_form.variant is Stability.NON_HYPERBOLIC


def test_criterion_06_boundary_cycle():
    with criterion(6, "at h=20/21 the orbit settles into a steady cycle for both kinds"):
        h = 20.0 / 21.0
        for kind in ModelKind:
            diag = diagnose(iterate(kind, TEXTBOOK, h, nudged_start(TEXTBOOK), 20_000))
            assert diag.verdict is Verdict.BOUNDED_OSCILLATION, kind
            late = np.array(diag.peak_amplitudes[-6:])
            ratios = late[1:] / late[:-1]
            assert len(ratios) == 5
            assert np.all(np.abs(ratios - 1.0) <= 1e-3), (kind, ratios)


def test_criterion_07_region_map():
    with criterion(7, "400x400 map pins both boundaries; capture region nests as h grows"):
        spec = GridSpec(
            kind=ModelKind.RICKER,
            x_axis=Axis.H,
            x_range=(0.0, 4.0, 400),
            beta_range=(0.0, 1e-3, 400),
            r=0.5,
            K=2500.0,
            gamma=0.01,
            c=0.2,
        )
        start = time.perf_counter()
        result = sweep(spec)
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"sweep took {elapsed:.1f}s"

        betas = result.beta_values
        width = 1e-3 / 400
        i = int(np.argmin(np.abs(result.x_values - 1.0)))
        h = float(result.x_values[i])
        star = upper_boundary(0.2, 2500.0, h)
        column = result.cells[i, :]
        fixed = [j for j, lab in enumerate(column) if lab is RegionLabel.FIXED_POINT_CONVERGENT]
        osc = [j for j, lab in enumerate(column) if lab is RegionLabel.OSCILLATORY_DIVERGENT]
        assert abs(betas[max(fixed)] - star) <= width
        assert abs(betas[min(osc)] - star) <= width

        floor = lower_boundary(0.2, 2500.0)
        assert math.isclose(floor, 8e-5, rel_tol=1e-12)
        infeasible = [j for j, lab in enumerate(column) if lab is RegionLabel.E3_INFEASIBLE]
        assert abs(betas[max(infeasible)] - floor) <= width
        assert abs(betas[max(infeasible) + 1] - floor) <= width

        steps = (0.5, 0.7, 1.0, 1.5)
        masks = {}
        for h_fixed in steps:
            grid = GridSpec(
                kind=ModelKind.RICKER,
                x_axis=Axis.C,
                x_range=(0.05, 1.0, 150),
                beta_range=(0.0, 1e-3, 150),
                r=0.5,
                K=2500.0,
                gamma=0.01,
                h=h_fixed,
            )
            masks[h_fixed] = sweep(grid).cells == RegionLabel.FIXED_POINT_CONVERGENT
        for small, big in zip(steps, steps[1:]):
            assert np.all(masks[big] <= masks[small]), (small, big)


def test_criterion_08_jacobian_identity():
    with criterion(8, "stepped Jacobian is I + h J entrywise; finite differences concur"):
        rng = make_rng(101)
        for _ in range(1000):
            params = random_params(rng)
            kind = random_kind(rng)
            h = rng.uniform(0.0, 2.0)
            s = random_state(rng, params)
            j = jacobian_continuous(kind, params, s)
            jd = jacobian_discrete(kind, params, h, s)
            want = (1.0 + h * j.a11, h * j.a12, h * j.a21, 1.0 + h * j.a22)
            got = (jd.a11, jd.a12, jd.a21, jd.a22)
            for g, w in zip(got, want):
                assert abs(g - w) <= 1e-12 * max(1.0, abs(w))

        from pp_stability_lab import discrete_step, ode_rhs

        for _ in range(100):
            params = random_params(rng)
            kind = random_kind(rng)
            h = random_step(rng)
            s = random_state(rng, params)
            for matrix, f in (
                (jacobian_continuous(kind, params, s), lambda st: ode_rhs(kind, params, st)),
                (
                    jacobian_discrete(kind, params, h, s),
                    lambda st: discrete_step(kind, params, h, st),
                ),
            ):
                dn = 1e-6 * max(1.0, abs(s.N))
                dp = 1e-6 * max(1.0, abs(s.P))
                col_n = [
                    (f(State(s.N + dn, s.P))[k] - f(State(s.N - dn, s.P))[k]) / (2 * dn)
                    for k in (0, 1)
                ]
                col_p = [
                    (f(State(s.N, s.P + dp))[k] - f(State(s.N, s.P - dp))[k]) / (2 * dp)
                    for k in (0, 1)
                ]
                scale = max(1.0, abs(matrix.a11), abs(matrix.a12), abs(matrix.a21), abs(matrix.a22))
                assert abs(col_n[0] - matrix.a11) <= 1e-6 * scale
                assert abs(col_p[0] - matrix.a12) <= 1e-6 * scale
                assert abs(col_n[1] - matrix.a21) <= 1e-6 * scale
                assert abs(col_p[1] - matrix.a22) <= 1e-6 * scale


def test_criterion_09_spectral_map():
    with criterion(9, "stepped spectrum is 1 + h times the continuous one; trace/det residual tiny"):
        rng = make_rng(102)
        for _ in range(1000):
            params = random_params(rng)
            kind = random_kind(rng)
            h = rng.uniform(0.0, 2.0)
            s = random_state(rng, params)
            cont = eigenvalues_2x2(jacobian_continuous(kind, params, s))
            disc = eigenvalues_2x2(jacobian_discrete(kind, params, h, s))
            want = sorted(
                (1.0 + h * cont.lambda1, 1.0 + h * cont.lambda2),
                key=lambda z: (z.real, z.imag),
            )
            got = sorted((disc.lambda1, disc.lambda2), key=lambda z: (z.real, z.imag))
            for g, w in zip(got, want):
                assert abs(g - w) <= 1e-10 * max(1.0, abs(w))

        for _ in range(500):
            params = random_params(rng)
            q = derived_quantities(params)
            point = equilibria(params)[2].point
            eigs = eigenvalues_2x2(
                jacobian_continuous(ModelKind.LOTKA_VOLTERRA, params, point)
            )
            bound = 1e-10 * max(1.0, q.T, abs(q.D))
            for lam in (eigs.lambda1, eigs.lambda2):
                assert abs(lam * lam + q.T * lam + q.D) < bound


def test_criterion_10_oracle_equivalence():
    with criterion(10, "closed-form verdicts equal the eigenvalue oracle off the bands"):
        rng = make_rng(103)
        checked = 0
        for _ in range(10_000):
            params = random_params(rng)
            kind = random_kind(rng)
            h = random_step(rng)
            if abs(derived_quantities(params).theta) <= 1e-6:
                continue
            reports = classify_at_step(kind, params, h)
            for which, report in enumerate(reports):
                point = equilibria(params)[which].point
                eigs = eigenvalues_2x2(jacobian_discrete(kind, params, h, point))
                gap = min(abs(abs(eigs.lambda1) - 1.0), abs(abs(eigs.lambda2) - 1.0))
                if gap <= 1e-7:
                    continue
                assert report.agreement is True, (params, kind, h, report)
                checked += 1
        assert checked > 25_000

        small_h = 1e-4
        confirmed = 0
        attempts = 0
        while confirmed < 500 and attempts < 20_000:
            attempts += 1
            params = random_params(rng)
            kind = random_kind(rng)
            q = derived_quantities(params)
            if abs(q.theta) <= 1e-4 or q.T <= 1e-4:
                continue
            for report in classify_at_step(kind, params, small_h):
                cont = report.classification_continuous.variant
                disc = report.classification_closed_form.variant
                if cont is Stability.STABLE:
                    assert disc is Stability.SINK, (params, kind, report)
                    confirmed += 1
                elif cont is Stability.SADDLE:
                    assert disc is Stability.SADDLE, (params, kind, report)
                    confirmed += 1
        assert confirmed >= 500


def test_criterion_11_integrator_order():
    with criterion(11, "reference integrator gains ~16x per substep halving and hits (400, 8.4)"):
        x0 = State(450.0, 9.0)
        for kind in ModelKind:
            runs = {
                s: integrate_reference(kind, TEXTBOOK, x0, 10.0, 1.0, substep=s)
                for s in (0.04, 0.02, 0.0025)
            }

            def gap(a, b):
                return max(np.max(np.abs(a.N - b.N)), np.max(np.abs(a.P - b.P)))

            ratio = gap(runs[0.04], runs[0.0025]) / gap(runs[0.02], runs[0.0025])
            assert 12.0 <= ratio <= 22.0, (kind, ratio)

        traj = integrate_reference(
            ModelKind.RICKER, TEXTBOOK, nudged_start(TEXTBOOK), 2000.0, 2.0
        )
        err = max(abs(traj.N[-1] - 400.0), abs(traj.P[-1] - 8.4)) / 400.0
        assert err < 1e-3
