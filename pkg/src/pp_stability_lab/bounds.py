"""Closed-form step-size thresholds for each equilibrium of the stepped maps.

Every report pairs threshold expressions, named by their formula, with
floating-point values, evaluates the associated side conditions, and, when a
step size is supplied, classifies the equilibrium twice: once from the closed
forms and once from the eigenvalues of the stepped Jacobian.  The eigenvalue
route is authoritative; the closed forms are a reporting and cross-checking
layer, and the two routes share no arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .equilibrium import (
    BOUNDARY_TOL,
    EigenPair,
    Stability,
    StabilityClass,
    classify_continuous,
    classify_discrete,
    eigenvalues_2x2,
    equilibria,
    jacobian_continuous,
    jacobian_discrete,
    roots_from_trace_det,
)
from .model import ModelKind, ModelParams, derived_quantities

__all__ = [
    "CaseTag",
    "BoundReport",
    "e3_case",
    "e3_step_bound",
    "e2_bounds",
    "e1_bounds",
    "classify_at_step",
]


class CaseTag(Enum):
    """Which closed-form regime applies at an equilibrium."""

    E1 = "E1"
    E2_THETA_NEG = "E2_THETA_NEG"
    E2_THETA_POS = "E2_THETA_POS"
    E2_THETA_ZERO = "E2_THETA_ZERO"
    E3_REPEATED = "E3_REPEATED"
    E3_REAL_DISTINCT = "E3_REAL_DISTINCT"
    E3_COMPLEX = "E3_COMPLEX"
    E3_THETA_NEG = "E3_THETA_NEG"
    E3_THETA_ZERO = "E3_THETA_ZERO"


@dataclass(frozen=True)
class BoundReport:
    """Threshold summary for one equilibrium.

    ``h_upper_bounds`` and ``reported_values`` pair a formula string with its
    floating value; a ``None`` value marks an expression that is unbounded or
    undefined for these parameters.  ``conditions`` pair a condition string
    with True/False, or ``None`` when the condition cannot be evaluated (no
    step size supplied, or an undefined sub-expression).  The classification
    fields and the agreement flag are ``None`` unless a step size was given.
    """

    equilibrium: str
    case_tag: CaseTag
    h: Optional[float]
    h_upper_bounds: tuple[tuple[str, Optional[float]], ...]
    conditions: tuple[tuple[str, Optional[bool]], ...]
    reported_values: tuple[tuple[str, float], ...]
    classification_closed_form: Optional[StabilityClass]
    classification_oracle: Optional[StabilityClass]
    classification_continuous: StabilityClass
    agreement: Optional[bool]
    annotations: tuple[str, ...] = ()


def _near(h: float, bound: Optional[float], tol: float) -> bool:
    # Relative band around a threshold, floored at absolute tol for
    # thresholds below 1.
    if bound is None or not math.isfinite(bound):
        return False
    return abs(h - bound) <= tol * max(1.0, abs(bound))


def _oracle_at(
    kind: ModelKind, params: ModelParams, h: float, which: int, tol: float
) -> StabilityClass:
    eq = equilibria(params)[which]
    stepped = jacobian_discrete(kind, params, h, eq.point)
    return classify_discrete(eigenvalues_2x2(stepped), tol)


def _continuous_at(
    kind: ModelKind, params: ModelParams, which: int, tol: float
) -> StabilityClass:
    eq = equilibria(params)[which]
    flow = jacobian_continuous(kind, params, eq.point)
    return classify_continuous(eigenvalues_2x2(flow), tol)


def e3_case(params: ModelParams, tol: float = BOUNDARY_TOL) -> CaseTag:
    """Pick the coexistence-point regime from theta and the trace gap.

    The repeated-root band is |T - 4*theta| <= tol*max(T, 4*theta): exact
    equality is measure-zero in parameter space, so a band is required.
    """
    q = derived_quantities(params)
    if abs(q.theta) <= tol:
        return CaseTag.E3_THETA_ZERO
    if q.theta < 0.0:
        return CaseTag.E3_THETA_NEG
    gap = q.T - 4.0 * q.theta
    if abs(gap) <= tol * max(q.T, 4.0 * q.theta):
        return CaseTag.E3_REPEATED
    return CaseTag.E3_REAL_DISTINCT if gap > 0.0 else CaseTag.E3_COMPLEX


def _classify_e3_closed(
    case: CaseTag, theta: float, big_t: float, lam: EigenPair, h: float, tol: float
) -> StabilityClass:
    # Thresholds come from the trace/determinant quadratic, never from the
    # numeric Jacobian, so this route is independent of the oracle.
    if case is CaseTag.E3_THETA_ZERO:
        # One stepped eigenvalue is exactly 1 for every h.
        return StabilityClass(Stability.NON_HYPERBOLIC, False)
    if case is CaseTag.E3_THETA_NEG:
        lam_neg = min(lam.lambda1.real, lam.lambda2.real)
        bound = -2.0 / lam_neg
        if _near(h, bound, tol):
            return StabilityClass(Stability.NON_HYPERBOLIC, False)
        if h < bound:
            return StabilityClass(Stability.SADDLE, False)
        return StabilityClass(Stability.SOURCE, False)
    if case is CaseTag.E3_COMPLEX:
        # |1 + h*lambda|^2 collapses to 1 + h*T*(h*theta - 1).
        modsq = max(1.0 + h * big_t * (h * theta - 1.0), 0.0)
        m = math.sqrt(modsq)
        if abs(m - 1.0) <= tol:
            return StabilityClass(Stability.NON_HYPERBOLIC, True)
        if m < 1.0:
            return StabilityClass(Stability.SINK, True)
        return StabilityClass(Stability.SOURCE, True)
    if case is CaseTag.E3_REPEATED:
        bound = 4.0 / big_t
        if _near(h, bound, tol):
            return StabilityClass(Stability.NON_HYPERBOLIC, False)
        if h < bound:
            return StabilityClass(Stability.SINK, False)
        return StabilityClass(Stability.SOURCE, False)
    # Real distinct, both negative: order the two crossing points directly.
    lo = -2.0 / min(lam.lambda1.real, lam.lambda2.real)
    hi = -2.0 / max(lam.lambda1.real, lam.lambda2.real)
    if _near(h, lo, tol) or _near(h, hi, tol):
        return StabilityClass(Stability.NON_HYPERBOLIC, False)
    if h < lo:
        return StabilityClass(Stability.SINK, False)
    if h < hi:
        return StabilityClass(Stability.SADDLE, False)
    return StabilityClass(Stability.SOURCE, False)


def e3_step_bound(
    params: ModelParams,
    h: Optional[float] = None,
    *,
    kind: ModelKind = ModelKind.RICKER,
    tol: float = BOUNDARY_TOL,
) -> BoundReport:
    """Report the coexistence-point step thresholds for the applicable case.

    The closed forms at this point are identical for both model families;
    ``kind`` only selects the Jacobian used by the oracle cross-check.
    """
    q = derived_quantities(params)
    theta, big_t = q.theta, q.T
    case = e3_case(params, tol)
    lam = roots_from_trace_det(-big_t, theta * big_t)

    bounds: list[tuple[str, Optional[float]]] = []
    conditions: list[tuple[str, Optional[bool]]] = []
    reported: list[tuple[str, float]] = [("theta", theta), ("T", big_t)]
    annotations: list[str] = []

    if case is CaseTag.E3_REPEATED:
        bounds.append(("T/4", big_t / 4.0))
        bounds.append(("4/T", 4.0 / big_t))
        reported.append(("lambda", -big_t / 2.0))
        conditions.append(("T = 4*theta", True))
        if h is not None:
            conditions.append(("0 < h < T/4", 0.0 < h < big_t / 4.0))
            conditions.append(("h < 4/T", h < 4.0 / big_t and not _near(h, 4.0 / big_t, tol)))
        else:
            conditions.append(("0 < h < T/4", None))
            conditions.append(("h < 4/T", None))
        annotations.append(
            "two candidate thresholds are reported; the classification uses"
            " 4/T, the value consistent with |1 + h*lambda| < 1 for"
            " lambda = -T/2"
        )
    elif case is CaseTag.E3_REAL_DISTINCT:
        lam1, lam2 = lam.lambda1.real, lam.lambda2.real
        b1, b2 = -2.0 / lam1, -2.0 / lam2
        bounds.append(("-2/lambda_1", b1))
        bounds.append(("-2/lambda_2", b2))
        reported.append(("lambda_1", lam1))
        reported.append(("lambda_2", lam2))
        lo, hi = min(b1, b2), max(b1, b2)
        if h is not None:
            conditions.append(("h < min(-2/lambda_1, -2/lambda_2)", h < lo))
            conditions.append(
                ("min(-2/lambda_1, -2/lambda_2) < h < max(-2/lambda_1, -2/lambda_2)", lo < h < hi)
            )
            conditions.append(("h = -2/lambda_1", _near(h, b1, tol)))
            conditions.append(("h = -2/lambda_2", _near(h, b2, tol)))
        else:
            conditions.append(("h < min(-2/lambda_1, -2/lambda_2)", None))
            conditions.append(
                ("min(-2/lambda_1, -2/lambda_2) < h < max(-2/lambda_1, -2/lambda_2)", None)
            )
            conditions.append(("h = -2/lambda_1", None))
            conditions.append(("h = -2/lambda_2", None))
    elif case is CaseTag.E3_COMPLEX:
        bounds.append(("1/theta", 1.0 / theta))
        reported.append(("Re(lambda)", -big_t / 2.0))
        reported.append(("Im(lambda)", abs(lam.lambda1.imag)))
        if h is not None:
            aux = 1.0 + h * big_t * (h * theta - 1.0)
            reported.append(("1 + h*T*(h*theta - 1)", aux))
            conditions.append(("h < 1/theta", h < 1.0 / theta and not _near(h, 1.0 / theta, tol)))
            conditions.append(("h = 1/theta", _near(h, 1.0 / theta, tol)))
            conditions.append(("0 < 1 + h*T*(h*theta - 1)", aux > 0.0))
        else:
            conditions.append(("h < 1/theta", None))
            conditions.append(("h = 1/theta", None))
            conditions.append(("0 < 1 + h*T*(h*theta - 1)", None))
        annotations.append(
            "1 + h*T*(h*theta - 1) equals |1 + h*lambda|^2 and is"
            " non-negative by construction; it is reported, never used to"
            " gate the classification"
        )
    elif case is CaseTag.E3_THETA_NEG:
        lam_pos = max(lam.lambda1.real, lam.lambda2.real)
        lam_neg = min(lam.lambda1.real, lam.lambda2.real)
        bound = -2.0 / lam_neg
        bounds.append(("-2/lambda_2", bound))
        reported.append(("lambda_1", lam_pos))
        reported.append(("lambda_2", lam_neg))
        if h is not None:
            conditions.append(("h < -2/lambda_2", h < bound and not _near(h, bound, tol)))
            conditions.append(("h = -2/lambda_2", _near(h, bound, tol)))
        else:
            conditions.append(("h < -2/lambda_2", None))
            conditions.append(("h = -2/lambda_2", None))
        annotations.append(
            "lambda_2 denotes the negative real eigenvalue and lambda_1 the"
            " positive one; the names follow sign, not magnitude"
        )
        annotations.append("the coexistence point is infeasible here (negative predator density)")
    else:  # E3_THETA_ZERO
        reported.append(("2/T", 2.0 / big_t))
        conditions.append(("h != 2/T", None if h is None else not _near(h, 2.0 / big_t, tol)))
        annotations.append("one stepped eigenvalue has unit modulus for every step size")

    closed = None if h is None else _classify_e3_closed(case, theta, big_t, lam, h, tol)
    oracle = None if h is None else _oracle_at(kind, params, h, 2, tol)
    agreement = None if h is None else closed == oracle
    return BoundReport(
        equilibrium="E3",
        case_tag=case,
        h=h,
        h_upper_bounds=tuple(bounds),
        conditions=tuple(conditions),
        reported_values=tuple(reported),
        classification_closed_form=closed,
        classification_oracle=oracle,
        classification_continuous=_continuous_at(kind, params, 2, tol),
        agreement=agreement,
        annotations=tuple(annotations),
    )


def _e2_second_bound(kind: ModelKind, theta: float) -> Optional[float]:
    """Step threshold for the predator direction at the prey-only point.

    Returns None when exp(theta) overflows; the expression is then a
    vanishing negative number with no role as a bound.
    """
    if kind is ModelKind.RICKER:
        try:
            denom = -math.expm1(theta)  # 1 - e^theta
        except OverflowError:
            return None
        if denom == 0.0:
            return None
        return 2.0 / denom
    if theta == 0.0:
        return None
    return -2.0 / theta


def e2_bounds(
    kind: ModelKind,
    params: ModelParams,
    h: Optional[float] = None,
    *,
    tol: float = BOUNDARY_TOL,
) -> BoundReport:
    """Report the prey-only point's step thresholds and case conditions."""
    q = derived_quantities(params)
    theta, r = q.theta, params.r
    b1 = 2.0 / r
    b2 = _e2_second_bound(kind, theta)
    second_name = "2/(1 - exp(theta))" if kind is ModelKind.RICKER else "-2/theta"

    bounds: list[tuple[str, Optional[float]]] = [("2/r", b1)]
    conditions: list[tuple[str, Optional[bool]]] = []
    reported: list[tuple[str, float]] = [("theta", theta)]
    annotations: list[str] = []

    def flag(value: Optional[bool]) -> Optional[bool]:
        return None if h is None else value

    if abs(theta) <= tol:
        case = CaseTag.E2_THETA_ZERO
        conditions.append(("h != 2/r", flag(None if h is None else not _near(h, b1, tol))))
        annotations.append("one stepped eigenvalue has unit modulus for every step size")
    elif theta < 0.0:
        case = CaseTag.E2_THETA_NEG
        bounds.append((second_name, b2))
        lo = min(b1, b2) if b2 is not None else b1
        hi = max(b1, b2) if b2 is not None else b1
        conditions.append(
            (f"h < min(2/r, {second_name})", flag(None if h is None else h < lo))
        )
        if kind is ModelKind.RICKER:
            split = math.log1p(-r) if r < 1.0 else None  # ln(1 - r)
            conditions.append(
                (
                    "theta < ln(1 - r) and 2/r < h < 2/(1 - exp(theta))",
                    flag(
                        None
                        if h is None or split is None or b2 is None
                        else theta < split and b1 < h < b2
                    ),
                )
            )
            conditions.append(
                (
                    "theta > ln(1 - r) and 2/(1 - exp(theta)) < h < 2/r",
                    flag(
                        None
                        if h is None or split is None or b2 is None
                        else theta > split and b2 < h < b1
                    ),
                )
            )
            conditions.append(
                (
                    "h = 2/(1 - exp(theta)) and h != 2/r",
                    flag(
                        None
                        if h is None
                        else _near(h, b2, tol) and not _near(h, b1, tol)
                    ),
                )
            )
            conditions.append(
                (
                    "h = 2/r and theta != 0 and theta != ln(1 - r)",
                    flag(
                        None
                        if h is None or split is None
                        else _near(h, b1, tol) and abs(theta - split) > tol
                    ),
                )
            )
        else:
            split = -r
            conditions.append(
                (
                    "theta < -r and 2/r < h < -2/theta",
                    flag(None if h is None else theta < split and b1 < h < b2),
                )
            )
            conditions.append(
                (
                    "theta > -r and -2/theta < h < 2/r",
                    flag(None if h is None else theta > split and b2 < h < b1),
                )
            )
            conditions.append(
                (
                    "h = -2/theta and theta != 0 and theta != -r",
                    flag(
                        None
                        if h is None
                        else _near(h, b2, tol) and abs(theta - split) > tol
                    ),
                )
            )
            conditions.append(
                (
                    "h = 2/r and theta != 0 and theta != -r",
                    flag(
                        None
                        if h is None
                        else _near(h, b1, tol) and abs(theta - split) > tol
                    ),
                )
            )
        if kind is ModelKind.RICKER and r >= 1.0:
            annotations.append(
                "ln(1 - r) is undefined for r >= 1; the theta-based case"
                " split is marked inapplicable"
            )
        annotations.append(
            "the saddle window is classified by direct comparison with both"
            " thresholds; the theta-based case conditions are reported for"
            " reference only"
        )
    else:
        case = CaseTag.E2_THETA_POS
        conditions.append(
            ("h < 2/r", flag(None if h is None else h < b1 and not _near(h, b1, tol)))
        )
        conditions.append(("h = 2/r", flag(None if h is None else _near(h, b1, tol))))
        if kind is ModelKind.RICKER:
            literal = (
                None
                if h is None or b2 is None
                else h < min(b1, b2)
            )
            conditions.append(("h < min(2/r, 2/(1 - exp(theta)))", flag(literal)))
            annotations.append(
                "2/(1 - exp(theta)) is negative for theta > 0, so the"
                " comparison against 2/r alone governs"
            )

    closed = None
    if h is not None:
        if case is CaseTag.E2_THETA_ZERO:
            closed = StabilityClass(Stability.NON_HYPERBOLIC, False)
        elif case is CaseTag.E2_THETA_NEG:
            lo, hi = min(b1, b2), max(b1, b2)
            if _near(h, lo, tol) or _near(h, hi, tol):
                closed = StabilityClass(Stability.NON_HYPERBOLIC, False)
            elif h < lo:
                closed = StabilityClass(Stability.SINK, False)
            elif h < hi:
                closed = StabilityClass(Stability.SADDLE, False)
            else:
                closed = StabilityClass(Stability.SOURCE, False)
        else:
            # Predator direction grows for theta > 0; only 2/r matters.
            if _near(h, b1, tol):
                closed = StabilityClass(Stability.NON_HYPERBOLIC, False)
            elif h < b1:
                closed = StabilityClass(Stability.SADDLE, False)
            else:
                closed = StabilityClass(Stability.SOURCE, False)

    oracle = None if h is None else _oracle_at(kind, params, h, 1, tol)
    agreement = None if h is None else closed == oracle
    return BoundReport(
        equilibrium="E2",
        case_tag=case,
        h=h,
        h_upper_bounds=tuple(bounds),
        conditions=tuple(conditions),
        reported_values=tuple(reported),
        classification_closed_form=closed,
        classification_oracle=oracle,
        classification_continuous=_continuous_at(kind, params, 1, tol),
        agreement=agreement,
        annotations=tuple(annotations),
    )


def e1_bounds(
    kind: ModelKind,
    params: ModelParams,
    h: Optional[float] = None,
    *,
    tol: float = BOUNDARY_TOL,
) -> BoundReport:
    """Report the extinction point's step threshold.

    The prey direction expands for every positive step, so the point is
    never a sink; the threshold separates saddle from source.
    """
    if kind is ModelKind.RICKER:
        bound = 2.0 / (-math.expm1(-params.c))  # 2/(1 - e^-c)
        name = "2/(1 - exp(-c))"
    else:
        bound = 2.0 / params.c
        name = "2/c"

    conditions: list[tuple[str, Optional[bool]]] = []
    if h is not None:
        conditions.append((f"h < {name}", h < bound and not _near(h, bound, tol)))
        conditions.append((f"h = {name}", _near(h, bound, tol)))
        if _near(h, bound, tol):
            closed = StabilityClass(Stability.NON_HYPERBOLIC, False)
        elif h < bound:
            closed = StabilityClass(Stability.SADDLE, False)
        else:
            closed = StabilityClass(Stability.SOURCE, False)
    else:
        conditions.append((f"h < {name}", None))
        conditions.append((f"h = {name}", None))
        closed = None

    oracle = None if h is None else _oracle_at(kind, params, h, 0, tol)
    agreement = None if h is None else closed == oracle
    return BoundReport(
        equilibrium="E1",
        case_tag=CaseTag.E1,
        h=h,
        h_upper_bounds=((name, bound),),
        conditions=tuple(conditions),
        reported_values=(),
        classification_closed_form=closed,
        classification_oracle=oracle,
        classification_continuous=_continuous_at(kind, params, 0, tol),
        agreement=agreement,
        annotations=("never asymptotically stable for any step size",),
    )


def classify_at_step(
    kind: ModelKind,
    params: ModelParams,
    h: float,
    tol: float = BOUNDARY_TOL,
) -> list[BoundReport]:
    """Evaluate all three equilibria at a given step size.

    Each report carries both the closed-form and the eigenvalue-oracle
    classification together with their agreement flag.
    """
    if not (isinstance(h, (int, float)) and math.isfinite(h) and h > 0):
        raise ValueError("step size h must be a positive finite number")
    h = float(h)
    return [
        e1_bounds(kind, params, h, tol=tol),
        e2_bounds(kind, params, h, tol=tol),
        e3_step_bound(params, h, kind=kind, tol=tol),
    ]
