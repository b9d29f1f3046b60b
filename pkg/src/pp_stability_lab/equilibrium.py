"""Equilibria, analytic Jacobians, and 2x2 eigenvalue classification.

Both model families share the same three equilibria: extinction (0,0), a
prey-only point (K,0), and a coexistence point whose predator coordinate is
non-negative exactly when theta = alpha*gamma*K - c is.  The discrete-map
Jacobian is I + h*J entrywise, so discrete eigenvalues are 1 + h*lambda and
stability questions reduce to moduli against the unit circle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import (
    ModelKind,
    ModelParams,
    State,
    derived_quantities,
    growth_exponents,
    guarded_exp,
)

# Detection band for "on the boundary": applied to |Re(lambda)| in the
# continuous setting and to ||lambda| - 1| in the discrete one.
BOUNDARY_TOL = 1e-9


class Stability(enum.Enum):
    SINK = "SINK"
    SOURCE = "SOURCE"
    SADDLE = "SADDLE"
    NON_HYPERBOLIC = "NON_HYPERBOLIC"
    STABLE = "STABLE"
    UNSTABLE = "UNSTABLE"


@dataclass(frozen=True)
class StabilityClass:
    """A stability verdict plus whether the local dynamics rotate."""

    variant: Stability
    oscillatory: bool


@dataclass(frozen=True)
class Matrix2:
    """A dense real 2x2 matrix."""

    a11: float
    a12: float
    a21: float
    a22: float

    def trace(self) -> float:
        return self.a11 + self.a22

    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalues of a real 2x2 matrix; complex values come as a conjugate pair.

    For real pairs lambda1 >= lambda2; for complex pairs lambda1 carries the
    positive imaginary part.
    """

    lambda1: complex
    lambda2: complex


@dataclass(frozen=True)
class Equilibrium:
    label: str
    point: State
    feasible: bool


def equilibria(params: ModelParams) -> list[Equilibrium]:
    """Return [E1, E2, E3]; identical for both model families."""
    q = derived_quantities(params)
    n3 = params.c / q.beta
    p3 = (params.r / params.alpha) * (1.0 - params.c / (params.K * q.beta))
    return [
        Equilibrium("E1", State(0.0, 0.0), True),
        Equilibrium("E2", State(params.K, 0.0), True),
        # predator coordinate has the sign of theta
        Equilibrium("E3", State(n3, p3), q.theta >= 0.0),
    ]


def jacobian_continuous(kind: ModelKind, params: ModelParams, s: State) -> Matrix2:
    """Analytic Jacobian of ode_rhs at state s."""
    N, P = s
    X, Y = growth_exponents(params, s)
    rho = params.r / params.K
    if kind is ModelKind.RICKER:
        eX = guarded_exp(X)
        eY = guarded_exp(Y)
        return Matrix2(
            eX - 1.0 - rho * N * eX,
            -params.alpha * N * eX,
            params.alpha * params.gamma * P * eY,
            eY - 1.0,
        )
    return Matrix2(
        X - rho * N,
        -params.alpha * N,
        params.alpha * params.gamma * P,
        Y,
    )


def jacobian_discrete(kind: ModelKind, params: ModelParams, h: float, s: State) -> Matrix2:
    """Analytic Jacobian of the one-step map; entrywise I + h*J."""
    if h < 0.0:
        raise ValueError(f"step size h must be >= 0, got {h!r}")
    j = jacobian_continuous(kind, params, s)
    return Matrix2(1.0 + h * j.a11, h * j.a12, h * j.a21, 1.0 + h * j.a22)


def roots_from_trace_det(tr: float, det: float) -> EigenPair:
    """Roots of x^2 - tr*x + det, with the cancellation-safe formula.

    The larger-magnitude root is computed first and the companion recovered
    as det/root, which stays accurate when tr^2 is close to 4*det.
    """
    disc = tr * tr - 4.0 * det
    if disc < 0.0:
        half = 0.5 * math.sqrt(-disc)
        return EigenPair(complex(0.5 * tr, half), complex(0.5 * tr, -half))
    root = math.sqrt(disc)
    big = 0.5 * (tr + root) if tr >= 0.0 else 0.5 * (tr - root)
    if big == 0.0:
        # tr and det both vanish
        return EigenPair(complex(0.0), complex(0.0))
    other = det / big
    lo, hi = (big, other) if big <= other else (other, big)
    return EigenPair(complex(hi), complex(lo))


def eigenvalues_2x2(m: Matrix2) -> EigenPair:
    """Eigenvalues of m via trace and determinant."""
    return roots_from_trace_det(m.trace(), m.det())


def classify_continuous(eigs: EigenPair, tol: float = BOUNDARY_TOL) -> StabilityClass:
    """Classify by real parts against zero, with a +/- tol detection band."""
    re1, re2 = eigs.lambda1.real, eigs.lambda2.real
    oscillatory = eigs.lambda1.imag != 0.0 or eigs.lambda2.imag != 0.0
    if abs(re1) <= tol or abs(re2) <= tol:
        return StabilityClass(Stability.NON_HYPERBOLIC, oscillatory)
    if re1 < 0.0 and re2 < 0.0:
        return StabilityClass(Stability.STABLE, oscillatory)
    if re1 > 0.0 and re2 > 0.0:
        return StabilityClass(Stability.UNSTABLE, oscillatory)
    return StabilityClass(Stability.SADDLE, oscillatory)


def classify_discrete(eigs: EigenPair, tol: float = BOUNDARY_TOL) -> StabilityClass:
    """Classify by moduli against the unit circle, with a +/- tol band."""
    m1, m2 = abs(eigs.lambda1), abs(eigs.lambda2)
    oscillatory = eigs.lambda1.imag != 0.0 or eigs.lambda2.imag != 0.0
    if abs(m1 - 1.0) <= tol or abs(m2 - 1.0) <= tol:
        return StabilityClass(Stability.NON_HYPERBOLIC, oscillatory)
    if m1 < 1.0 and m2 < 1.0:
        return StabilityClass(Stability.SINK, oscillatory)
    if m1 > 1.0 and m2 > 1.0:
        return StabilityClass(Stability.SOURCE, oscillatory)
    return StabilityClass(Stability.SADDLE, oscillatory)
