"""Core definitions for the two predator-prey model families.

A Ricker-type model and a logistic Lotka-Volterra model share the same five
positive parameters and the same per-capita growth exponents X and Y.  Each
family exists in two forms: a continuous-time ODE right-hand side and its
forward-Euler discretization with step size h.  By construction the one-step
map satisfies  step(s) = s + h * rhs(s)  entrywise, so the discrete and
continuous descriptions never drift apart.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

# math.exp overflows IEEE doubles just above 709; large negative arguments
# underflow to 0.0, which is harmless, so only the positive side is guarded.
EXP_ARG_MAX = 700.0


class ModelKind(enum.Enum):
    """The two supported model families."""

    RICKER = "ricker"
    LOTKA_VOLTERRA = "lotka-volterra"


class State(NamedTuple):
    """A (prey, predator) population pair."""

    N: float
    P: float


@dataclass(frozen=True)
class ModelParams:
    """The five model constants, all strictly positive finite reals.

    r      prey growth rate (1/time)
    K      prey carrying capacity (individuals)
    alpha  predator attack rate (1/(predator*time))
    gamma  prey-to-predator conversion rate (dimensionless)
    c      predator starvation rate (1/time)
    """

    r: float
    K: float
    alpha: float
    gamma: float
    c: float

    def __post_init__(self) -> None:
        for name in ("r", "K", "alpha", "gamma", "c"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"parameter {name} must be a real number, got {value!r}")
            value = float(value)
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"parameter {name} must be positive and finite, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class DerivedQuantities:
    """Constants derived from ModelParams that control equilibrium stability."""

    theta: float  # alpha*gamma*K - c; sign decides coexistence feasibility
    T: float      # r*c / (alpha*gamma*K); always positive
    D: float      # theta * T
    beta: float   # alpha*gamma


def derived_quantities(params: ModelParams) -> DerivedQuantities:
    """Compute (theta, T, D, beta) for a parameter set."""
    beta = params.alpha * params.gamma
    theta = beta * params.K - params.c
    T = params.r * params.c / (beta * params.K)
    return DerivedQuantities(theta=theta, T=T, D=theta * T, beta=beta)


def growth_exponents(params: ModelParams, s: State) -> tuple[float, float]:
    """Per-capita growth exponents (X, Y) at state s.

    X = r(1 - N/K) - alpha*P for the prey, Y = alpha*gamma*N - c for the
    predator.  Both vanish exactly at the coexistence equilibrium.
    """
    N, P = s
    X = params.r * (1.0 - N / params.K) - params.alpha * P
    Y = params.alpha * params.gamma * N - params.c
    return X, Y


def guarded_exp(x: float) -> float:
    """exp(x), raising OverflowError past the double range instead of inf."""
    if x > EXP_ARG_MAX:
        raise OverflowError(f"exp({x:g}) exceeds the double range")
    return math.exp(x)


def ode_rhs(kind: ModelKind, params: ModelParams, s: State) -> tuple[float, float]:
    """Continuous-time right-hand side (dN/dt, dP/dt) at state s."""
    N, P = s
    X, Y = growth_exponents(params, s)
    if kind is ModelKind.RICKER:
        return N * (guarded_exp(X) - 1.0), P * (guarded_exp(Y) - 1.0)
    return N * X, P * Y


def discrete_step(kind: ModelKind, params: ModelParams, h: float, s: State) -> State:
    """One forward-Euler step of size h from state s.

    Returns s + h * ode_rhs(s).  Negative populations are representable and
    returned as-is; flagging them is the simulation layer's job.
    """
    if h < 0.0:
        raise ValueError(f"step size h must be >= 0, got {h!r}")
    dN, dP = ode_rhs(kind, params, s)
    return State(s.N + h * dN, s.P + h * dP)
