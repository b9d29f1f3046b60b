"""Stability-region maps over two-parameter grids.

One axis is the step size h or the predator mortality c; the other is the
predation product beta = alpha*gamma, with gamma held fixed and alpha
recovered per cell.  Cells are labeled by the eigenvalue oracle at the
coexistence point, never by the analytic curves; the curves are emitted
alongside as overlay metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .equilibrium import (
    BOUNDARY_TOL,
    Stability,
    classify_discrete,
    eigenvalues_2x2,
    equilibria,
    jacobian_discrete,
)
from .model import ModelKind, ModelParams, derived_quantities

__all__ = [
    "BETA_FLOOR",
    "DEFAULT_CELLS",
    "Axis",
    "RegionLabel",
    "GridSpec",
    "BoundaryCurve",
    "RegionMap",
    "sweep",
    "boundary_curve",
    "upper_boundary",
    "lower_boundary",
]

# alpha = beta/gamma must stay positive, so the beta grid never touches 0.
BETA_FLOOR = 1e-7
DEFAULT_CELLS = 400


class Axis(Enum):
    H = "h"
    C = "c"


class RegionLabel(Enum):
    FIXED_POINT_CONVERGENT = "FIXED_POINT_CONVERGENT"
    OSCILLATORY_DIVERGENT = "OSCILLATORY_DIVERGENT"
    BOUNDARY = "BOUNDARY"
    E3_INFEASIBLE = "E3_INFEASIBLE"
    OTHER = "OTHER"


def _check_range(name: str, rng: tuple[float, float, int]) -> None:
    lo, hi, n = rng
    if not (math.isfinite(lo) and math.isfinite(hi) and lo >= 0.0 and lo < hi):
        raise ValueError(f"{name} must satisfy 0 <= lo < hi")
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValueError(f"{name} cell count must be an integer >= 2")


def _check_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0.0):
        raise ValueError(f"{name} must be positive and finite")


@dataclass(frozen=True)
class GridSpec:
    """A sweep layout: which quantity runs along x, and what stays fixed.

    ``c`` is required when x_axis is H (h is swept); ``h`` is required when
    x_axis is C.  Ranges are (lo, hi, n_cells) with cell-center sampling.
    """

    kind: ModelKind
    x_axis: Axis
    x_range: tuple[float, float, int]
    beta_range: tuple[float, float, int]
    r: float
    K: float
    gamma: float
    c: Optional[float] = None
    h: Optional[float] = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, ModelKind):
            raise ValueError("kind must be a ModelKind")
        if not isinstance(self.x_axis, Axis):
            raise ValueError("x_axis must be an Axis")
        _check_range("x_range", self.x_range)
        _check_range("beta_range", self.beta_range)
        _check_positive("r", self.r)
        _check_positive("K", self.K)
        _check_positive("gamma", self.gamma)
        if self.x_axis is Axis.H:
            if self.c is None:
                raise ValueError("c must be fixed when sweeping along h")
            _check_positive("c", self.c)
        else:
            if self.h is None:
                raise ValueError("h must be fixed when sweeping along c")
            _check_positive("h", self.h)

    def x_values(self) -> np.ndarray:
        lo, hi, n = self.x_range
        width = (hi - lo) / n
        return lo + (np.arange(n) + 0.5) * width

    def beta_values(self) -> np.ndarray:
        lo, hi, n = self.beta_range
        width = (hi - lo) / n
        return np.maximum(lo + (np.arange(n) + 0.5) * width, BETA_FLOOR)


@dataclass(frozen=True)
class BoundaryCurve:
    name: str
    x: np.ndarray
    beta: np.ndarray


@dataclass(frozen=True)
class RegionMap:
    """Labeled cells plus the analytic overlay curves.

    ``cells[i, j]`` is the label at x_values[i], beta_values[j].
    """

    spec: GridSpec
    x_values: np.ndarray
    beta_values: np.ndarray
    cells: np.ndarray
    boundary_curves: tuple[BoundaryCurve, ...]


def upper_boundary(c: float, K: float, h: float) -> float:
    """Predation product where the coexistence sink loses stability.

    From h < 1/theta with theta = beta*K - c: beta = (c + 1/h)/K.
    """
    return (c + 1.0 / h) / K


def lower_boundary(c: float, K: float) -> float:
    """Feasibility floor beta = c/K; below it the coexistence point leaves
    the positive quadrant."""
    return c / K


def boundary_curve(spec: GridSpec) -> list[BoundaryCurve]:
    """Sample the named analytic curves along the grid's x-axis.

    Two upper-curve variants are emitted: the derived form (c + 1/h)/K used
    by the bracketing checks, and the additive form c/K + 1/h carried for
    comparison; the derived one matches the h=1 boundary case at
    beta=4.8e-4 while the additive one leaves the plotted beta range
    entirely.  The lower curve is the feasibility floor c/K.
    """
    xs = spec.x_values()
    if spec.x_axis is Axis.H:
        c = spec.c
        derived = np.array([upper_boundary(c, spec.K, x) for x in xs])
        additive = np.array([c / spec.K + 1.0 / x for x in xs])
        lower = np.full(len(xs), lower_boundary(c, spec.K))
    else:
        h = spec.h
        derived = np.array([upper_boundary(x, spec.K, h) for x in xs])
        additive = np.array([x / spec.K + 1.0 / h for x in xs])
        lower = np.array([lower_boundary(x, spec.K) for x in xs])
    return [
        BoundaryCurve("beta = (c + 1/h)/K", xs, derived),
        BoundaryCurve("beta = c/K + 1/h", xs, additive),
        BoundaryCurve("beta = c/K", xs, lower),
    ]


def _label_cell(
    kind: ModelKind, params: ModelParams, h: float, tol: float
) -> RegionLabel:
    q = derived_quantities(params)
    if q.theta <= 0.0:
        return RegionLabel.E3_INFEASIBLE
    point = equilibria(params)[2].point
    eigs = eigenvalues_2x2(jacobian_discrete(kind, params, h, point))
    cls = classify_discrete(eigs, tol)
    if cls.variant is Stability.NON_HYPERBOLIC:
        return RegionLabel.BOUNDARY
    if cls.variant is Stability.SINK:
        return RegionLabel.FIXED_POINT_CONVERGENT
    if cls.oscillatory:
        return RegionLabel.OSCILLATORY_DIVERGENT
    return RegionLabel.OTHER


def sweep(spec: GridSpec, tol: float = BOUNDARY_TOL) -> RegionMap:
    """Label every grid cell by the eigenvalue oracle at the coexistence point.

    Cells are independent, so evaluation order cannot affect the result.
    """
    xs = spec.x_values()
    betas = spec.beta_values()
    cells = np.empty((len(xs), len(betas)), dtype=object)
    for i, x in enumerate(xs):
        if spec.x_axis is Axis.H:
            h, c = float(x), spec.c
        else:
            h, c = spec.h, float(x)
        for j, beta in enumerate(betas):
            params = ModelParams(spec.r, spec.K, float(beta) / spec.gamma, spec.gamma, c)
            cells[i, j] = _label_cell(spec.kind, params, h, tol)
    return RegionMap(
        spec=spec,
        x_values=xs,
        beta_values=betas,
        cells=cells,
        boundary_curves=tuple(boundary_curve(spec)),
    )
