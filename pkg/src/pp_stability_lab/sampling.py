"""Seeded random draws for the property checks.

The ranges match the documented sampling contract: growth rate and
mortality uniform on modest intervals, interaction coefficients
log-uniform across two decades.  The seed comes from the
PP_STABILITY_SEED environment variable when set.
"""

from __future__ import annotations

import os
from typing import Optional

import numpy as np

from .model import ModelKind, ModelParams, State

__all__ = [
    "SEED_ENV_VAR",
    "DEFAULT_SEED",
    "env_seed",
    "make_rng",
    "random_params",
    "random_state",
    "random_step",
    "random_kind",
]

SEED_ENV_VAR = "PP_STABILITY_SEED"
DEFAULT_SEED = 1729


def env_seed() -> Optional[int]:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return None
    return int(raw)


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Generator seeded by argument, environment, or the fixed default."""
    if seed is None:
        seed = env_seed()
    if seed is None:
        seed = DEFAULT_SEED
    return np.random.default_rng(seed)


def random_params(rng: np.random.Generator) -> ModelParams:
    return ModelParams(
        r=rng.uniform(0.05, 1.0),
        K=rng.uniform(100.0, 5000.0),
        alpha=10.0 ** rng.uniform(-3.0, -1.0),
        gamma=10.0 ** rng.uniform(-3.0, -1.0),
        c=rng.uniform(0.05, 1.0),
    )


def random_state(rng: np.random.Generator, params: ModelParams) -> State:
    return State(rng.uniform(0.0, 2.0 * params.K), rng.uniform(0.0, 2.0 * params.K))


def random_step(rng: np.random.Generator) -> float:
    return rng.uniform(0.01, 3.0)


def random_kind(rng: np.random.Generator) -> ModelKind:
    return ModelKind.RICKER if rng.integers(0, 2) == 0 else ModelKind.LOTKA_VOLTERRA
