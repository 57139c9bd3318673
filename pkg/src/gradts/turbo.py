"""Trust-region state machine (TuRBO-style) producing boxes around the incumbent.

Side length doubles after a streak of successes, halves after a streak of
failures, and a restart is signalled when it drops below the minimum. The
box sides are weighted by the fitted lengthscales, normalized by their
geometric mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .candidates import SearchRegion
from .gp import GpModel

LENGTH_INIT = 0.8
LENGTH_MIN = 0.5**7
LENGTH_MAX = 1.6
SUCCESS_TOL = 3


def failure_tolerance(q: int, d: int) -> int:
    """ceil(max(4/q, d/q)) for batch size q in d dimensions."""
    return math.ceil(max(4.0 / q, d / q))


@dataclass(frozen=True)
class TrustRegionState:
    length: float = LENGTH_INIT
    success_count: int = 0
    failure_count: int = 0
    success_tol: int = SUCCESS_TOL
    failure_tol: int = 32
    restarts: int = 0
    needs_restart: bool = False

    @classmethod
    def init(cls, d: int, q: int = 1) -> "TrustRegionState":
        return cls(failure_tol=failure_tolerance(q, d))


def update(state: TrustRegionState, improved: bool) -> TrustRegionState:
    """Advance the state machine by one batch outcome."""
    if improved:
        sc, fc = state.success_count + 1, 0
    else:
        sc, fc = 0, state.failure_count + 1
    length = state.length
    if sc >= state.success_tol:
        length = min(2.0 * length, LENGTH_MAX)
        sc = fc = 0
    elif fc >= state.failure_tol:
        length = length / 2.0
        sc = fc = 0
    if length < LENGTH_MIN:
        # signal a restart: the optimization loop re-seeds data and model
        return replace(
            state, length=LENGTH_INIT, success_count=0, failure_count=0,
            restarts=state.restarts + 1, needs_restart=True,
        )
    return replace(
        state, length=length, success_count=sc, failure_count=fc,
        needs_restart=False,
    )


def region(state: TrustRegionState, model: GpModel, x0: np.ndarray) -> SearchRegion:
    """Lengthscale-weighted box of side `state.length` centered at x0,
    clipped to the unit cube."""
    x0 = np.asarray(x0, dtype=float).ravel()
    ls = model.params.lengthscales
    weights = ls / np.exp(np.mean(np.log(ls)))
    half = 0.5 * state.length * weights
    lower = np.clip(x0 - half, 0.0, 1.0)
    upper = np.clip(x0 + half, 0.0, 1.0)
    return SearchRegion(lower, upper, provenance="trust-region")
