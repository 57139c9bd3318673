"""Synthetic black-box objectives behind a uniform maximization interface.

Inputs are accepted in the unit cube and mapped affinely onto each
function's native bounds. Native minimization functions are negated, so a
run's best value is always nondecreasing and known optima are maxima.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

_H6_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_H6_A = np.array([
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
])
_H6_P = 1e-4 * np.array([
    [1312, 1696, 5569, 124, 8283, 5886],
    [2329, 4135, 8307, 3736, 1004, 9991],
    [2348, 1451, 3522, 2883, 3047, 6650],
    [4047, 8828, 8732, 5743, 1091, 381],
])


def _ackley(X: np.ndarray) -> np.ndarray:
    d = X.shape[1]
    s1 = np.sqrt(np.mean(X**2, axis=1))
    s2 = np.mean(np.cos(2.0 * np.pi * X), axis=1)
    return -(-20.0 * np.exp(-0.2 * s1) - np.exp(s2) + 20.0 + np.e)


def _levy(X: np.ndarray) -> np.ndarray:
    w = 1.0 + (X - 1.0) / 4.0
    term1 = np.sin(np.pi * w[:, 0]) ** 2
    term3 = (w[:, -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[:, -1]) ** 2)
    wi = w[:, :-1]
    mid = np.sum((wi - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * wi + 1.0) ** 2), axis=1)
    return -(term1 + mid + term3)


def _rosenbrock(X: np.ndarray) -> np.ndarray:
    return -np.sum(
        100.0 * (X[:, 1:] - X[:, :-1] ** 2) ** 2 + (X[:, :-1] - 1.0) ** 2, axis=1
    )


def _rastrigin(X: np.ndarray) -> np.ndarray:
    return -np.sum(X**2 - 10.0 * np.cos(2.0 * np.pi * X) + 10.0, axis=1)


def _hartmann6(X: np.ndarray) -> np.ndarray:
    inner = np.sum(_H6_A * (X[:, None, :] - _H6_P) ** 2, axis=2)
    return np.sum(_H6_ALPHA * np.exp(-inner), axis=1)


def _quadratic(X: np.ndarray) -> np.ndarray:
    return -np.sum((X - 0.5) ** 2, axis=1)


def _bimodal(X: np.ndarray) -> np.ndarray:
    # broad local bump plus a narrow, higher global bump in the opposite corner
    broad = 0.8 * np.exp(-np.sum((X - 0.75) ** 2, axis=1) / (2 * 0.15**2))
    sharp = 1.0 * np.exp(-np.sum((X - 0.2) ** 2, axis=1) / (2 * 0.05**2))
    return broad + sharp


@dataclass
class Problem:
    name: str
    d: int
    lower: np.ndarray       # native bounds
    upper: np.ndarray
    fn: Callable[[np.ndarray], np.ndarray]
    optimum_value: Optional[float] = None
    noise_sd: float = 0.0

    def to_native(self, X01: np.ndarray) -> np.ndarray:
        return self.lower + np.atleast_2d(X01) * (self.upper - self.lower)

    def to_unit(self, Xn: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(Xn) - self.lower) / (self.upper - self.lower)

    def evaluate_true(self, X01: np.ndarray) -> np.ndarray:
        """Noiseless maximization values for unit-cube inputs, vectorized."""
        X01 = np.atleast_2d(np.asarray(X01, dtype=float))
        if X01.shape[1] != self.d:
            raise ValueError("dimension mismatch")
        if np.any(X01 < -1e-9) or np.any(X01 > 1.0 + 1e-9):
            raise ValueError("input outside the unit cube")
        return self.fn(self.to_native(X01))


_FAMILIES = {
    "ackley": (_ackley, -32.768, 32.768, 0.0, None),
    "levy": (_levy, -10.0, 10.0, 0.0, None),
    "rosenbrock": (_rosenbrock, -5.0, 10.0, 0.0, None),
    "rastrigin": (_rastrigin, -5.12, 5.12, 0.0, None),
    "hartmann6": (_hartmann6, 0.0, 1.0, 3.32237, 6),
    "quadratic": (_quadratic, 0.0, 1.0, 0.0, None),
    "bimodal": (_bimodal, 0.0, 1.0, None, 2),
}


def make(name: str, d: int, noise_sd: float = 0.0) -> Problem:
    """Build a named problem; Hartmann6 requires d=6 and the bimodal test
    function d=2."""
    key = name.lower()
    if key not in _FAMILIES:
        raise ValueError(f"unknown problem {name!r}")
    fn, lo, hi, opt, fixed_d = _FAMILIES[key]
    if fixed_d is not None and d != fixed_d:
        raise ValueError(f"{name} requires d={fixed_d}")
    if d < 1:
        raise ValueError("d must be >= 1")
    if noise_sd < 0:
        raise ValueError("noise_sd must be nonnegative")
    return Problem(
        name=key, d=d,
        lower=np.full(d, lo), upper=np.full(d, hi),
        fn=fn, optimum_value=opt, noise_sd=noise_sd,
    )


def evaluate(p: Problem, x: np.ndarray, seed=None) -> float:
    """One noisy evaluation at a unit-cube point."""
    val = float(p.evaluate_true(np.atleast_2d(x))[0])
    if p.noise_sd > 0.0:
        rng = np.random.default_rng(seed)
        val += p.noise_sd * rng.standard_normal()
    return val
