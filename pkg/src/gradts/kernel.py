"""Squared-exponential ARD kernel with analytic derivative cross-covariances.

All inputs live in the unit cube; lengthscales are per-dimension. The
outputscale is fixed at 1 by default so the kernel value at zero lag is 1.
Besides plain Gram matrices, this module builds the covariance blocks of the
joint Gaussian over noisy observations, candidate function values and the
gradient vector at a single anchor point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

NOISE_FLOOR = 1e-6


@dataclass(frozen=True)
class KernelParams:
    """ARD squared-exponential hyperparameters."""

    lengthscales: np.ndarray
    outputscale: float = 1.0
    noise_variance: float = NOISE_FLOOR

    def __post_init__(self):
        ls = np.atleast_1d(np.asarray(self.lengthscales, dtype=float))
        object.__setattr__(self, "lengthscales", ls)
        if np.any(ls <= 0):
            raise ValueError("lengthscales must be positive")
        if self.outputscale <= 0:
            raise ValueError("outputscale must be positive")
        if self.noise_variance < NOISE_FLOOR:
            object.__setattr__(self, "noise_variance", NOISE_FLOOR)

    @property
    def d(self) -> int:
        return self.lengthscales.shape[0]


def _check_dim(x: np.ndarray, p: KernelParams) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[-1] != p.d:
        raise ValueError(f"point dimension {x.shape[-1]} != kernel dimension {p.d}")
    return x


def gram(X: np.ndarray, X2: np.ndarray, p: KernelParams) -> np.ndarray:
    """Gram matrix k(X, X2), shape (n, m)."""
    X = _check_dim(X, p)
    X2 = _check_dim(X2, p)
    if X.shape[0] == 0 or X2.shape[0] == 0:
        return np.zeros((X.shape[0], X2.shape[0]))
    d2 = cdist(X / p.lengthscales, X2 / p.lengthscales, "sqeuclidean")
    # in place: the matrix can be large (M x M candidates)
    d2 *= -0.5
    np.exp(d2, out=d2)
    if p.outputscale != 1.0:
        d2 *= p.outputscale
    return d2


def eval(x: np.ndarray, x2: np.ndarray, p: KernelParams) -> float:  # noqa: A001
    """Scalar kernel value k(x, x2)."""
    return float(gram(x, x2, p)[0, 0])


def grad_first_arg(x: np.ndarray, x2: np.ndarray, p: KernelParams) -> np.ndarray:
    """Gradient of k(x, x2) with respect to x, shape (d,)."""
    x = _check_dim(x, p)[0]
    x2 = _check_dim(x2, p)[0]
    k = eval(x, x2, p)
    return -(x - x2) / p.lengthscales**2 * k


def hess_mixed(x: np.ndarray, x2: np.ndarray, p: KernelParams) -> np.ndarray:
    """Mixed second derivative d^2 k / (dx dx2^T), shape (d, d).

    At zero lag this is diag(1 / lengthscales^2), the prior gradient
    covariance of a unit-outputscale SE kernel.
    """
    x = _check_dim(x, p)[0]
    x2 = _check_dim(x2, p)[0]
    inv_l2 = 1.0 / p.lengthscales**2
    r = (x - x2) * inv_l2
    k = eval(x, x2, p)
    return k * (np.diag(inv_l2) - np.outer(r, r))


def cross_grad(X: np.ndarray, x0: np.ndarray, p: KernelParams) -> np.ndarray:
    """Cross-covariance Cov(f(X_i), grad f(x0)) = grad_{x0} k(X_i, x0), shape (n, d)."""
    X = _check_dim(X, p)
    x0 = _check_dim(x0, p)[0]
    kv = gram(X, x0[None, :], p)[:, 0]
    return (X - x0) / p.lengthscales**2 * kv[:, None]


@dataclass
class JointGramBlocks:
    """Distinct blocks of the joint covariance over (y, f_candidates, grad f(x0)).

    ``Kyy`` already includes the observation-noise diagonal.
    """

    Kyy: np.ndarray
    Kyf: np.ndarray
    Kyg: np.ndarray
    Kff: np.ndarray
    Kfg: np.ndarray
    Kgg: np.ndarray

    def assemble(self) -> np.ndarray:
        """Full symmetric (n + M + d) x (n + M + d) matrix."""
        top = np.hstack([self.Kyy, self.Kyf, self.Kyg])
        mid = np.hstack([self.Kyf.T, self.Kff, self.Kfg])
        bot = np.hstack([self.Kyg.T, self.Kfg.T, self.Kgg])
        return np.vstack([top, mid, bot])


def gram_blocks(
    X: np.ndarray, Xc: np.ndarray, x0: np.ndarray, p: KernelParams
) -> JointGramBlocks:
    """All covariance blocks of the joint observation/candidate/gradient prior."""
    X = _check_dim(X, p) if np.size(X) else np.zeros((0, p.d))
    Xc = _check_dim(Xc, p) if np.size(Xc) else np.zeros((0, p.d))
    x0 = _check_dim(x0, p)[0]
    n, M = X.shape[0], Xc.shape[0]
    Kyy = gram(X, X, p) + p.noise_variance * np.eye(n)
    return JointGramBlocks(
        Kyy=Kyy,
        Kyf=gram(X, Xc, p),
        Kyg=cross_grad(X, x0, p),
        Kff=gram(Xc, Xc, p),
        Kfg=cross_grad(Xc, x0, p),
        Kgg=hess_mixed(x0, x0, p),
    )


_JITTERS = (0.0, 1e-8, 1e-6, 1e-4)


def chol_with_jitter(A: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor, escalating diagonal jitter on failure.

    Jitter escalates 1e-8 -> 1e-6 -> 1e-4; a hard error is raised after the
    final escalation fails.
    """
    A = np.asarray(A, dtype=float)
    if A.shape[0] == 0:
        return np.zeros((0, 0))
    for eps in _JITTERS:
        try:
            if eps == 0.0:
                return np.linalg.cholesky(A)
            return np.linalg.cholesky(A + eps * np.eye(A.shape[0]))
        except np.linalg.LinAlgError:
            continue
    raise np.linalg.LinAlgError(
        f"Cholesky failed after jitter escalation up to {_JITTERS[-1]:g} "
        f"(matrix size {A.shape[0]})"
    )
