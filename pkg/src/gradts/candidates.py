"""Candidate-point policies and search-region geometry.

Regions are axis-aligned boxes inside the unit cube: the full domain, a trust
region, the gradient-sign cone rooted at the incumbent, intersections of
those, or a 1-D line segment along the (optionally masked) gradient.
Policies fill a region with Sobol points, uniform points, or sparse
axis-aligned perturbations of the incumbent.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import qmc


@dataclass
class SearchRegion:
    """Axis-aligned box, optionally carrying line-segment geometry."""

    lower: np.ndarray
    upper: np.ndarray
    provenance: str = "domain"      # domain | trust-region | cone | intersection | line
    empty: bool = False
    anchor: Optional[np.ndarray] = None      # line regions only
    direction: Optional[np.ndarray] = None
    v_max: float = 0.0

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float).ravel()
        self.upper = np.asarray(self.upper, dtype=float).ravel()
        if self.lower.shape != self.upper.shape:
            raise ValueError("lower/upper shape mismatch")
        if not self.empty and np.any(self.lower > self.upper + 1e-12):
            raise ValueError("lower must not exceed upper")

    @property
    def d(self) -> int:
        return self.lower.shape[0]

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def degenerate_count(self) -> int:
        return int(np.sum(self.widths <= 0.0))

    def contains(self, pts: np.ndarray, atol: float = 1e-12) -> np.ndarray:
        pts = np.atleast_2d(pts)
        return np.all(
            (pts >= self.lower - atol) & (pts <= self.upper + atol), axis=1
        )


def unit_cube(d: int) -> SearchRegion:
    return SearchRegion(np.zeros(d), np.ones(d), provenance="domain")


@dataclass(frozen=True)
class MaskVariant:
    """How gradient magnitudes map to per-dimension perturbation probabilities."""

    kind: str = "l2"            # l1 | l2 | l3 | topk | softmax
    c: float = 20.0

    def __post_init__(self):
        if self.kind not in ("l1", "l2", "l3", "topk", "softmax"):
            raise ValueError(f"unknown mask variant {self.kind!r}")
        if self.c <= 0:
            raise ValueError("c must be positive")


@dataclass
class CandidateSet:
    points: np.ndarray
    region: SearchRegion
    policy: str


def sobol(M: int, d: int, seed) -> np.ndarray:
    """First M points of a scrambled Sobol sequence in [0,1]^d.

    Above the direction-number table limit the generator falls back to
    uniform sampling with a warning.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    rng = np.random.default_rng(seed)
    if d > qmc.Sobol.MAXDIM:
        warnings.warn(
            f"d={d} exceeds the Sobol direction-number table "
            f"({qmc.Sobol.MAXDIM}); falling back to uniform sampling"
        )
        return rng.random((M, d))
    eng = qmc.Sobol(d, scramble=True, seed=rng)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # power-of-two balance note
        return eng.random(M)


def region_sobol(region: SearchRegion, M: int, seed) -> np.ndarray:
    """Sobol points mapped affinely into a box region."""
    pts = sobol(M, region.d, seed)
    return region.lower + pts * region.widths


def region_uniform(region: SearchRegion, M: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return region.lower + rng.random((M, region.d)) * region.widths


def cone_region(x0: np.ndarray, g: np.ndarray, domain: SearchRegion) -> SearchRegion:
    """Axis-aligned cone rooted at x0, opening in the sign direction of g.

    Dimensions with g_j == 0 collapse to the point x0_j.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    g = np.asarray(g, dtype=float).ravel()
    if not np.all(np.isfinite(g)):
        raise ValueError("gradient must be finite")
    lower = np.where(g > 0, x0, np.where(g < 0, domain.lower, x0))
    upper = np.where(g > 0, domain.upper, np.where(g < 0, x0, x0))
    lower = np.clip(lower, domain.lower, domain.upper)
    upper = np.clip(upper, domain.lower, domain.upper)
    return SearchRegion(lower, upper, provenance="cone")


def intersect(a: SearchRegion, b: SearchRegion) -> SearchRegion:
    """Elementwise box intersection; disjoint boxes yield an empty-flagged region."""
    lower = np.maximum(a.lower, b.lower)
    upper = np.minimum(a.upper, b.upper)
    if np.any(lower > upper + 1e-12):
        return SearchRegion(lower, np.maximum(lower, upper),
                            provenance="intersection", empty=True)
    return SearchRegion(lower, upper, provenance="intersection")


def log_volume(r: SearchRegion) -> float:
    """Natural-log volume over non-degenerate dims; -inf if empty or pointlike."""
    if r.empty:
        return -np.inf
    w = r.widths
    active = w > 0.0
    if not np.any(active):
        return -np.inf
    return float(np.log(w[active]).sum())


def adaptive_mask_probs(g: np.ndarray, variant: MaskVariant) -> np.ndarray:
    """Per-dimension perturbation probabilities weighted by gradient magnitude."""
    g = np.asarray(g, dtype=float).ravel()
    d = g.shape[0]
    a = np.abs(g)
    if variant.kind == "topk":
        k = min(int(variant.c), d)
        order = np.argsort(-a, kind="stable")
        probs = np.zeros(d)
        probs[order[:k]] = 1.0
        return probs
    if np.all(a == 0.0):
        raise ValueError("degenerate (all-zero) gradient for mask probabilities")
    if variant.kind in ("l1", "l2", "l3"):
        p = {"l1": 1, "l2": 2, "l3": 3}[variant.kind]
        gamma = a**p / np.sum(a**p)
    else:  # softmax
        e = np.exp(a - a.max())
        gamma = e / e.sum()
    return np.minimum(variant.c * gamma, 1.0)


def _apply_masks(
    x0: np.ndarray, base: np.ndarray, probs: np.ndarray,
    rng: np.random.Generator, force: str,
) -> np.ndarray:
    """Candidates x0 + (base - x0) * mask; all-zero masks get one dim forced on."""
    M, d = base.shape
    masks = rng.random((M, d)) < probs
    dead = ~masks.any(axis=1)
    if np.any(dead):
        if force == "max-prob":
            masks[dead, int(np.argmax(probs))] = True
        else:
            masks[dead, rng.integers(0, d, size=int(dead.sum()))] = True
    return np.where(masks, base, x0)


def raasp(x0: np.ndarray, M: int, seed,
          region: Optional[SearchRegion] = None) -> CandidateSet:
    """Sparse axis-aligned perturbations of x0, each touching ~min(20, d) dims."""
    x0 = np.asarray(x0, dtype=float).ravel()
    d = x0.shape[0]
    if region is None:
        region = unit_cube(d)
    rng = np.random.default_rng(seed)
    base = region_sobol(region, M, rng)
    probs = np.full(d, min(20.0 / d, 1.0))
    pts = _apply_masks(x0, base, probs, rng, force="uniform")
    return CandidateSet(points=pts, region=region, policy="raasp")


def cone_raasp(
    x0: np.ndarray, g: np.ndarray, region: SearchRegion, M: int,
    variant: MaskVariant, seed,
) -> CandidateSet:
    """RAASP inside a gradient cone, with gradient-weighted mask probabilities."""
    x0 = np.asarray(x0, dtype=float).ravel()
    rng = np.random.default_rng(seed)
    if np.all(region.widths <= 0.0):
        warnings.warn("degenerate search region; returning copies of the incumbent")
        pts = np.tile(x0, (M, 1))
        return CandidateSet(points=pts, region=region, policy=f"grad-raasp-{variant.kind}")
    base = region_sobol(region, M, rng)
    probs = adaptive_mask_probs(g, variant)
    pts = _apply_masks(x0, base, probs, rng, force="max-prob")
    return CandidateSet(points=pts, region=region, policy=f"grad-raasp-{variant.kind}")


def line_region(
    x0: np.ndarray, g: np.ndarray, domain: SearchRegion,
    mask: Optional[np.ndarray] = None,
) -> SearchRegion:
    """1-D segment {x0 + v * (g * mask)}, v in [0, v_max], clipped to the domain.

    v_max scales the direction so the unclipped endpoint reaches half the
    domain diagonal (for a cube of side s, a distance of s * sqrt(d) / 2).
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    g = np.asarray(g, dtype=float).ravel()
    direction = g if mask is None else g * np.asarray(mask, dtype=float)
    norm = float(np.linalg.norm(direction))
    if norm == 0.0:
        raise ValueError("zero effective direction for line region")
    v_max = 0.5 * float(np.linalg.norm(domain.widths)) / norm
    end = np.clip(x0 + v_max * direction, domain.lower, domain.upper)
    lower = np.minimum(x0, end)
    upper = np.maximum(x0, end)
    return SearchRegion(lower, upper, provenance="line",
                        anchor=x0, direction=direction, v_max=v_max)


def line_candidates(region: SearchRegion, domain: SearchRegion, M: int,
                    seed) -> CandidateSet:
    """Uniform samples along a line region, clipped to the domain box."""
    if region.provenance != "line":
        raise ValueError("line_candidates requires a line region")
    rng = np.random.default_rng(seed)
    v = rng.uniform(0.0, region.v_max, size=M)
    pts = region.anchor + v[:, None] * region.direction
    pts = np.clip(pts, domain.lower, domain.upper)
    return CandidateSet(points=pts, region=region, policy="line")
