"""End-to-end Thompson-sampling acquisition, sequential and batch.

Gradient-guided policies draw a gradient at the incumbent, restrict the
search region to the induced sign cone (optionally intersected with a trust
region), fill it with candidates, and draw candidate values conditioned on
the realized gradient. Plain policies fill the domain or trust region and
use the ordinary reparameterized posterior draw. Batch acquisition repeats
the whole procedure independently per batch member.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import candidates as cand
from . import gp
from .candidates import CandidateSet, MaskVariant, SearchRegion
from .gp import GpModel, GradientSample

PLAIN_POLICIES = ("sobol", "uniform", "raasp")
GRAD_POLICIES = ("grad-sobol", "grad-raasp", "grad-line", "grad-line-masked")


@dataclass(frozen=True)
class AcquisitionConfig:
    M: int = 10_000
    policy: str = "grad-raasp"
    mask_variant: MaskVariant = field(default_factory=MaskVariant)
    use_turbo: bool = False
    q: int = 1
    incumbent_rule: str = "best-observed"

    def __post_init__(self):
        if self.M < 1 or self.q < 1:
            raise ValueError("M and q must be >= 1")
        if self.policy not in PLAIN_POLICIES + GRAD_POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}")


@dataclass
class AcquisitionResult:
    x_next: np.ndarray                  # (q, d)
    ts_max: np.ndarray                  # (q,), standardized scale
    region_log_volumes: np.ndarray      # (q,)
    gradient_samples: list[GradientSample]


def _active_region(d: int, trust_region: Optional[SearchRegion]) -> SearchRegion:
    return trust_region if trust_region is not None else cand.unit_cube(d)


def _member_candidates(
    model: GpModel, cfg: AcquisitionConfig,
    trust_region: Optional[SearchRegion], seed,
) -> tuple[CandidateSet, Optional[GradientSample]]:
    """Build one batch member's candidate set (and gradient draw, if any)."""
    d = model.d
    base = _active_region(d, trust_region)
    ss = np.random.SeedSequence(seed) if not isinstance(seed, np.random.SeedSequence) else seed
    s_grad, s_cand = ss.spawn(2)

    if cfg.policy in PLAIN_POLICIES:
        if cfg.policy == "sobol":
            pts = cand.region_sobol(base, cfg.M, s_cand)
            return CandidateSet(pts, base, "sobol"), None
        if cfg.policy == "uniform":
            pts = cand.region_uniform(base, cfg.M, s_cand)
            return CandidateSet(pts, base, "uniform"), None
        x0, _ = gp.incumbent(model, cfg.incumbent_rule)
        return cand.raasp(x0, cfg.M, s_cand, region=base), None

    x0, _ = gp.incumbent(model, cfg.incumbent_rule)
    gs = gp.sample_gradient(model, x0, np.random.default_rng(s_grad))
    cone = cand.cone_region(x0, gs.g, cand.unit_cube(d))
    region = cone
    if trust_region is not None:
        region = cand.intersect(cand.intersect(cone, trust_region), cand.unit_cube(d))
        if region.empty:
            warnings.warn("cone/trust-region intersection empty; "
                          "falling back to the trust region")
            region = trust_region

    if cfg.policy == "grad-sobol":
        pts = cand.region_sobol(region, cfg.M, s_cand)
        return CandidateSet(pts, region, "grad-sobol"), gs
    if cfg.policy == "grad-raasp":
        return cand.cone_raasp(x0, gs.g, region, cfg.M, cfg.mask_variant, s_cand), gs

    # line policies
    rng = np.random.default_rng(s_cand)
    mask = None
    if cfg.policy == "grad-line-masked":
        probs = cand.adaptive_mask_probs(gs.g, cfg.mask_variant)
        mask = (rng.random(d) < probs).astype(float)
        if not mask.any():
            mask[int(np.argmax(probs))] = 1.0
    line = cand.line_region(x0, gs.g, base, mask=mask)
    cs = cand.line_candidates(line, base, cfg.M, rng)
    return cs, gs


def acquire(
    model: GpModel, cfg: AcquisitionConfig,
    trust_region: Optional[SearchRegion] = None, seed=0,
) -> AcquisitionResult:
    """Select cfg.q points by maximizing independent posterior draws.

    Each batch member gets its own seed stream; members are independent and
    pending points are not fantasized into the model.
    """
    if cfg.use_turbo and trust_region is None:
        raise ValueError("use_turbo requires a trust region")
    if not cfg.use_turbo:
        trust_region = None
    ss = np.random.SeedSequence(seed) if not isinstance(seed, np.random.SeedSequence) else seed
    member_seeds = ss.spawn(cfg.q)

    xs, ts, vols, gss = [], [], [], []
    for s in member_seeds:
        s_build, s_draw = s.spawn(2)
        cs, gs = _member_candidates(model, cfg, trust_region, s_build)
        rng = np.random.default_rng(s_draw)
        if gs is None:
            vals = gp.sample_values(model, cs.points, rng)
        else:
            vals = gp.sample_candidates_conditioned(model, gs, cs.points, rng)
            gss.append(gs)
        i = int(np.argmax(vals))
        xs.append(cs.points[i])
        ts.append(float(vals[i]))
        vols.append(cand.log_volume(cs.region))
    return AcquisitionResult(
        x_next=np.asarray(xs), ts_max=np.asarray(ts),
        region_log_volumes=np.asarray(vols), gradient_samples=gss,
    )
