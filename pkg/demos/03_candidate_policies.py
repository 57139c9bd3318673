"""Candidate placement policies: boxes, cones, masks, and lines.

Builds each candidate-generation policy around one anchor/gradient pair and
prints where the candidates land and how much volume each search region keeps.
"""

import numpy as np

from gradts import candidates as cand
from gradts.candidates import MaskVariant

d = 10
rng = np.random.default_rng(2)
x0 = np.full(d, 0.5)
g = rng.standard_normal(d)
domain = cand.unit_cube(d)

print(f"anchor x0 = domain center, gradient signs: {np.sign(g).astype(int)}")

cone = cand.cone_region(x0, g, domain)
print(f"\ncone region log-volume : {cand.log_volume(cone):.3f} "
      f"(= {d} x log 1/2 = {-d * np.log(2):.3f})")

for label, cs in [
    ("sobol in cone", cand.CandidateSet(
        cand.region_sobol(cone, 512, seed=0), cone, "grad-sobol")),
    ("masked sparse (L2)", cand.cone_raasp(
        x0, g, cone, 512, MaskVariant("l2", c=5.0), seed=0)),
    ("fixed-rate sparse", cand.raasp(x0, 512, seed=0)),
]:
    moved = np.count_nonzero(cs.points != x0, axis=1)
    print(f"{label:20s}: mean dims perturbed {moved.mean():5.2f} "
          f"(of {d}), all in cone: {bool(np.all(cone.contains(cs.points))) if 'cone' in label or 'L2' in label else '-'}")

line = cand.line_region(x0, g, domain)
pts = cand.line_candidates(line, domain, 512, seed=0).points
t = np.linalg.norm(pts - x0, axis=1) / np.linalg.norm(g)
print(f"\nline search: v_max = {line.v_max:.3f}, "
      f"sampled v in [{t.min():.3f}, {t.max():.3f}]")
