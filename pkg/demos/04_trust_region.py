"""Trust-region dynamics: expansion, shrinkage, restarts.

Walks the trust-region state machine through a scripted streak of outcomes
and prints the evolving side length.
"""

from gradts import turbo

s = turbo.TrustRegionState.init(q=1, d=8)
print(f"d=8, q=1: failure tolerance = {s.failure_tol}, "
      f"success tolerance = {turbo.SUCCESS_TOL}")
print(f"start length {s.length}")

script = ["win"] * 6 + ["loss"] * (s.failure_tol * 3) + ["win"] * 3
for step, outcome in enumerate(script):
    before = s.length
    s = turbo.update(s, outcome == "win")
    if s.length != before or s.needs_restart:
        tag = "RESTART" if s.needs_restart else ""
        print(f"step {step:3d} ({outcome:4s}): length {before:.4f} -> "
              f"{s.length:.4f} {tag}")

print(f"\nrestarts so far: {s.restarts}")
print("a restart tells the optimization loop to re-seed its initial design;")
print("the evaluations it spends count against the run budget.")
