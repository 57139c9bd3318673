"""A complete optimization run, and what the gradient guidance buys.

Optimizes 20-D Ackley with plain Sobol candidates and with gradient-guided
sparse candidates, and prints both convergence traces.
"""

import numpy as np

from gradts import harness
from gradts.acquire import AcquisitionConfig

for method in ("sobol", "grad-raasp"):
    cfg = harness.RunConfig(
        problem="ackley", d=20, iterations=60, n_init=20, seed=0,
        acquisition=AcquisitionConfig(M=1000, policy=method))
    trace = harness.run(cfg)
    print(f"\n{method}: best value every 10 evaluations")
    for t in range(9, trace.n, 10):
        bar = "#" * int(max(0.0, 22 + trace.best[t]))
        print(f"  t={t + 1:3d}  best={trace.best[t]:8.3f}  {bar}")
    print(f"  final best: {trace.best[-1]:.4f} (optimum is 0)")
