"""
When does transitivity vanish?
==============================

In a sparse Erdos-Renyi graph the chance that two neighbours of a node are
linked is just the edge probability, so trans(A) goes to zero. A planted
partition with blocks of fixed size keeps it bounded away from zero.
"""

from transclust import remark_constant, transitivity_limit
from transclust.experiments import run_transitivity_limit, run_transitivity_vanishing

vanish = run_transitivity_vanishing([100, 1000], trials=10, seed=0)
for row in vanish.aggregates["per_n"]:
    print(f"ER n={row['n']:>5}: mean trans {row['mean']:.4f} (edge probability {row['target']:.4f})")

limit = run_transitivity_limit(0.6, 10, 2.0, [1000, 10000], trials=5, seed=0)
print("approximate constant:", round(remark_constant(0.6, 10, 2.0), 4))
print("exact limit:         ", round(transitivity_limit(0.6, 10, 2.0), 4))
for row in limit.aggregates["per_n"]:
    print(f"SBM n={row['n']:>5}: mean trans {row['mean']:.4f} +- {row['se']:.4f}")
