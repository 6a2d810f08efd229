"""
Triangle support on a small graph
=================================

Two 4-cliques joined by a single bridge edge. Edges inside a clique sit in
two triangles each, the bridge sits in none, so any positive cut separates
the cliques.
"""

import itertools

from transclust import UndirectedGraph, graph_stats, laplacian_support, triangle_support

# Build the graph from endpoint arrays; duplicates and loops would be dropped.
k4 = list(itertools.combinations(range(4), 2))
pairs = k4 + [(a + 4, b + 4) for a, b in k4] + [(3, 4)]
g = UndirectedGraph.from_edges(8, [a for a, _ in pairs], [b for _, b in pairs])
print(g)

# Whole-graph statistics: 8 triangles, transitivity 6*8 / sum(d^2 - d).
print(graph_stats(g).to_dict())

# Per-edge triangle counts, indexed by edge id (lexicographic (u, v) order).
sim = triangle_support(g)
for u, v, w in zip(*sim.edges()):
    print(f"T[{u},{v}] = {w}")

# The regularized Laplacian version down-weights edges between high degree
# nodes. tau defaults to the mean degree when going through build_similarity.
lap = laplacian_support(g, 2.0)
print("bridge weight:", lap.weight(3, 4), " clique edge weight:", lap.weight(0, 1))
