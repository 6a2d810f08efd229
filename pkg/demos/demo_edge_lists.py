"""
Reading SNAP edge lists
=======================

Edge lists are whitespace separated pairs with ``#`` comment lines. Node ids
can be arbitrary non-negative integers; they are compacted to ``0..n-1`` and
the originals are kept as labels.
"""

import io

from transclust import global_trans, load_edge_list, triangle_support, write_edge_list

text = """# Directed graph (each unordered pair of nodes is saved once)
# FromNodeId	ToNodeId
100	200
200	300
300	100
300	4000
4000	100
"""
g = load_edge_list(io.StringIO(text))
print(g, "labels:", g.labels.tolist())

# Clusters are reported on dense ids; map back through the labels.
clusters = global_trans(triangle_support(g), cut=2)
for block in clusters.blocks():
    print("cluster:", [int(g.labels[i]) for i in block])

out = io.StringIO()
write_edge_list(g, out)
print(out.getvalue(), end="")
