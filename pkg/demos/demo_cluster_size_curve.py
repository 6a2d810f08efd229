"""
Cluster sizes across cut values
===============================

GlobalTrans builds one maximum spanning forest of the similarity and cuts it
at every threshold. Here the graph is a planted partition with 40 blocks of
10 nodes; as the cut rises the giant component breaks up into the blocks.
"""

import sys

from transclust import FourParamSBM, sample_four_param
from transclust.experiments import cluster_size_curve

g = sample_four_param(FourParamSBM(K=40, s=10, p=0.6, r=0.004), seed=3).graph
cuts = [0, 1, 2, 3, 4]
rows = cluster_size_curve(g, "adjacency", cuts)

# Sizes of the ten largest clusters after dropping the single largest one.
cols = list(rows[0])
sys.stdout.write(",".join(cols) + "\n")
for row in rows:
    sys.stdout.write(",".join(str(row[c]) for c in cols) + "\n")
