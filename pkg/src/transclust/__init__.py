"""Triangle-support local and global graph clustering.

Sparse undirected graphs, triangle and regularized-Laplacian edge
similarities, seed-expansion and single-linkage clustering, blockmodel
samplers and a Monte Carlo harness for the associated recovery and
transitivity results.
"""

from .clustering import ClusterSet, Dendrogram, build_dendrogram, cut_dendrogram, global_trans, local_trans
from .errors import DomainError, EdgeListParseError, EstimationError
from .graph import (
    UndirectedGraph,
    common_neighbor_count,
    degree,
    enumerate_triangles,
    induced_subgraph,
    load_edge_list,
    write_edge_list,
)
from .metrics import (
    GraphStats,
    avg_clustering,
    count_triangles,
    graph_stats,
    local_clustering,
    transitivity_ratio,
    two_star_count,
)
from .models import (
    BackgroundSpec,
    DegreeCorrectedLocalSBM,
    FourParamSBM,
    LocalSBM,
    SampleResult,
    estimate_p_delta,
    expected_degree,
    remark_constant,
    sample_dc_local_sbm,
    sample_erdos_renyi,
    sample_four_param,
    sample_local_sbm,
    transitivity_limit,
)
from .similarity import (
    LaplacianConfig,
    WeightedSimilarity,
    build_similarity,
    laplacian_support,
    random_walk_equivalence_check,
    triangle_support,
)

__version__ = "0.1.0"
