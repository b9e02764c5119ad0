"""Graph kernel: simple labeled graphs, copies, canonical forms and embeddings."""
from turanlab.graphs.canon import canonical_form, canonical_relabeling
from turanlab.graphs.core import (
    MAX_VERTICES,
    Copy,
    Graph,
    complete,
    complete_bipartite,
    cycle,
    disjoint_union,
    empty,
    from_edges,
    named,
    pair_index,
    path,
    petersen,
)
from turanlab.graphs.embed import (
    automorphism_count,
    chromatic_number,
    clique_number,
    contains_subgraph,
    contains_subgraph_at,
    count_copies,
    count_copies_complete,
    embeddings,
    enumerate_copies,
    homomorphism_exists,
    orbit_representatives,
)
from turanlab.graphs.io import from_edge_list, from_graph6, parse_graph, to_edge_list, to_graph6

__all__ = [
    "MAX_VERTICES", "Copy", "Graph", "automorphism_count", "canonical_form",
    "canonical_relabeling", "chromatic_number", "clique_number", "complete",
    "complete_bipartite", "contains_subgraph", "contains_subgraph_at", "count_copies", "count_copies_complete",
    "cycle", "disjoint_union", "embeddings", "empty", "enumerate_copies", "from_edge_list",
    "from_edges", "from_graph6", "homomorphism_exists", "named", "orbit_representatives", "pair_index",
    "parse_graph", "path", "petersen", "to_edge_list", "to_graph6",
]
