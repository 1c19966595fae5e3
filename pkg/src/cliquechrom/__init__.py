"""Clique colorings of the binomial random graph G(n, p).

Graph sampling, exact and heuristic clique coloring, constructive upper-bound
pipelines, lower-bound counting statistics, closed-form predictions and an
experiment harness.
"""

from .cliques import MaximalCliqueSet, is_maximal_clique, maximal_cliques, triangle_edge_fraction, uncovered
from .coloring import (
    CliqueColoring,
    ValidityReport,
    dominating_set_coloring,
    exact_clique_chromatic,
    greedy_dominating_set,
    greedy_proper_coloring,
    is_valid_clique_coloring,
)
from .constructive_bounds import (
    PartitionPlan,
    build_Gi,
    color_low_p,
    color_mid_p,
    compute_thresholds,
    gi_max_degree_report,
    partition_vertices,
    triangle_free_partition,
)
from .exceptions import (
    BudgetExceeded,
    CapExceeded,
    CliqueChromError,
    GraphFormatError,
    InapplicableRegime,
    NoValidK,
)
from .graph_core import Graph, Seed, generate_coupled, generate_gnp, induced_subgraph, parse_edge_list, serialize_edge_list
from .harness import SweepConfig, run_sweep, verify_lemma, probe_conjecture

__version__ = "0.1.0"
