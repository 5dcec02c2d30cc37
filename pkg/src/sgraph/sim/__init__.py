"""Monte Carlo and exact oracles for S-graphs."""

from .exact import edge_count_monotonicity_exact, enumerate_exact, exact_table
from .experiment import mc_experiment, predictions, replicate_rng
from .graph import (DegreeCounts, MultiGraph, components, configuration_multigraph,
                    degree_counts_from_sequence, from_edges, k_core)
from .partition import multigraph_partition_series
from .sampling import (SamplingError, SimplicityRejectionError, sample_degree_sequence,
                       sample_multigraph, sample_simple_graph)
