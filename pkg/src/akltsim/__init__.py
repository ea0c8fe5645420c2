"""Random graph states from local measurements on the honeycomb valence-bond state.

Monte Carlo sampling of measurement-outcome configurations, reduction to
domain graphs, percolation analysis of the resulting random graphs, and
an exact dense-state oracle that pins down the quantum-mechanical
ingredients on small fragments.
"""

__version__ = "0.1.0"

from .lattice import Lattice, boundary_columns, build_honeycomb
from .domains import (DomainMultiGraph, DomainPartition, SimpleGraph,
                      contract_domains, domain_size_histogram, mod2_reduce)
from .sampler import (ChainParams, ChainSample, log2_weight, metropolis_sweep,
                      sample_chain, uniform_random_config)
from .percolation import (CrossingQuery, SpanningQuery, ThresholdCurve,
                          crossing_exists, estimate_threshold,
                          make_crossing_query, make_spanning_query,
                          random_delete, spanning_cluster_exists,
                          threshold_scan)
from .stats import (SampleRecord, accumulate, betti_number,
                    extrapolate_infinite, fit_log_growth, make_sample_record)
