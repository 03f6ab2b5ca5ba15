"""k-connectivity of key-predistribution sensor networks over unreliable channels.

The model: n nodes fall into r classes (distribution mu); a class-i node
holds K[i] keys drawn uniformly without replacement from a pool of P
keys, and each wireless channel is independently on with probability
alpha.  Nodes are linked iff they share a key AND the channel between
them is on.  The package computes the exact edge-probability formulas
and k-connectivity thresholds of that model, samples it reproducibly,
certifies k-connectivity via max-flow, and bundles the transition and
reliability experiments (see keygraph.cli).
"""

from .connectivity import (
    CutResult,
    connected_components,
    delete_nodes,
    is_k_connected,
    min_degree,
    vertex_connectivity,
)
from .experiments import (
    ExperimentSpec,
    SweepRow,
    SweepSummary,
    TrialResult,
    emit_csv,
    parse_csv,
    run_reliability_experiment,
    run_transition_sweep,
    wilson_halfwidth,
)
from .graphgen import (
    Graph,
    KeyAssignment,
    RngSeed,
    build_key_graph,
    intersect_graphs,
    read_edgelist,
    sample_er_graph,
    sample_intersection_model,
    sample_key_assignment,
    write_edgelist,
)
from .model import (
    ExampleScalingParams,
    NetworkParams,
    OneLawChecks,
    ScalingEvaluation,
    UnsatisfiableError,
    check_scaling_admissible,
    critical_k1,
    edge_prob,
    evaluate_scaling,
    example_scaling,
    lambda1_approx,
    mean_edge_prob,
    mean_link_prob,
)

__version__ = "0.1.0"
