"""castree: reconstruct minimal temporally consistent cascade trees from a
graph and timestamped infection reports."""

from .graph import (
    Graph,
    ParseError,
    ReportSet,
    excluding_shortest_path,
    extended_excluding_shortest_path,
    load_edge_list,
    parse_edge_list,
    parse_report_file,
)
from .metrics import MetricRecord, evaluate, node_precision_recall, order_accuracy, tree_size
from .reconstruct import (
    InfeasibleInstanceError,
    ReconstructedTree,
    closure,
    delayed_bfs,
    exact_ordered_steiner,
    exact_unordered_steiner,
    feasibility_violations,
    greedy,
    is_feasible,
    pick_root,
    steiner_baseline,
)
from .simulate import (
    Cascade,
    RngSeed,
    RunFailed,
    calibrate_ic,
    sample_reports,
    simulate_ct,
    simulate_ic,
    simulate_si,
    simulate_sp,
)
from .experiment import (
    ExperimentConfig,
    generate_ba_graph,
    run_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "Graph", "ReportSet", "ParseError", "Cascade", "RngSeed", "RunFailed",
    "ReconstructedTree", "InfeasibleInstanceError", "MetricRecord",
    "ExperimentConfig",
    "parse_edge_list", "load_edge_list", "parse_report_file",
    "excluding_shortest_path", "extended_excluding_shortest_path",
    "pick_root", "closure", "greedy", "delayed_bfs", "steiner_baseline",
    "exact_ordered_steiner", "exact_unordered_steiner",
    "feasibility_violations", "is_feasible",
    "simulate_si", "simulate_ic", "simulate_ct", "simulate_sp",
    "calibrate_ic", "sample_reports",
    "tree_size", "node_precision_recall", "order_accuracy", "evaluate",
    "generate_ba_graph", "run_experiment",
]
