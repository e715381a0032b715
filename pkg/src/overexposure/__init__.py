"""Optimal seeding of word-of-mouth cascades when reaching the wrong agents costs.

Agents accept a product of appeal ``phi`` when their threshold allows it and
pass it on to neighbors; reaching an agent who rejects it costs ``q``, an
acceptance earns ``p``. The unbudgeted optimum is a minimum cut on a
cluster/boundary flow network.
"""
from .cascade import Cluster, ExposureResult, clusters, exposed_set, payoff
from .experiment import STRATEGIES, SweepConfig, SweepRecord, emit_csv, parse_csv, run_sweep
from .flow import CutResult, FlowNetwork, build_flow_network, min_cut
from .network import (AgentParams, AgentType, EdgeListParseError, Network, Product, classify,
                      classify_agent, format_edge_list, induced_accepting_subgraph, parse_edge_list,
                      parse_params, read_edge_list, read_params, sample_params)
from .optimize import (BudgetedInstance, EnumerationLimitError, PhiResult, SeedResult, baseline_seed,
                       budgeted_exact, budgeted_greedy, clique_reduction, naive_seed, optimal_generalized,
                       optimal_phi, optimal_unbudgeted, upper_bound)

__all__ = [
    "AgentParams", "AgentType", "BudgetedInstance", "Cluster", "CutResult", "EdgeListParseError",
    "EnumerationLimitError", "ExposureResult", "FlowNetwork", "Network", "PhiResult", "Product",
    "STRATEGIES", "SeedResult", "SweepConfig", "SweepRecord", "baseline_seed", "budgeted_exact",
    "budgeted_greedy", "build_flow_network", "classify", "classify_agent", "clique_reduction",
    "clusters", "emit_csv", "exposed_set", "format_edge_list", "induced_accepting_subgraph",
    "min_cut", "naive_seed", "optimal_generalized", "optimal_phi", "optimal_unbudgeted",
    "parse_csv", "parse_edge_list", "parse_params", "payoff", "read_edge_list", "read_params",
    "run_sweep", "sample_params", "upper_bound",
]
