"""Python bindings for the subgraph frequency distribution toolkit.

Distribution-returning functions give plain dicts with the same layout as the
CLI's JSON output: {"schema", "k_set", "total", "entries", "meta"}.
"""

import json

from ._sgf import (
    ConfigError,
    DataError,
    Graph,
    Model,
    NumericError,
    SgfError,
    alias,
    canonical_code,
    connected_components,
    connected_types,
    double_edge_swap,
    generate_dataset,
    gradient_check,
    induced_subgraph,
    load_checkpoint,
    parse_edge_list,
    random_gnm,
    read_edge_list,
    train,
)
from . import _sgf

__all__ = [
    "ConfigError", "DataError", "Graph", "Model", "NumericError", "SgfError",
    "alias", "canonical_code", "connected_components", "connected_types",
    "double_edge_swap", "generate_dataset", "gradient_check", "induced_subgraph",
    "load_checkpoint", "parse_edge_list", "random_gnm", "read_edge_list", "train",
    "exact_distribution", "naive_sample", "mhrw_sample", "baseline_distribution",
    "estimate_distribution", "mse", "frequencies", "without_timing",
]


def exact_distribution(graph, workers=1):
    return json.loads(_sgf.exact_distribution_json(graph, workers))


def naive_sample(graph, k, samples, seed=0):
    return json.loads(_sgf.naive_sample_json(graph, k, samples, seed))


def mhrw_sample(graph, k, steps, burn_in=None, seed=0):
    return json.loads(_sgf.mhrw_sample_json(graph, k, steps, burn_in, seed))


def baseline_distribution(graph, method, samples_4, samples_5, seed=0, burn_in=None):
    return json.loads(_sgf.baseline_json(graph, method, samples_4, samples_5, seed, burn_in))


def estimate_distribution(graph, model, samples=1024, seed=0, harvest="all",
                          weighting="inclusion", workers=1):
    return json.loads(_sgf.estimate_distribution_json(
        graph, model, samples, seed, harvest, weighting, workers))


def mse(a, b):
    return _sgf.mse_json(json.dumps(a), json.dumps(b))


def frequencies(dist):
    """{alias: freq} view of a distribution dict."""
    return {e["alias"]: e["freq"] for e in dist["entries"]}


def without_timing(dist):
    return json.loads(_sgf.strip_timing_json(json.dumps(dist)))
