# SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
# SPDX-License-Identifier: Apache-2.0

"""Adjusted chi-square goodness-of-fit tests for degree-corrected block models.

Labels are 0-based in this API. Statistic results come back as plain dicts with the
same keys as the command-line JSON output.
"""

import json as _json

from . import _nacgof
from ._nacgof import Error, Graph, NumericalError, ValidationError, ac_adjust, cluster, load_graph

__all__ = [
    "Error",
    "Graph",
    "NumericalError",
    "ValidationError",
    "ac_adjust",
    "ac_statistic",
    "cluster",
    "gof",
    "load_graph",
    "profile",
    "run_cli",
    "select",
    "simulate",
]


def simulate(model, seed):
    """Sample (graph, labels, metadata) from a model dict in the simulation file format."""
    graph, labels, meta = _nacgof.simulate(_json.dumps(model), seed)
    return graph, labels, _json.loads(meta)


def gof(graph, K, method="snac+", seed=1, boot=0, poisson_boot=False, two_sided=False, tau=0.25):
    return _json.loads(_nacgof.gof(graph, K, method, seed, boot, poisson_boot, two_sided, tau))


def select(graph, kmin=1, kmax=10, method="snac+", alpha=1e-6, seed=1, boot=0):
    return _json.loads(_nacgof.select(graph, kmin, kmax, method, alpha, seed, boot))


def profile(graph, Ks, repeats=20, seed=1, smoothness=0.3, threads=1):
    return _json.loads(_nacgof.profile(graph, list(Ks), repeats, seed, smoothness, threads))


def ac_statistic(counts, groups=None, K=1):
    """AC statistic of an m x L count table with optional row groups in [0, K)."""
    rows = [[int(x) for x in row] for row in counts]
    return _json.loads(_nacgof.ac_statistic(rows, list(groups or []), K))


def run_cli(args):
    """Runs the command-line tool in-process; returns (exit_code, stdout, stderr)."""
    return _nacgof.run_cli([str(a) for a in args])
