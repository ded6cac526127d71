"""Stochastic matching sparsifier: Python front end over the C++ core."""

import json

from . import _core
from ._core import (
    ConfigError,
    Error,
    Graph,
    IoError,
    NoEligiblePairs,
    ParseError,
    __version__,
    generate_graph,
    load_graph,
    mwm,
    parse_graph,
)

__all__ = [
    "ConfigError", "Error", "Graph", "IoError", "NoEligiblePairs", "ParseError",
    "__version__", "generate_graph", "load_graph", "mwm", "parse_graph",
    "default_spec", "sparsify", "audit", "ratio_sweep", "independence", "vimatch_demo",
]


def default_spec():
    return json.loads(_core.default_spec())


def _run(fn, spec, overrides):
    s = dict(spec or {})
    s.update(overrides)
    return json.loads(fn(json.dumps(s)))


def sparsify(spec=None, **overrides):
    return _run(_core.run_sparsify, spec, overrides)


def audit(spec=None, **overrides):
    return _run(_core.run_audit, spec, overrides)


def ratio_sweep(spec=None, **overrides):
    return _run(_core.run_ratio_sweep, spec, overrides)


def independence(spec=None, **overrides):
    return _run(_core.run_independence, spec, overrides)


def vimatch_demo(spec=None, **overrides):
    return _run(_core.run_vimatch_demo, spec, overrides)
