"""Python front end for the semiwave C++ core."""

import json

from ._core import (
    ParseError,
    conjugate,
    equations,
    euler,
    simplify,
    special_power,
    tables,
    total_derivative,
)

__all__ = [
    "ParseError",
    "conjugate",
    "equations",
    "euler",
    "simplify",
    "simulate",
    "special_power",
    "tables",
    "total_derivative",
    "verify",
]


def verify(scope="all", sigma="both", jobs=1):
    """Replay catalog rows; one dict per row."""
    from ._core import verify_json

    return json.loads(verify_json(scope, sigma, jobs))


def simulate(config_text):
    """Run a solver configuration; returns (summary dict, csv text)."""
    from ._core import simulate_raw

    summary, csv = simulate_raw(config_text)
    return json.loads(summary), csv
