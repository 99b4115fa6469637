"""Work limits for the exhaustive algorithms.

Every solver in this package is exact, so the only way to stay honest on
large inputs is to refuse them loudly.  The limits below are deliberately
conservative desk-scale defaults; the environment variable
``EGW_LIMITS_JSON`` may override individual fields with a JSON object,
e.g. ``EGW_LIMITS_JSON='{"solver_vertices": 26}'``.
"""

from __future__ import annotations

import dataclasses
import json
import os

ENV_VAR = "EGW_LIMITS_JSON"


@dataclasses.dataclass
class Limits:
    solver_vertices: int = 24        # exhaustive game solver board size
    dpll_vars: int = 64              # DPLL variable limit
    dpll_clauses: int = 100_000      # DPLL clause limit
    executor_nodes: int = 2 ** 27    # plan executor node-count guard
    pairing_pairs: int = 20          # side-selection enumeration: 2**pairs states
    coloring_units: int = 48         # decision units for the exact 2-coloring search
    coloring_nodes: int = 5_000_000  # backtracking node budget before refusing

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"limit {f.name} must be positive")


def load_limits(overrides: dict | None = None) -> Limits:
    """Build limits from defaults, the environment, then explicit overrides."""
    values: dict = {}
    raw = os.environ.get(ENV_VAR)
    if raw:
        env = json.loads(raw)
        if not isinstance(env, dict):
            raise ValueError(f"{ENV_VAR} must contain a JSON object")
        values.update(env)
    if overrides:
        values.update(overrides)
    known = {f.name for f in dataclasses.fields(Limits)}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown limit fields: {sorted(unknown)}")
    return Limits(**values)


DEFAULT_LIMITS = Limits()
