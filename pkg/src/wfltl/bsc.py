"""Bounded satisfiability checking over lasso traces.

``check`` encodes a formula at bound k, runs the selected SAT backend, and
either reports absence of lasso models within the bound or decodes a witness
trace. Every witness is re-validated by the exact interpreter before it is
returned; a decoded trace that fails validation signals an internal
inconsistency and is never handed to the caller.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from enum import Enum

from . import sat
from .encode import CnfInstance, encode
from .ltl import Formula, LassoTrace, evaluate


class SolverMode(Enum):
    EMBEDDED = "embedded"
    EXPORT_ONLY = "export-only"


@dataclass(frozen=True)
class CheckConfig:
    k: int
    solver: SolverMode = SolverMode.EMBEDDED
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("bound k must be at least 1")


@dataclass(frozen=True)
class Sat:
    witness: LassoTrace


@dataclass(frozen=True)
class UnsatUpTo:
    k: int


Verdict = Sat | UnsatUpTo


class InternalInconsistencyError(RuntimeError):
    """A decoded witness failed semantic validation (an encoder/solver bug)."""


def default_seed() -> int:
    raw = os.environ.get("WFLTL_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"WFLTL_SEED must be an integer, got {raw!r}")


def decode_witness(inst: CnfInstance, model: list[bool]) -> LassoTrace:
    """Rebuild the lasso trace from a satisfying assignment."""
    k = inst.k
    loop_start = [j for j in range(k + 1) if model[inst.loop_var(j)]]
    if len(loop_start) != 1:
        raise InternalInconsistencyError(
            f"expected exactly one loop selector, got {loop_start}")
    j = loop_start[0]
    names = inst.prop_names()
    positions = [
        frozenset(p for p in names if model[inst.prop_var(p, i)])
        for i in range(k + 1)]
    return LassoTrace(tuple(positions[:j]), tuple(positions[j:]))


def check(formula: Formula, config: CheckConfig) -> Verdict:
    """Decide lasso satisfiability with |prefix| + |loop| <= k + 1.

    ``UnsatUpTo`` is a bounded verdict: no ultimately periodic model fits
    within the bound, which does not rule out larger models.
    """
    if config.solver is not SolverMode.EMBEDDED:
        raise ValueError("check requires an embedded-solver configuration; "
                         "use the exporters for export-only runs")
    inst = encode(formula, config.k)
    model = sat.solve(inst.num_vars, inst.clauses, seed=config.seed)
    if model is None:
        return UnsatUpTo(config.k)
    witness = decode_witness(inst, model)
    if not evaluate(formula, witness, 0):
        raise InternalInconsistencyError(
            "decoded witness fails semantic validation at position 0")
    return Sat(witness)


# ---------------------------------------------------------------------------
# Witness JSON format


def witness_to_json(trace: LassoTrace) -> str:
    payload = {
        "prefix": [sorted(s) for s in trace.prefix],
        "loop": [sorted(s) for s in trace.loop],
    }
    return json.dumps(payload, indent=2) + "\n"


def witness_from_json(text: str) -> LassoTrace:
    payload = json.loads(text)
    return LassoTrace.make(payload["prefix"], payload["loop"])
