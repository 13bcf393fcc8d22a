"""SAT backend selection.

The compiled CDCL core (Cython extension ``wfltl._satcore``) is preferred
when it was built; otherwise the pure-Python twin in ``_satpure`` is used.
Set ``WFLTL_SAT_BACKEND=python`` or ``=compiled`` to force one side, e.g.
for the benchmark in ``benchmarks/bench_sat.py``.
"""

from __future__ import annotations

import os


def _load():
    choice = os.environ.get("WFLTL_SAT_BACKEND", "auto")
    if choice not in ("auto", "python", "compiled"):
        raise ValueError(f"unknown WFLTL_SAT_BACKEND {choice!r}")
    if choice in ("auto", "compiled"):
        try:
            from . import _satcore
            return "compiled", _satcore.Solver
        except ImportError:
            if choice == "compiled":
                raise
    from . import _satpure
    return "python", _satpure.Solver


BACKEND, Solver = _load()


def solve(num_vars: int, clauses, seed: int = 0):
    """One-shot solve; returns a 1-based assignment list or None."""
    return Solver(num_vars, clauses, seed).solve()
