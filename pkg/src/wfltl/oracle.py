"""Brute-force lasso enumeration and witness explanation.

``enumerate_sat`` is the engine's independent referee: it exhaustively walks
every lasso shape within the requested budget and returns the first
satisfying trace in a documented canonical order. Internally whole blocks of
candidate traces are evaluated at once with bit-parallel arithmetic on big
integers, which preserves the canonical order (the first set bit of the
result is the first satisfying candidate) while keeping exhaustive runs
tractable.

Canonical order: shorter prefixes first, then shorter loops; within one
(prefix, loop) shape, traces are counted like a binary odometer in which the
first trace position is the most significant digit and, inside a position,
the alphabetically first proposition is the least significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .compiler import CompilationUnit, model_formula
from .ltl import (
    And,
    FalseConst,
    Formula,
    Iff,
    Implies,
    LassoTrace,
    Next,
    Not,
    Or,
    Prev,
    Prop,
    Release,
    Since,
    Trigger,
    TrueConst,
    Until,
    WeakPrev,
    Eventually,
    Globally,
    atoms,
    children,
    evaluate,
    past_depth,
)
from .workflow import PlaceKind

_MAX_ALPHABET = 8
_MAX_TOTAL = 8


class EnumerationLimitError(ValueError):
    pass


@dataclass(frozen=True)
class EnumerationSpec:
    alphabet: tuple[str, ...]
    max_total: int

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))
        if len(self.alphabet) > _MAX_ALPHABET:
            raise EnumerationLimitError(
                f"alphabet of {len(self.alphabet)} exceeds limit {_MAX_ALPHABET}")
        if not 1 <= self.max_total <= _MAX_TOTAL:
            raise EnumerationLimitError(
                f"max_total {self.max_total} outside 1..{_MAX_TOTAL}")


class _BlockEval:
    """Evaluate a formula over every trace of one (prefix, loop) shape.

    Traces are indexed by an odometer value v; bit (L-1-i)*n + j of v is the
    truth of the j-th alphabet proposition at trace position i. Each
    subformula maps to one big integer per word position: bit v of the
    integer is the subformula's truth on trace v at that position. The word
    positions form the same stabilization window used by the scalar
    interpreter, so the recurrences below mirror it operator for operator.
    """

    def __init__(self, alphabet: tuple[str, ...], a: int, b: int, width: int):
        self.alphabet = alphabet
        self.a, self.b = a, b
        self.width = width
        n = len(alphabet)
        L = a + b
        self.m = 1 << (n * L)
        self.full = (1 << self.m) - 1
        self.base: dict[tuple[int, int], int] = {}
        for i in range(L):
            for j in range(n):
                t = (L - 1 - i) * n + j
                s = 1 << t
                ones_first = self.full // ((1 << s) + 1) if s < self.m else 0
                self.base[(i, j)] = ones_first << s if s < self.m else 0
        if self.m == 1:
            # single empty-alphabet trace: base masks are all zero
            for key in list(self.base):
                self.base[key] = 0
        self.memo: dict[Formula, list[int]] = {}

    def _prop(self, name: str) -> list[int]:
        a, b, L = self.a, self.b, self.a + self.b
        try:
            j = self.alphabet.index(name)
        except ValueError:
            return [0] * self.width
        out = []
        for t in range(self.width):
            i = t if t < L else a + ((t - a) % b)
            out.append(self.base[(i, j)])
        return out

    def vals(self, f: Formula) -> list[int]:
        got = self.memo.get(f)
        if got is not None:
            return got
        out = self._compute(f)
        self.memo[f] = out
        return out

    def _compute(self, f: Formula) -> list[int]:
        W, full = self.width, self.full
        if isinstance(f, Prop):
            return self._prop(f.name)
        if isinstance(f, TrueConst):
            return [full] * W
        if isinstance(f, FalseConst):
            return [0] * W
        if isinstance(f, Not):
            return [full ^ v for v in self.vals(f.arg)]
        if isinstance(f, And):
            return [x & y for x, y in zip(self.vals(f.left), self.vals(f.right))]
        if isinstance(f, Or):
            return [x | y for x, y in zip(self.vals(f.left), self.vals(f.right))]
        if isinstance(f, Implies):
            return [(full ^ x) | y
                    for x, y in zip(self.vals(f.left), self.vals(f.right))]
        if isinstance(f, Iff):
            return [full ^ (x ^ y)
                    for x, y in zip(self.vals(f.left), self.vals(f.right))]
        if isinstance(f, Next):
            c = self.vals(f.arg)
            return c[1:] + [c[W - self.b]]
        if isinstance(f, Prev):
            c = self.vals(f.arg)
            return [0] + c[: W - 1]
        if isinstance(f, WeakPrev):
            c = self.vals(f.arg)
            return [full] + c[: W - 1]
        if isinstance(f, Since):
            av, bv = self.vals(f.left), self.vals(f.right)
            out = [0] * W
            out[0] = bv[0]
            for i in range(1, W):
                out[i] = bv[i] | (av[i] & out[i - 1])
            return out
        if isinstance(f, Trigger):
            av, bv = self.vals(f.left), self.vals(f.right)
            out = [0] * W
            out[0] = bv[0]
            for i in range(1, W):
                out[i] = bv[i] & (av[i] | out[i - 1])
            return out
        if isinstance(f, Until):
            return self._until(self.vals(f.left), self.vals(f.right))
        if isinstance(f, Eventually):
            return self._until([full] * W, self.vals(f.arg))
        if isinstance(f, Release):
            return self._release(self.vals(f.left), self.vals(f.right))
        if isinstance(f, Globally):
            return self._release([0] * W, self.vals(f.arg))
        raise TypeError(f"unknown formula node {f!r}")

    def _until(self, av: list[int], bv: list[int]) -> list[int]:
        W, p = self.width, self.b
        out = [0] * W
        changed = True
        while changed:
            changed = False
            for i in range(W - 1, W - p - 1, -1):
                nxt = out[W - p] if i == W - 1 else out[i + 1]
                v = bv[i] | (av[i] & nxt)
                if v != out[i]:
                    out[i] = v
                    changed = True
        for i in range(W - p - 1, -1, -1):
            out[i] = bv[i] | (av[i] & out[i + 1])
        return out

    def _release(self, av: list[int], bv: list[int]) -> list[int]:
        W, p = self.width, self.b
        out = [0] * (W - p) + [self.full] * p
        changed = True
        while changed:
            changed = False
            for i in range(W - 1, W - p - 1, -1):
                nxt = out[W - p] if i == W - 1 else out[i + 1]
                v = bv[i] & (av[i] | nxt)
                if v != out[i]:
                    out[i] = v
                    changed = True
        for i in range(W - p - 1, -1, -1):
            out[i] = bv[i] & (av[i] | out[i + 1])
        return out

    def stable(self) -> bool:
        W, p = self.width, self.b
        return all(v[W - p:] == v[W - 2 * p: W - p] for v in self.memo.values())


def _sat_block(formula: Formula, alphabet: tuple[str, ...], a: int, b: int) -> int:
    """Bitmask over all traces of shape (a, b) satisfying the formula at 0."""
    d = past_depth(formula)
    width = a + b * (d + 3) + d
    for _ in range(64):
        block = _BlockEval(alphabet, a, b, width)
        result = block.vals(formula)[0]
        if block.stable():
            return result
        width += b
    raise RuntimeError("block evaluation failed to stabilize")


def _trace_of_index(alphabet: tuple[str, ...], a: int, b: int, v: int) -> LassoTrace:
    n = len(alphabet)
    L = a + b
    positions = []
    for i in range(L):
        t = (L - 1 - i) * n
        positions.append(frozenset(
            alphabet[j] for j in range(n) if (v >> (t + j)) & 1))
    return LassoTrace(tuple(positions[:a]), tuple(positions[a:]))


def enumerate_sat(formula: Formula, spec: EnumerationSpec) -> LassoTrace | None:
    """First satisfying lasso in canonical order, or None if none exists."""
    missing = atoms(formula) - set(spec.alphabet)
    if missing:
        raise ValueError(
            f"formula mentions propositions outside the alphabet: {sorted(missing)}")
    for a in range(spec.max_total):
        for b in range(1, spec.max_total - a + 1):
            mask = _sat_block(formula, spec.alphabet, a, b)
            if mask:
                v = (mask & -mask).bit_length() - 1
                trace = _trace_of_index(spec.alphabet, a, b, v)
                if not evaluate(formula, trace, 0):
                    raise RuntimeError(
                        "enumeration found a trace the interpreter rejects")
                return trace
    return None


# ---------------------------------------------------------------------------
# Witness explanation


class InvalidWitnessError(ValueError):
    pass


@dataclass(frozen=True)
class ExplainReport:
    witness: LassoTrace
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    exceptions: tuple[str, ...]
    divergent: tuple[str, ...]

    def rows(self):
        prefix_len = len(self.witness.prefix)
        for i in range(prefix_len + len(self.witness.loop)):
            props = self.witness.at(i)
            yield (i,
                   "loop" if i >= prefix_len else "prefix",
                   [p for p in self.places if p in props],
                   [t for t in self.transitions if t in props],
                   [e for e in self.exceptions if e in props])

    def text(self) -> str:
        lines = ["pos  phase   places | transitions | exceptions"]
        for i, phase, places, transitions, exceptions in self.rows():
            lines.append(
                f"{i:>3}  {phase:<6}  {', '.join(places) or '-'} | "
                f"{', '.join(transitions) or '-'} | "
                f"{', '.join(exceptions) or '-'}")
        if self.divergent:
            lines.append(f"divergent activities: {', '.join(self.divergent)}")
        else:
            lines.append("divergent activities: none")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "prefix": [sorted(s) for s in self.witness.prefix],
            "loop": [sorted(s) for s in self.witness.loop],
            "divergent": list(self.divergent),
        }


def explain(witness: LassoTrace, cu: CompilationUnit) -> ExplainReport:
    """Timeline of a model witness; flags activities that never terminate.

    An activity is divergent when it holds at every loop position. End
    places are absorbing by design and are never flagged.
    """
    if not evaluate(model_formula(cu), witness, 0):
        raise InvalidWitnessError("trace does not satisfy the workflow model")
    activity_names = [n for n, kind in cu.places if kind is PlaceKind.ACTIVITY]
    divergent = tuple(
        n for n in activity_names
        if all(n in s for s in witness.loop))
    return ExplainReport(
        witness=witness,
        places=tuple(n for n, _ in cu.places),
        transitions=cu.transition_names,
        exceptions=cu.exception_names,
        divergent=divergent,
    )
