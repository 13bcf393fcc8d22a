"""LTL with past operators over ultimately periodic (lasso) traces.

Formula trees, a surface-syntax parser and printer, negation normal form,
and an exact interpreter deciding any formula at any position of an
infinite word given as finite prefix plus repeated loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class FormulaSyntaxError(ValueError):
    """Malformed formula text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


# ---------------------------------------------------------------------------
# Syntax tree


@dataclass(frozen=True)
class Formula:
    """Base node; all nodes are immutable and structurally hashable."""

    def __invert__(self) -> "Formula":
        return Not(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class FalseConst(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True)
class Prev(Formula):
    arg: Formula


@dataclass(frozen=True)
class WeakPrev(Formula):
    """Dual of Prev: true at position 0, elsewhere the argument one step back.

    Internal operator needed for negation normal form of past formulas; it has
    no surface syntax.
    """

    arg: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Trigger(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    arg: Formula


@dataclass(frozen=True)
class Globally(Formula):
    arg: Formula


TRUE = TrueConst()
FALSE = FalseConst()

_UNARY = (Not, Next, Prev, WeakPrev, Eventually, Globally)
_BINARY = (And, Or, Implies, Iff, Until, Since, Release, Trigger)


def conj(items: Iterable[Formula]) -> Formula:
    """Left-folded conjunction; empty input yields the constant true."""
    items = list(items)
    if not items:
        return TRUE
    out = items[0]
    for f in items[1:]:
        out = And(out, f)
    return out


def disj(items: Iterable[Formula]) -> Formula:
    """Left-folded disjunction; empty input yields the constant false."""
    items = list(items)
    if not items:
        return FALSE
    out = items[0]
    for f in items[1:]:
        out = Or(out, f)
    return out


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, _UNARY):
        return (f.arg,)
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Distinct subformulas, children before parents."""
    seen: set[Formula] = set()
    order: list[Formula] = []

    def walk(g: Formula) -> None:
        if g in seen:
            return
        seen.add(g)
        for c in children(g):
            walk(c)
        order.append(g)

    walk(f)
    return iter(order)


def atoms(f: Formula) -> frozenset[str]:
    """Proposition names occurring in the formula."""
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Prop))


def past_depth(f: Formula) -> int:
    """Maximum nesting of past operators (Y, Z, S, T) along any path."""
    memo: dict[Formula, int] = {}

    def depth(g: Formula) -> int:
        got = memo.get(g)
        if got is not None:
            return got
        d = max((depth(c) for c in children(g)), default=0)
        if isinstance(g, (Prev, WeakPrev, Since, Trigger)):
            d += 1
        memo[g] = d
        return d

    return depth(f)


# ---------------------------------------------------------------------------
# Printer

_PREC_IFF = 1
_PREC_IMPLIES = 2
_PREC_OR = 3
_PREC_AND = 4
_PREC_TEMPORAL = 5
_PREC_UNARY = 6
_PREC_ATOM = 7

_UNARY_SYMBOL = {Not: "!", Next: "X", Prev: "Y", WeakPrev: "Z",
                 Eventually: "F", Globally: "G"}
_BINARY_SYMBOL = {And: "&", Or: "|", Implies: "->", Iff: "<->",
                  Until: "U", Since: "S", Release: "R", Trigger: "T"}


def _prec(f: Formula) -> int:
    if isinstance(f, (Prop, TrueConst, FalseConst)):
        return _PREC_ATOM
    if isinstance(f, _UNARY):
        return _PREC_UNARY
    if isinstance(f, (Until, Since, Release, Trigger)):
        return _PREC_TEMPORAL
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, Implies):
        return _PREC_IMPLIES
    return _PREC_IFF


def pretty(f: Formula) -> str:
    """Canonical text with minimal parentheses; parse(pretty(f)) == f."""
    return _render(f, 0)


def _render(f: Formula, min_prec: int) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, FalseConst):
        return "false"
    if isinstance(f, _UNARY):
        sym = _UNARY_SYMBOL[type(f)]
        if _prec(f.arg) == _PREC_ATOM:
            body = _render(f.arg, 0)
            text = f"{sym}{body}" if sym == "!" else f"{sym} {body}"
        else:
            text = f"{sym}({_render(f.arg, 0)})"
        return text
    sym = _BINARY_SYMBOL[type(f)]
    prec = _prec(f)
    if isinstance(f, (Until, Since, Release, Trigger, Implies, Iff)):
        left, right = _render(f.left, prec + 1), _render(f.right, prec)
    else:  # And / Or are left-associative
        left, right = _render(f.left, prec), _render(f.right, prec + 1)
    text = f"{left} {sym} {right}"
    if prec < min_prec:
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# Parser

_RESERVED = {"true", "false", "X", "Y", "U", "S", "R", "T", "F", "G"}
_UNARY_OPS = {"!": Not, "X": Next, "Y": Prev, "F": Eventually, "G": Globally}
_TEMPORAL_OPS = {"U": Until, "S": Since, "R": Release, "T": Trigger}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch == "#":  # comment to end of line
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "op" if word in _RESERVED and word not in ("true", "false") else \
                ("const" if word in ("true", "false") else "ident")
            tokens.append((kind, word, i))
            i = j
            continue
        if text.startswith("<->", i):
            tokens.append(("op", "<->", i))
            i += 3
            continue
        if text.startswith("->", i):
            tokens.append(("op", "->", i))
            i += 2
            continue
        if ch in "!&|()":
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("eof", "", n))
    return tokens


class _FormulaParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        kind, value, at = self.peek()
        if kind != "eof":
            raise FormulaSyntaxError(f"unexpected {value!r}", at)
        return f

    def iff(self) -> Formula:
        left = self.implies()
        if self.peek()[1] == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def implies(self) -> Formula:
        left = self.disjunct()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disjunct(self) -> Formula:
        f = self.conjunct()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.conjunct())
        return f

    def conjunct(self) -> Formula:
        f = self.temporal()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.temporal())
        return f

    def temporal(self) -> Formula:
        left = self.unary()
        kind, value, _ = self.peek()
        if kind == "op" and value in _TEMPORAL_OPS:
            self.take()
            return _TEMPORAL_OPS[value](left, self.temporal())
        return left

    def unary(self) -> Formula:
        kind, value, at = self.peek()
        if kind == "op" and value in _UNARY_OPS:
            self.take()
            return _UNARY_OPS[value](self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, at = self.take()
        if kind == "ident":
            return Prop(value)
        if kind == "const":
            return TRUE if value == "true" else FALSE
        if value == "(":
            f = self.iff()
            kind, value, at = self.take()
            if value != ")":
                raise FormulaSyntaxError("expected ')'", at)
            return f
        raise FormulaSyntaxError(
            f"expected a proposition, constant or '(', got {value!r}" if value
            else "unexpected end of input", at)


def parse_formula(text: str) -> Formula:
    """Parse the surface syntax: ``! & | -> <-> X Y U S R T F G true false``."""
    return _FormulaParser(text).parse()


# ---------------------------------------------------------------------------
# Negation normal form


def to_nnf(f: Formula) -> Formula:
    """Push negations onto propositions.

    The result uses only literals, constants, conjunction, disjunction and the
    temporal operators X, Y, Z, U, S, R, T; F and G are expanded into U and R.
    Equivalent to the input at every position of every trace.
    """
    return _nnf_pos(f)


def _nnf_pos(f: Formula) -> Formula:
    if isinstance(f, (Prop, TrueConst, FalseConst)):
        return f
    if isinstance(f, Not):
        return _nnf_neg(f.arg)
    if isinstance(f, And):
        return And(_nnf_pos(f.left), _nnf_pos(f.right))
    if isinstance(f, Or):
        return Or(_nnf_pos(f.left), _nnf_pos(f.right))
    if isinstance(f, Implies):
        return Or(_nnf_neg(f.left), _nnf_pos(f.right))
    if isinstance(f, Iff):
        return And(Or(_nnf_neg(f.left), _nnf_pos(f.right)),
                   Or(_nnf_neg(f.right), _nnf_pos(f.left)))
    if isinstance(f, Next):
        return Next(_nnf_pos(f.arg))
    if isinstance(f, Prev):
        return Prev(_nnf_pos(f.arg))
    if isinstance(f, WeakPrev):
        return WeakPrev(_nnf_pos(f.arg))
    if isinstance(f, Eventually):
        return Until(TRUE, _nnf_pos(f.arg))
    if isinstance(f, Globally):
        return Release(FALSE, _nnf_pos(f.arg))
    if isinstance(f, Until):
        return Until(_nnf_pos(f.left), _nnf_pos(f.right))
    if isinstance(f, Since):
        return Since(_nnf_pos(f.left), _nnf_pos(f.right))
    if isinstance(f, Release):
        return Release(_nnf_pos(f.left), _nnf_pos(f.right))
    if isinstance(f, Trigger):
        return Trigger(_nnf_pos(f.left), _nnf_pos(f.right))
    raise TypeError(f"unknown formula node {f!r}")


def _nnf_neg(f: Formula) -> Formula:
    if isinstance(f, Prop):
        return Not(f)
    if isinstance(f, TrueConst):
        return FALSE
    if isinstance(f, FalseConst):
        return TRUE
    if isinstance(f, Not):
        return _nnf_pos(f.arg)
    if isinstance(f, And):
        return Or(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Or):
        return And(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Implies):
        return And(_nnf_pos(f.left), _nnf_neg(f.right))
    if isinstance(f, Iff):
        # not (a <-> b)  ==  a <-> not b
        return And(Or(_nnf_neg(f.left), _nnf_neg(f.right)),
                   Or(_nnf_pos(f.right), _nnf_pos(f.left)))
    if isinstance(f, Next):
        return Next(_nnf_neg(f.arg))  # on infinite words X is self-dual
    if isinstance(f, Prev):
        return WeakPrev(_nnf_neg(f.arg))
    if isinstance(f, WeakPrev):
        return Prev(_nnf_neg(f.arg))
    if isinstance(f, Eventually):
        return Release(FALSE, _nnf_neg(f.arg))
    if isinstance(f, Globally):
        return Until(TRUE, _nnf_neg(f.arg))
    if isinstance(f, Until):
        return Release(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Release):
        return Until(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Since):
        return Trigger(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Trigger):
        return Since(_nnf_neg(f.left), _nnf_neg(f.right))
    raise TypeError(f"unknown formula node {f!r}")


_NNF_NODES = (Prop, TrueConst, FalseConst, And, Or, Next, Prev, WeakPrev,
              Until, Since, Release, Trigger)


def is_nnf(f: Formula) -> bool:
    if isinstance(f, Not):
        return isinstance(f.arg, Prop)
    if not isinstance(f, _NNF_NODES):
        return False
    return all(is_nnf(c) for c in children(f))


# ---------------------------------------------------------------------------
# Lasso traces and the interpreter


@dataclass(frozen=True)
class LassoTrace:
    """Finite prefix plus nonempty loop denoting the word prefix . loop^omega."""

    prefix: tuple[frozenset[str], ...]
    loop: tuple[frozenset[str], ...]

    def __post_init__(self):
        if len(self.loop) < 1:
            raise ValueError("lasso loop must be nonempty")

    @classmethod
    def make(cls, prefix: Iterable[Iterable[str]],
             loop: Iterable[Iterable[str]]) -> "LassoTrace":
        return cls(tuple(frozenset(s) for s in prefix),
                   tuple(frozenset(s) for s in loop))

    def at(self, i: int) -> frozenset[str]:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.loop[(i - len(self.prefix)) % len(self.loop)]

    def total(self) -> int:
        return len(self.prefix) + len(self.loop)


class _Window:
    """Truth values of every subformula over an initial window of the word.

    Subformula values on a lasso are eventually periodic with the loop's
    period; the window is sized so the final two periods repeat, which is
    verified after computing and widened in the rare case it does not hold.
    """

    def __init__(self, trace: LassoTrace, width: int):
        self.trace = trace
        self.width = width
        self.p = len(trace.loop)
        self.memo: dict[Formula, list[bool]] = {}

    def vals(self, f: Formula) -> list[bool]:
        got = self.memo.get(f)
        if got is not None:
            return got
        out = self._compute(f)
        self.memo[f] = out
        return out

    def _compute(self, f: Formula) -> list[bool]:
        W = self.width
        if isinstance(f, Prop):
            name = f.name
            return [name in self.trace.at(i) for i in range(W)]
        if isinstance(f, TrueConst):
            return [True] * W
        if isinstance(f, FalseConst):
            return [False] * W
        if isinstance(f, Not):
            return [not v for v in self.vals(f.arg)]
        if isinstance(f, And):
            a, b = self.vals(f.left), self.vals(f.right)
            return [x and y for x, y in zip(a, b)]
        if isinstance(f, Or):
            a, b = self.vals(f.left), self.vals(f.right)
            return [x or y for x, y in zip(a, b)]
        if isinstance(f, Implies):
            a, b = self.vals(f.left), self.vals(f.right)
            return [(not x) or y for x, y in zip(a, b)]
        if isinstance(f, Iff):
            a, b = self.vals(f.left), self.vals(f.right)
            return [x == y for x, y in zip(a, b)]
        if isinstance(f, Next):
            c = self.vals(f.arg)
            return c[1:] + [c[W - self.p]]
        if isinstance(f, Prev):
            c = self.vals(f.arg)
            return [False] + c[: W - 1]
        if isinstance(f, WeakPrev):
            c = self.vals(f.arg)
            return [True] + c[: W - 1]
        if isinstance(f, Since):
            a, b = self.vals(f.left), self.vals(f.right)
            out = [False] * W
            out[0] = b[0]
            for i in range(1, W):
                out[i] = b[i] or (a[i] and out[i - 1])
            return out
        if isinstance(f, Trigger):
            a, b = self.vals(f.left), self.vals(f.right)
            out = [False] * W
            out[0] = b[0]
            for i in range(1, W):
                out[i] = b[i] and (a[i] or out[i - 1])
            return out
        if isinstance(f, Until):
            return self._until(self.vals(f.left), self.vals(f.right))
        if isinstance(f, Eventually):
            return self._until([True] * W, self.vals(f.arg))
        if isinstance(f, Release):
            return self._release(self.vals(f.left), self.vals(f.right))
        if isinstance(f, Globally):
            return self._release([False] * W, self.vals(f.arg))
        raise TypeError(f"unknown formula node {f!r}")

    def _until(self, a: list[bool], b: list[bool]) -> list[bool]:
        # Least fixpoint of U_i = b_i or (a_i and U_succ(i)) on the final
        # period, where succ wraps W-1 back to W-p; then backward closure.
        W, p = self.width, self.p
        out = [False] * W
        changed = True
        while changed:
            changed = False
            for i in range(W - 1, W - p - 1, -1):
                nxt = out[W - p] if i == W - 1 else out[i + 1]
                v = b[i] or (a[i] and nxt)
                if v != out[i]:
                    out[i] = v
                    changed = True
        for i in range(W - p - 1, -1, -1):
            out[i] = b[i] or (a[i] and out[i + 1])
        return out

    def _release(self, a: list[bool], b: list[bool]) -> list[bool]:
        # Greatest fixpoint of R_i = b_i and (a_i or R_succ(i)).
        W, p = self.width, self.p
        out = [False] * (W - p) + [True] * p
        changed = True
        while changed:
            changed = False
            for i in range(W - 1, W - p - 1, -1):
                nxt = out[W - p] if i == W - 1 else out[i + 1]
                v = b[i] and (a[i] or nxt)
                if v != out[i]:
                    out[i] = v
                    changed = True
        for i in range(W - p - 1, -1, -1):
            out[i] = b[i] and (a[i] or out[i + 1])
        return out

    def stable(self) -> bool:
        W, p = self.width, self.p
        return all(v[W - p:] == v[W - 2 * p: W - p] for v in self.memo.values())


def evaluate(f: Formula, trace: LassoTrace, position: int = 0) -> bool:
    """Decide whether the trace satisfies the formula at the given position.

    Exact for every formula and position: subformula truth values become
    periodic on the loop, so a finite window determines the infinite word.
    """
    if position < 0:
        raise ValueError("position must be nonnegative")
    a, p = len(trace.prefix), len(trace.loop)
    d = past_depth(f)
    width = a + p * (d + 3) + d
    for _ in range(64):
        win = _Window(trace, width)
        vals = win.vals(f)
        if win.stable():
            break
        width += p
    else:
        raise RuntimeError("lasso evaluation failed to stabilize")
    if position < width:
        return vals[position]
    base = width - 2 * p
    return vals[base + (position - base) % p]
