"""Workflow graphs with exception annotations and a line-oriented DSL.

A workflow is a directed graph of places (activities, gateways, start/end)
joined by named transitions, plus declared exceptions and per-activity
throw/catch/probe sets. Values are immutable after construction and all
operations here are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class PlaceKind(Enum):
    ACTIVITY = "activity"
    CONDITIONAL = "cond"
    SPLIT_JOIN = "splitjoin"
    START = "start"
    END = "end"


class ExceptionDuration(Enum):
    PUNCTUAL = "punctual"
    PERMANENT = "permanent"


class ExceptionOrigin(Enum):
    INTERNAL = "internal"  # thrown by some activity of the workflow
    EXTERNAL = "external"  # raised only by the environment


@dataclass(frozen=True)
class Transition:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class ExceptionDecl:
    name: str
    duration: ExceptionDuration
    origin: ExceptionOrigin


@dataclass(frozen=True)
class StructuralViolation:
    code: str
    subject: str
    message: str


class WorkflowParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class UnknownPlaceError(KeyError):
    pass


_GATEWAY_KINDS = (PlaceKind.CONDITIONAL, PlaceKind.SPLIT_JOIN)


@dataclass(frozen=True, eq=False)
class Workflow:
    places: tuple[tuple[str, PlaceKind], ...]
    transitions: tuple[Transition, ...]
    exceptions: tuple[ExceptionDecl, ...]
    throw: dict[str, frozenset[str]] = field(default_factory=dict)
    catch: dict[str, frozenset[str]] = field(default_factory=dict)
    probe: dict[str, frozenset[str]] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, Workflow):
            return NotImplemented
        return (self.places == other.places
                and self.transitions == other.transitions
                and self.exceptions == other.exceptions
                and self.throw == other.throw
                and self.catch == other.catch
                and self.probe == other.probe)

    def kind_of(self, place: str) -> PlaceKind:
        for name, kind in self.places:
            if name == place:
                return kind
        raise UnknownPlaceError(place)

    def place_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.places)

    def activities(self) -> tuple[str, ...]:
        return tuple(n for n, k in self.places if k is PlaceKind.ACTIVITY)

    def exception_names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.exceptions)

    def throw_of(self, place: str) -> frozenset[str]:
        return self.throw.get(place, frozenset())

    def catch_of(self, place: str) -> frozenset[str]:
        return self.catch.get(place, frozenset())

    def probe_of(self, place: str) -> frozenset[str]:
        return self.probe.get(place, frozenset())

    def catchers(self, exc: str) -> tuple[str, ...]:
        return tuple(n for n, _ in self.places if exc in self.catch_of(n))

    def throwers(self, exc: str) -> tuple[str, ...]:
        return tuple(n for n, _ in self.places if exc in self.throw_of(n))


def out_set(w: Workflow, place: str) -> tuple[Transition, ...]:
    """Transitions leaving the place, in declaration order."""
    if place not in w.place_names():
        raise UnknownPlaceError(place)
    return tuple(t for t in w.transitions if t.source == place)


def in_set(w: Workflow, place: str) -> tuple[Transition, ...]:
    """Transitions entering the place, in declaration order."""
    if place not in w.place_names():
        raise UnknownPlaceError(place)
    return tuple(t for t in w.transitions if t.target == place)


# ---------------------------------------------------------------------------
# DSL parser

_PLACE_KEYWORDS = {k.value: k for k in PlaceKind}
_MAP_KEYWORDS = ("throw", "catch", "probe")


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if text.startswith("->", i):
            tokens.append(("sym", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in "{}:,":
            tokens.append(("sym", ch, line, col))
            i += 1
            col += 1
            continue
        raise WorkflowParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(("eof", "", line, col))
    return tokens


class _WfParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.places: list[tuple[str, PlaceKind]] = []
        self.transitions: list[Transition] = []
        self.exc: list[tuple[str, ExceptionDuration]] = []
        self.maps: dict[str, dict[str, set[str]]] = {k: {} for k in _MAP_KEYWORDS}
        self.names: dict[str, str] = {}  # name -> category, for duplicate checks

    def error(self, message, tok=None):
        tok = tok or self.tokens[self.pos - 1 if self.pos else 0]
        raise WorkflowParseError(message, tok[2], tok[3])

    def take(self, expect_sym=None):
        tok = self.tokens[self.pos]
        self.pos += 1
        if expect_sym is not None and (tok[0] != "sym" or tok[1] != expect_sym):
            self.error(f"expected {expect_sym!r}, got {tok[1]!r}", tok)
        return tok

    def ident(self, what):
        tok = self.take()
        if tok[0] != "ident":
            self.error(f"expected {what}, got {tok[1]!r}" if tok[1]
                       else f"expected {what}, got end of input", tok)
        return tok

    def declare(self, name, category, tok):
        if name in self.names:
            self.error(f"duplicate name {name!r} (already a {self.names[name]})", tok)
        self.names[name] = category

    def parse(self) -> Workflow:
        while True:
            tok = self.tokens[self.pos]
            if tok[0] == "eof":
                break
            if tok[0] != "ident":
                self.error(f"expected a declaration, got {tok[1]!r}", tok)
            word = tok[1]
            if word in _PLACE_KEYWORDS:
                self.place_decl(_PLACE_KEYWORDS[word])
            elif word == "trans":
                self.trans_decl()
            elif word == "exception":
                self.exception_decl()
            elif word in _MAP_KEYWORDS:
                self.map_decl(word)
            else:
                self.error(f"unknown declaration {word!r}", tok)
        if not self.places:
            tok = self.tokens[self.pos]
            self.error("workflow declares no places", tok)
        return self.build()

    def place_decl(self, kind: PlaceKind):
        self.take()
        tok = self.ident("a place name")
        self.declare(tok[1], "place", tok)
        self.places.append((tok[1], kind))

    def trans_decl(self):
        self.take()
        name_tok = self.ident("a transition name")
        self.take(":")
        src_tok = self.ident("a source place")
        self.take("->")
        tgt_tok = self.ident("a target place")
        self.declare(name_tok[1], "transition", name_tok)
        for tok in (src_tok, tgt_tok):
            if self.names.get(tok[1]) != "place":
                self.error(f"undeclared place {tok[1]!r}", tok)
        self.transitions.append(Transition(name_tok[1], src_tok[1], tgt_tok[1]))

    def exception_decl(self):
        self.take()
        name_tok = self.ident("an exception name")
        dur_tok = self.ident("'punctual' or 'permanent'")
        if dur_tok[1] not in ("punctual", "permanent"):
            self.error(f"expected 'punctual' or 'permanent', got {dur_tok[1]!r}", dur_tok)
        self.declare(name_tok[1], "exception", name_tok)
        self.exc.append((name_tok[1], ExceptionDuration(dur_tok[1])))

    def map_decl(self, which: str):
        self.take()
        key_tok = self.ident("a place name")
        if self.names.get(key_tok[1]) != "place":
            self.error(f"undeclared place {key_tok[1]!r}", key_tok)
        self.take("{")
        members = []
        while True:
            m_tok = self.ident("an exception name")
            if self.names.get(m_tok[1]) != "exception":
                self.error(f"undeclared exception {m_tok[1]!r}", m_tok)
            members.append(m_tok[1])
            tok = self.take()
            if tok[1] == "}":
                break
            if tok[1] != ",":
                self.error(f"expected ',' or '}}', got {tok[1]!r}", tok)
        self.maps[which].setdefault(key_tok[1], set()).update(members)

    def build(self) -> Workflow:
        thrown = {e for members in self.maps["throw"].values() for e in members}
        exceptions = tuple(
            ExceptionDecl(name, dur,
                          ExceptionOrigin.INTERNAL if name in thrown
                          else ExceptionOrigin.EXTERNAL)
            for name, dur in self.exc)
        return Workflow(
            places=tuple(self.places),
            transitions=tuple(self.transitions),
            exceptions=exceptions,
            throw={k: frozenset(v) for k, v in self.maps["throw"].items()},
            catch={k: frozenset(v) for k, v in self.maps["catch"].items()},
            probe={k: frozenset(v) for k, v in self.maps["probe"].items()},
        )


def parse_workflow(text: str) -> Workflow:
    """Parse the workflow DSL; raises WorkflowParseError with line/column."""
    return _WfParser(text).parse()


def print_workflow(w: Workflow) -> str:
    """Render a workflow back to DSL text; parse(print(w)) == w."""
    lines = []
    for name, kind in w.places:
        lines.append(f"{kind.value} {name}")
    for t in w.transitions:
        lines.append(f"trans {t.name} : {t.source} -> {t.target}")
    for e in w.exceptions:
        lines.append(f"exception {e.name} {e.duration.value}")
    exc_order = {name: i for i, name in enumerate(w.exception_names())}
    for label, mapping in (("throw", w.throw), ("catch", w.catch), ("probe", w.probe)):
        for place, _ in w.places:
            members = mapping.get(place)
            if members:
                ordered = sorted(members, key=lambda n: exc_order.get(n, len(exc_order)))
                lines.append(f"{label} {place} {{ {', '.join(ordered)} }}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# structural validation


def validate(w: Workflow) -> list[StructuralViolation]:
    """Every violated structural invariant; an empty list means valid."""
    out: list[StructuralViolation] = []

    def bad(code, subject, message):
        out.append(StructuralViolation(code, subject, message))

    names: dict[str, str] = {}
    for name, _ in w.places:
        if name in names:
            bad("duplicate-name", name, f"place name {name!r} declared twice")
        names[name] = "place"
    for t in w.transitions:
        if t.name in names:
            bad("duplicate-name", t.name,
                f"transition name {t.name!r} collides with a {names[t.name]}")
        names[t.name] = "transition"
    for e in w.exceptions:
        if e.name in names:
            bad("duplicate-name", e.name,
                f"exception name {e.name!r} collides with a {names[e.name]}")
        names[e.name] = "exception"

    place_names = set(w.place_names())
    for t in w.transitions:
        for endpoint in (t.source, t.target):
            if endpoint not in place_names:
                bad("undeclared-place", t.name,
                    f"transition {t.name} references undeclared place {endpoint!r}")
        if t.source == t.target:
            bad("self-loop", t.name,
                f"transition {t.name} loops {t.source} onto itself")

    starts = [n for n, k in w.places if k is PlaceKind.START]
    ends = [n for n, k in w.places if k is PlaceKind.END]
    if not starts:
        bad("missing-start", "", "workflow has no start place")
    elif len(starts) > 1:
        bad("multiple-start", ", ".join(starts), "workflow has more than one start place")
    if not ends:
        bad("missing-end", "", "workflow has no end place")

    for name, kind in w.places:
        ins = in_set(w, name)
        outs = out_set(w, name)
        if kind is PlaceKind.END:
            if outs:
                bad("end-out-degree", name, f"end place {name} must have out-degree 0")
        elif not outs:
            bad("no-out", name, f"place {name} has no outgoing transition")
        if kind is not PlaceKind.START and not ins:
            bad("no-in", name,
                f"place {name} has no ingoing transition (unreachable from start)")
        if kind is PlaceKind.CONDITIONAL:
            if (len(ins), len(outs)) not in ((1, 2), (2, 1)):
                bad("cond-arity", name,
                    f"conditional {name} must have 1 in / 2 out (branch) or "
                    f"2 in / 1 out (merge), has {len(ins)} in / {len(outs)} out")
        if kind is PlaceKind.SPLIT_JOIN:
            if not ((len(ins) == 1 and len(outs) >= 2)
                    or (len(ins) >= 2 and len(outs) == 1)):
                bad("split-arity", name,
                    f"split-join {name} must have 1 in / n>=2 out (split) or "
                    f"n>=2 in / 1 out (join), has {len(ins)} in / {len(outs)} out")

    declared_exc = set(w.exception_names())
    kinds = dict(w.places)
    for label, mapping in (("throw", w.throw), ("catch", w.catch), ("probe", w.probe)):
        for key, members in mapping.items():
            if kinds.get(key) is not PlaceKind.ACTIVITY:
                bad("bad-map-key", key,
                    f"{label} set attached to {key!r}, which is not an activity")
            for e in members:
                if e not in declared_exc:
                    bad("undeclared-exception", key,
                        f"{label}({key}) references undeclared exception {e!r}")

    thrown = {e for members in w.throw.values() for e in members}
    for e in w.exceptions:
        expected = (ExceptionOrigin.INTERNAL if e.name in thrown
                    else ExceptionOrigin.EXTERNAL)
        if e.origin is not expected:
            bad("origin-mismatch", e.name,
                f"exception {e.name} marked {e.origin.value} but is {expected.value}")

    if len(starts) == 1 and ends:
        reached = {starts[0]}
        frontier = [starts[0]]
        succ: dict[str, list[str]] = {}
        for t in w.transitions:
            succ.setdefault(t.source, []).append(t.target)
        while frontier:
            cur = frontier.pop()
            for nxt in succ.get(cur, ()):
                if nxt not in reached:
                    reached.add(nxt)
                    frontier.append(nxt)
        if not any(e in reached for e in ends):
            bad("no-path", starts[0], "no path from start to any end place")

    return out
