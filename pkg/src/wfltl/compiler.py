"""Translation of workflows into LTL axiom sets.

Every place contributes activity/transition alternation rules; gateways add
exclusivity, synchronization and punctuality constraints; end places are
absorbing. Exceptions contribute punctuality or persist-until-caught axioms,
probe-triggered divergence, necessary conditions for infinite executions, and
throw-side necessary conditions. The model formula is the initial condition
conjoined with the G-closure of all other axioms.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .ltl import (
    And,
    Eventually,
    Formula,
    Globally,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Prev,
    Prop,
    Since,
    Until,
    conj,
    disj,
    pretty,
)
from .workflow import (
    ExceptionDuration,
    ExceptionOrigin,
    PlaceKind,
    Workflow,
    in_set,
    out_set,
    validate,
)


class RuleTag(Enum):
    ACT_OUT = "ActOut"
    ACT_IN = "ActIn"
    COND_EXCL = "CondExcl"
    COND_PUNCT = "CondPunct"
    SPLIT_SYNC = "SplitSync"
    JOIN_SYNC = "JoinSync"
    GATEWAY_PUNCT = "GatewayPunct"
    END_STABLE = "EndStable"
    EXC_PUNCTUAL = "ExcPunctual"
    EXC_PERMANENT_CATCH = "ExcPermanentCatch"
    PROBE_ABORT = "ProbeAbort"
    LOOP_NEC_PUNCT = "LoopNecPunct"
    LOOP_NEC_PERM = "LoopNecPerm"
    THROW_INTERNAL = "ThrowInternal"
    THROW_EXTERNAL = "ThrowExternal"
    INITIAL = "Initial"


@dataclass(frozen=True)
class Provenance:
    tag: RuleTag
    subject: str


@dataclass(frozen=True)
class CompilationUnit:
    axioms: tuple[tuple[Formula, Provenance], ...]
    places: tuple[tuple[str, PlaceKind], ...]
    transition_names: tuple[str, ...]
    exception_names: tuple[str, ...]

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.places) | \
            frozenset(self.transition_names) | frozenset(self.exception_names)


class InvalidWorkflowError(ValueError):
    def __init__(self, violations):
        lines = "; ".join(v.message for v in violations)
        super().__init__(f"workflow is structurally invalid: {lines}")
        self.violations = violations


def _exc_ordered(w: Workflow, members: frozenset[str]) -> list[str]:
    return [e for e in w.exception_names() if e in members]


def _divergence_antecedents(w: Workflow) -> list[str]:
    """Places whose eternal activity needs a justifying failure.

    Activities proper, plus the start place: without the start instance a
    trace could idle in the initial place forever, which would wrongly
    satisfy "never terminates" scenarios with no failure at all. End places
    are absorbing by design and gateways are already forced punctual.
    """
    return [n for n, k in w.places
            if k in (PlaceKind.ACTIVITY, PlaceKind.START)]


def _uncaught(w: Workflow, place: str, exc: str) -> Formula:
    """exc is live at place with no catcher of exc running."""
    parts: list[Formula] = [Prop(place), Prop(exc)]
    parts += [Not(Prop(b)) for b in w.catchers(exc)]
    return conj(parts)


def compile_exceptions(w: Workflow) -> list[tuple[Formula, Provenance]]:
    """Axioms for exception behavior; requires a structurally valid workflow."""
    problems = validate(w)
    if problems:
        raise InvalidWorkflowError(problems)
    out: list[tuple[Formula, Provenance]] = []
    activities = w.activities()

    punctual = [e for e in w.exceptions if e.duration is ExceptionDuration.PUNCTUAL]
    permanent = [e for e in w.exceptions if e.duration is ExceptionDuration.PERMANENT]

    for e in punctual:
        out.append((Implies(Prop(e.name), Not(Next(Prop(e.name)))),
                    Provenance(RuleTag.EXC_PUNCTUAL, e.name)))

    for e in permanent:
        caught = disj([Until(Prop(e.name), Prop(a)) for a in w.catchers(e.name)])
        axiom = Implies(Prop(e.name), Iff(Not(Globally(Prop(e.name))), caught))
        out.append((axiom, Provenance(RuleTag.EXC_PERMANENT_CATCH, e.name)))

    for a in activities:
        for e in _exc_ordered(w, w.probe_of(a)):
            out.append((Implies(_uncaught(w, a, e), Globally(Prop(a))),
                        Provenance(RuleTag.PROBE_ABORT, a)))

    # Necessary conditions for a place to run forever. The consequents range
    # over activities only and are shared across all antecedent instances.
    def probe_term(c: str) -> Formula:
        members = _exc_ordered(w, w.probe_of(c))
        inner = disj([conj([Prop(e)] + [Not(Prop(b)) for b in w.catchers(e)])
                      for e in members])
        return Since(Prop(c), And(Prop(c), inner))

    any_unhandled = Eventually(disj([probe_term(c) for c in activities]))
    perm_pairs = [
        (c, e)
        for c in activities
        for e in _exc_ordered(w, w.probe_of(c))
        if dict((x.name, x.duration) for x in w.exceptions)[e]
        is ExceptionDuration.PERMANENT
    ]
    forever_unhandled = Eventually(
        disj([Globally(_uncaught(w, c, e)) for c, e in perm_pairs]))
    for a in _divergence_antecedents(w):
        out.append((Implies(Globally(Prop(a)), any_unhandled),
                    Provenance(RuleTag.LOOP_NEC_PUNCT, a)))
    for a in _divergence_antecedents(w):
        out.append((Implies(Globally(Prop(a)), forever_unhandled),
                    Provenance(RuleTag.LOOP_NEC_PERM, a)))

    # Throw-side necessary conditions.
    for e in w.exceptions:
        if e.origin is ExceptionOrigin.INTERNAL:
            sources = disj([Prop(b) for b in w.throwers(e.name)])
            tag = RuleTag.THROW_INTERNAL
        else:
            sources = disj([Prop(b) for b in activities])
            tag = RuleTag.THROW_EXTERNAL
        if e.duration is ExceptionDuration.PUNCTUAL:
            axiom = Implies(Prop(e.name), sources)
        else:
            axiom = Implies(Prop(e.name),
                            Since(Prop(e.name), And(Prop(e.name), sources)))
        out.append((axiom, Provenance(tag, e.name)))

    return out


def compile_workflow(w: Workflow) -> CompilationUnit:
    """Compile a validated workflow into its LTL axiom list."""
    problems = validate(w)
    if problems:
        raise InvalidWorkflowError(problems)

    axioms: list[tuple[Formula, Provenance]] = []
    start = next(n for n, k in w.places if k is PlaceKind.START)

    initial = conj(
        [Prop(start)]
        + [Not(Prop(n)) for n, _ in w.places if n != start]
        + [Not(Prop(t.name)) for t in w.transitions])
    axioms.append((initial, Provenance(RuleTag.INITIAL, start)))

    for name, kind in w.places:
        a = Prop(name)
        ins = in_set(w, name)
        outs = out_set(w, name)
        if ins:
            t_in = disj([Prop(t.name) for t in ins])
            axioms.append((Implies(a, Since(And(a, Not(t_in)), t_in)),
                           Provenance(RuleTag.ACT_IN, name)))
            for t in ins:
                axioms.append((Implies(Prop(t.name), And(Next(a), Not(a))),
                               Provenance(RuleTag.ACT_IN, name)))
        if outs:
            t_out = disj([Prop(t.name) for t in outs])
            axioms.append(
                (Implies(a, Or(Until(And(a, Not(t_out)), t_out), Globally(a))),
                 Provenance(RuleTag.ACT_OUT, name)))
            for t in outs:
                axioms.append((Implies(Prop(t.name), And(Prev(a), Not(a))),
                               Provenance(RuleTag.ACT_OUT, name)))
        if kind is PlaceKind.CONDITIONAL:
            if len(outs) == 2:
                axioms.append(
                    (Implies(Prop(outs[0].name), Not(Prop(outs[1].name))),
                     Provenance(RuleTag.COND_EXCL, name)))
            axioms.append((Implies(a, And(Not(Prev(a)), Not(Next(a)))),
                           Provenance(RuleTag.COND_PUNCT, name)))
        if kind is PlaceKind.SPLIT_JOIN:
            if len(outs) >= 2:
                pairs, tag = outs, RuleTag.SPLIT_SYNC
            else:
                pairs, tag = ins, RuleTag.JOIN_SYNC
            for t1, t2 in combinations(pairs, 2):
                axioms.append((Iff(Prop(t1.name), Prop(t2.name)),
                               Provenance(tag, name)))
            axioms.append((Implies(a, And(Not(Prev(a)), Not(Next(a)))),
                           Provenance(RuleTag.GATEWAY_PUNCT, name)))
        if kind is PlaceKind.END:
            axioms.append((Implies(a, Globally(a)),
                           Provenance(RuleTag.END_STABLE, name)))

    axioms.extend(compile_exceptions(w))

    return CompilationUnit(
        axioms=tuple(axioms),
        places=w.places,
        transition_names=tuple(t.name for t in w.transitions),
        exception_names=w.exception_names(),
    )


def model_formula(cu: CompilationUnit) -> Formula:
    """Initial condition conjoined with the globally-closed axiom set."""
    initial = conj([f for f, p in cu.axioms if p.tag is RuleTag.INITIAL])
    rest = conj([f for f, p in cu.axioms if p.tag is not RuleTag.INITIAL])
    return And(initial, Globally(rest))


def emit_ltl(cu: CompilationUnit) -> str:
    """Axiom listing: a provenance comment line, then the axiom, per axiom."""
    lines = []
    for f, prov in cu.axioms:
        lines.append(f"# {prov.tag.value} {prov.subject}")
        lines.append(pretty(f))
    return "\n".join(lines) + "\n"
