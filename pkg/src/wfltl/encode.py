"""Propositional encoding of bounded lasso satisfiability.

A formula is satisfiable within bound k iff it has an ultimately periodic
model whose finite representation uses positions 0..k, with the successor of
position k identified with a loop-start position j chosen by an exactly-one
block of selector variables l_0..l_k (prefix = positions before j, loop =
positions j..k).

Future operators follow the standard bounded encoding: pointwise expansion
clauses with the seam at position k guarded by the selectors, plus an
eventuality constraint per Until forcing its right argument somewhere inside
the loop whenever the Until survives the seam. Past operators are computed
forward from position 0; because their values on the loop need not coincide
between traversals, every subformula containing past operators is replicated
for as many virtual loop traversals as its past-operator nesting depth, after
which the values provably stabilize. Crossing the seam advances the
traversal index; the final traversal loops onto itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ltl import (
    FALSE,
    TRUE,
    And,
    FalseConst,
    Formula,
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
    children,
    to_nnf,
)

_VAR_LIMIT = 2**31 - 1


class BoundOverflowError(ValueError):
    """The requested bound would overflow variable index arithmetic."""


@dataclass
class CnfInstance:
    """CNF with a decode map back to (proposition, position) and selectors."""

    num_vars: int
    clauses: list[tuple[int, ...]]
    k: int
    decode: dict[tuple, int] = field(default_factory=dict)

    def prop_var(self, name: str, position: int) -> int:
        return self.decode[("prop", name, position)]

    def loop_var(self, j: int) -> int:
        return self.decode[("loop", j)]

    def prop_names(self) -> list[str]:
        return sorted({key[1] for key in self.decode if key[0] == "prop"})


def fold_constants(f: Formula) -> Formula:
    """Encoder-side constant propagation over a formula in NNF."""
    memo: dict[Formula, Formula] = {}

    def fold(g: Formula) -> Formula:
        got = memo.get(g)
        if got is not None:
            return got
        out = _fold1(g, fold)
        memo[g] = out
        return out

    return fold(f)


def _fold1(g, fold):
    if isinstance(g, (Prop, TrueConst, FalseConst)):
        return g
    if isinstance(g, Not):  # NNF: negation sits on a proposition
        inner = fold(g.arg)
        if isinstance(inner, TrueConst):
            return FALSE
        if isinstance(inner, FalseConst):
            return TRUE
        return Not(inner)
    if isinstance(g, And):
        a, b = fold(g.left), fold(g.right)
        if isinstance(a, FalseConst) or isinstance(b, FalseConst):
            return FALSE
        if isinstance(a, TrueConst):
            return b
        if isinstance(b, TrueConst):
            return a
        return And(a, b)
    if isinstance(g, Or):
        a, b = fold(g.left), fold(g.right)
        if isinstance(a, TrueConst) or isinstance(b, TrueConst):
            return TRUE
        if isinstance(a, FalseConst):
            return b
        if isinstance(b, FalseConst):
            return a
        return Or(a, b)
    if isinstance(g, Next):
        a = fold(g.arg)
        if isinstance(a, (TrueConst, FalseConst)):
            return a
        return Next(a)
    if isinstance(g, Prev):
        a = fold(g.arg)
        if isinstance(a, FalseConst):
            return FALSE
        return Prev(a)  # Y true is position-dependent, keep it
    if isinstance(g, WeakPrev):
        a = fold(g.arg)
        if isinstance(a, TrueConst):
            return TRUE
        return WeakPrev(a)  # Z false is position-dependent, keep it
    if isinstance(g, Until):
        a, b = fold(g.left), fold(g.right)
        if isinstance(b, (TrueConst, FalseConst)):
            return b
        if isinstance(a, FalseConst):
            return b
        return Until(a, b)
    if isinstance(g, Release):
        a, b = fold(g.left), fold(g.right)
        if isinstance(b, (TrueConst, FalseConst)):
            return b
        if isinstance(a, TrueConst):
            return b
        return Release(a, b)
    if isinstance(g, Since):
        a, b = fold(g.left), fold(g.right)
        if isinstance(b, (TrueConst, FalseConst)):
            return b
        if isinstance(a, FalseConst):
            return b
        return Since(a, b)
    if isinstance(g, Trigger):
        a, b = fold(g.left), fold(g.right)
        if isinstance(b, (TrueConst, FalseConst)):
            return b
        if isinstance(a, TrueConst):
            return b
        return Trigger(a, b)
    raise TypeError(f"not an NNF node: {g!r}")


def _is_literal(g: Formula) -> bool:
    return isinstance(g, (Prop, TrueConst, FalseConst)) or (
        isinstance(g, Not) and isinstance(g.arg, Prop))


class _Encoder:
    def __init__(self, root: Formula, k: int):
        self.k = k
        self.clauses: list[tuple[int, ...]] = []
        self.nvars = 0
        self.decode: dict[tuple, int] = {}

        self.nodes: list[Formula] = []
        seen: set[Formula] = set()

        def collect(g: Formula) -> None:
            if g in seen:
                return
            seen.add(g)
            for c in children(g):
                collect(c)
            self.nodes.append(g)

        collect(root)
        self.pd: dict[Formula, int] = {}
        for g in self.nodes:
            d = max((self.pd[c] for c in children(g)), default=0)
            if isinstance(g, (Prev, WeakPrev, Since, Trigger)):
                d += 1
            self.pd[g] = d

        composite = [g for g in self.nodes if not _is_literal(g)]
        props = sorted({g.name for g in self.nodes if isinstance(g, Prop)})
        projected = (
            2 * (k + 1)  # selectors and in-loop flags
            + len(props) * (k + 1)
            + sum((self.pd[g] + 1) * (k + 1) for g in composite)
            + sum(k + 1 for g in composite if isinstance(g, Until))
            + 2)
        if projected > _VAR_LIMIT:
            raise BoundOverflowError(
                f"bound k={k} needs ~{projected} variables, beyond the "
                f"supported limit {_VAR_LIMIT}")

        self.true_var = self._new(("const", "true"))
        self.clauses.append((self.true_var,))
        self.loop = [self._new(("loop", j)) for j in range(k + 1)]
        self.inloop = [self._new(("inloop", i)) for i in range(k + 1)]
        self.prop_var = {
            (p, i): self._new(("prop", p, i))
            for p in props for i in range(k + 1)}
        self.sub_var: dict[tuple[int, int, int], int] = {}
        self.node_id = {g: n for n, g in enumerate(self.nodes)}
        for g in self.nodes:
            if _is_literal(g):
                continue
            nid = self.node_id[g]
            for r in range(self.pd[g] + 1):
                for i in range(k + 1):
                    self.sub_var[(nid, i, r)] = self._new(("sub", nid, i, r))

        self._exactly_one_loop()
        self._inloop_chain()
        for g in self.nodes:
            if not _is_literal(g):
                self._emit(g)
        self.clauses.append((self.lit(root, 0, 0),))

    def _new(self, key: tuple) -> int:
        self.nvars += 1
        self.decode[key] = self.nvars
        return self.nvars

    def lit(self, g: Formula, i: int, r: int) -> int:
        if isinstance(g, TrueConst):
            return self.true_var
        if isinstance(g, FalseConst):
            return -self.true_var
        if isinstance(g, Prop):
            return self.prop_var[(g.name, i)]
        if isinstance(g, Not):
            return -self.prop_var[(g.arg.name, i)]
        return self.sub_var[(self.node_id[g], i, min(r, self.pd[g]))]

    def add(self, *lits: int) -> None:
        self.clauses.append(lits)

    def _exactly_one_loop(self) -> None:
        self.add(*self.loop)
        for a in range(self.k + 1):
            for b in range(a + 1, self.k + 1):
                self.add(-self.loop[a], -self.loop[b])

    def _inloop_chain(self) -> None:
        self.add(-self.inloop[0], self.loop[0])
        self.add(self.inloop[0], -self.loop[0])
        for i in range(1, self.k + 1):
            v, l, prev = self.inloop[i], self.loop[i], self.inloop[i - 1]
            self.add(-v, l, prev)
            self.add(v, -l)
            self.add(v, -prev)

    # -- per-node clause emission -------------------------------------------

    def _emit(self, g: Formula) -> None:
        k = self.k
        if isinstance(g, And):
            for r in range(self.pd[g] + 1):
                for i in range(k + 1):
                    v = self.lit(g, i, r)
                    a, b = self.lit(g.left, i, r), self.lit(g.right, i, r)
                    self.add(-v, a)
                    self.add(-v, b)
                    self.add(v, -a, -b)
        elif isinstance(g, Or):
            for r in range(self.pd[g] + 1):
                for i in range(k + 1):
                    v = self.lit(g, i, r)
                    a, b = self.lit(g.left, i, r), self.lit(g.right, i, r)
                    self.add(-v, a, b)
                    self.add(v, -a)
                    self.add(v, -b)
        elif isinstance(g, Next):
            for r in range(self.pd[g] + 1):
                for i in range(k):
                    v = self.lit(g, i, r)
                    c = self.lit(g.arg, i + 1, r)
                    self.add(-v, c)
                    self.add(v, -c)
                v = self.lit(g, k, r)
                for j in range(k + 1):
                    c = self.lit(g.arg, j, r + 1)
                    self.add(-self.loop[j], -v, c)
                    self.add(-self.loop[j], v, -c)
        elif isinstance(g, (Prev, WeakPrev)):
            weak = isinstance(g, WeakPrev)
            v0 = self.lit(g, 0, 0)
            self.add(v0 if weak else -v0)
            for i in range(1, k + 1):
                v = self.lit(g, i, 0)
                c = self.lit(g.arg, i - 1, 0)
                self.add(-v, c)
                self.add(v, -c)
            for r in range(1, self.pd[g] + 1):
                for i in range(k + 1):
                    v = self.lit(g, i, r)
                    l = self.loop[i]
                    seam = self.lit(g.arg, k, r - 1)
                    self.add(-l, -v, seam)
                    self.add(-l, v, -seam)
                    if i >= 1:
                        c = self.lit(g.arg, i - 1, r)
                        self.add(l, -v, c)
                        self.add(l, v, -c)
        elif isinstance(g, (Since, Trigger)):
            self._emit_past_binary(g)
        elif isinstance(g, (Until, Release)):
            self._emit_future_binary(g)
        else:
            raise TypeError(f"unexpected node in encoder: {g!r}")

    def _emit_past_binary(self, g: Formula) -> None:
        k = self.k
        since = isinstance(g, Since)
        v0 = self.lit(g, 0, 0)
        b0 = self.lit(g.right, 0, 0)
        self.add(-v0, b0)
        self.add(v0, -b0)
        for r in range(self.pd[g] + 1):
            for i in range(k + 1):
                if r == 0 and i == 0:
                    continue
                v = self.lit(g, i, r)
                a = self.lit(g.left, i, r)
                b = self.lit(g.right, i, r)
                cases = []
                if r >= 1:
                    cases.append((self.loop[i], self.lit(g, k, r - 1)))
                if i >= 1:
                    guard = -self.loop[i] if r >= 1 else 0
                    cases.append((guard, self.lit(g, i - 1, r)))
                for guard, w in cases:
                    gclause = (-guard,) if guard else ()
                    if since:  # v <-> b | (a & w)
                        self.add(*gclause, -v, b, a)
                        self.add(*gclause, -v, b, w)
                        self.add(*gclause, v, -b)
                        self.add(*gclause, v, -a, -w)
                    else:  # trigger: v <-> b & (a | w)
                        self.add(*gclause, -v, b)
                        self.add(*gclause, -v, a, w)
                        self.add(*gclause, v, -b, -a)
                        self.add(*gclause, v, -b, -w)

    def _emit_future_binary(self, g: Formula) -> None:
        k = self.k
        until = isinstance(g, Until)
        top = self.pd[g]
        for r in range(top + 1):
            for i in range(k + 1):
                v = self.lit(g, i, r)
                a = self.lit(g.left, i, r)
                b = self.lit(g.right, i, r)
                if i < k:
                    succs = [(0, self.lit(g, i + 1, r))]
                else:
                    succs = [(self.loop[j], self.lit(g, j, r + 1))
                             for j in range(k + 1)]
                for guard, w in succs:
                    gclause = (-guard,) if guard else ()
                    if until:  # v <-> b | (a & w)
                        self.add(*gclause, -v, b, a)
                        self.add(*gclause, -v, b, w)
                        self.add(*gclause, v, -b)
                        self.add(*gclause, v, -a, -w)
                    else:  # release: v <-> b & (a | w)
                        self.add(*gclause, -v, b)
                        self.add(*gclause, -v, a, w)
                        self.add(*gclause, v, -b, -a)
                        self.add(*gclause, v, -b, -w)
        if until:
            # Eventuality: if the Until holds across the seam of the final
            # traversal, its right argument must hold inside the loop.
            nid = self.node_id[g]
            marks = []
            for i in range(k + 1):
                m = self._new(("uev", nid, i))
                self.add(-m, self.inloop[i])
                self.add(-m, self.lit(g.right, i, top))
                marks.append(m)
            self.add(-self.lit(g, k, top), *marks)


def encode(formula: Formula, k: int) -> CnfInstance:
    """Encode bounded lasso satisfiability of the formula at bound k."""
    if k < 1:
        raise ValueError("bound k must be at least 1")
    nnf = fold_constants(to_nnf(formula))
    enc = _Encoder(nnf, k)
    return CnfInstance(num_vars=enc.nvars, clauses=enc.clauses, k=k,
                       decode=enc.decode)


# ---------------------------------------------------------------------------
# DIMACS and SMT-LIB text formats


def export_dimacs(inst: CnfInstance) -> str:
    """Standard DIMACS CNF; the proposition/selector map rides in comments."""
    out = [f"c wfltl bounded encoding, k={inst.k}"]
    for key, var in inst.decode.items():
        if key[0] == "prop":
            out.append(f"c var {var} = prop {key[1]} @ {key[2]}")
        elif key[0] == "loop":
            out.append(f"c var {var} = loop-start {key[1]}")
    out.append(f"p cnf {inst.num_vars} {len(inst.clauses)}")
    for clause in inst.clauses:
        out.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(out) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[tuple[int, ...]]]:
    num_vars = None
    expected = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[:2] != ["p", "cnf"]:
                raise ValueError(f"line {lineno}: malformed DIMACS header")
            num_vars, expected = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ValueError(f"line {lineno}: clause before header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                if abs(lit) > num_vars:
                    raise ValueError(f"line {lineno}: literal {lit} out of range")
                pending.append(lit)
    if pending:
        raise ValueError("unterminated final clause")
    if num_vars is None:
        raise ValueError("missing DIMACS header")
    if expected is not None and expected != len(clauses):
        raise ValueError(
            f"header declares {expected} clauses, found {len(clauses)}")
    return num_vars, clauses


def export_smtlib(formula: Formula, k: int) -> str:
    """Quantifier-free boolean SMT-LIB 2 text of the bounded encoding."""
    inst = encode(formula, k)
    out = [f"; wfltl bounded encoding, k={k}", "(set-logic QF_UF)"]
    for key, var in inst.decode.items():
        if key[0] == "prop":
            out.append(f"; v{var} = prop {key[1]} @ {key[2]}")
        elif key[0] == "loop":
            out.append(f"; v{var} = loop-start {key[1]}")
    for var in range(1, inst.num_vars + 1):
        out.append(f"(declare-const v{var} Bool)")
    for clause in inst.clauses:
        lits = " ".join(f"v{l}" if l > 0 else f"(not v{-l})" for l in clause)
        if len(clause) == 1:
            out.append(f"(assert {lits})")
        else:
            out.append(f"(assert (or {lits}))")
    out.append("(check-sat)")
    out.append("(get-model)")
    return "\n".join(out) + "\n"


def parse_smtlib(text: str) -> tuple[int, list[tuple[int, ...]]]:
    """Read back the boolean clause subset emitted by export_smtlib."""
    num_vars = 0
    clauses: list[tuple[int, ...]] = []

    def to_lit(tok: str) -> int:
        if not tok.startswith("v") or not tok[1:].isdigit():
            raise ValueError(f"unsupported SMT-LIB atom {tok!r}")
        return int(tok[1:])

    for line in text.splitlines():
        line = line.strip()
        if line.startswith("(declare-const"):
            num_vars += 1
        elif line.startswith("(assert"):
            body = line[len("(assert"):].strip().rstrip(")")
            body = body.replace("(", " ( ").replace(")", " ) ")
            toks = body.split()
            lits: list[int] = []
            i = 0
            if toks and toks[0] == "(" and toks[1] == "or":
                i = 2
            while i < len(toks):
                if toks[i] == "(" and i + 2 < len(toks) and toks[i + 1] == "not":
                    lits.append(-to_lit(toks[i + 2]))
                    i += 4
                elif toks[i] in ("(", ")"):
                    i += 1
                else:
                    lits.append(to_lit(toks[i]))
                    i += 1
            clauses.append(tuple(lits))
    return num_vars, clauses
