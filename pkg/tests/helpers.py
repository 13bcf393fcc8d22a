"""Shared test utilities: random formula/trace generators and trace checks."""

import random

from wfltl.ltl import (
    FALSE,
    TRUE,
    And,
    Eventually,
    Globally,
    LassoTrace,
    Next,
    Not,
    Or,
    Prev,
    Prop,
    Release,
    Since,
    Trigger,
    Until,
)


def rand_formula(rng: random.Random, depth: int, props=("p", "q", "r")):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.8:
            return Prop(rng.choice(props))
        return TRUE if r < 0.9 else FALSE
    kind = rng.randrange(11)
    a = rand_formula(rng, depth - 1, props)
    b = rand_formula(rng, depth - 1, props)
    return [
        lambda: Not(a), lambda: And(a, b), lambda: Or(a, b),
        lambda: Next(a), lambda: Prev(a), lambda: Until(a, b),
        lambda: Since(a, b), lambda: Release(a, b), lambda: Trigger(a, b),
        lambda: Eventually(a), lambda: Globally(a),
    ][kind]()


def rand_trace(rng: random.Random, props=("p", "q", "r"),
               max_prefix=2, max_loop=3) -> LassoTrace:
    def sets(n):
        return [frozenset(x for x in props if rng.random() < 0.5) for _ in range(n)]

    return LassoTrace(tuple(sets(rng.randrange(0, max_prefix + 1))),
                      tuple(sets(rng.randrange(1, max_loop + 1))))
