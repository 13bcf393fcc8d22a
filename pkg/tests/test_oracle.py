import random

import pytest
from helpers import rand_formula, rand_trace

import wfltl
from wfltl.bsc import CheckConfig, Sat, check
from wfltl.compiler import compile_workflow, model_formula
from wfltl.ltl import (
    And,
    Eventually,
    Globally,
    LassoTrace,
    Not,
    Prop,
    evaluate,
    parse_formula,
)
from wfltl.oracle import (
    EnumerationLimitError,
    EnumerationSpec,
    _sat_block,
    _trace_of_index,
    enumerate_sat,
    explain,
)
from wfltl.workflow import parse_workflow

P = Prop("p")


def test_limits_enforced():
    with pytest.raises(EnumerationLimitError):
        EnumerationSpec(tuple("abcdefghi"), 4)
    with pytest.raises(EnumerationLimitError):
        EnumerationSpec(("p",), 9)
    with pytest.raises(ValueError):
        enumerate_sat(Prop("zz"), EnumerationSpec(("p",), 3))


def test_canonical_first_witness():
    out = enumerate_sat(Globally(P), EnumerationSpec(("p",), 2))
    assert out == LassoTrace.make([], [["p"]])


def test_contradiction_yields_none():
    assert enumerate_sat(And(P, Not(P)), EnumerationSpec(("p",), 3)) is None


def test_agreement_with_check():
    f = Eventually(Prop("end"))
    spec = EnumerationSpec(("end", "other"), 4)
    got = enumerate_sat(f, spec)
    assert got is not None
    assert isinstance(check(f, CheckConfig(k=3)), Sat)


def naive_enumerate(formula, alphabet, max_total):
    """Reference loop: same canonical order, one trace at a time."""
    n = len(alphabet)
    for a in range(max_total):
        for b in range(1, max_total - a + 1):
            for v in range(1 << (n * (a + b))):
                t = _trace_of_index(alphabet, a, b, v)
                if evaluate(formula, t, 0):
                    return t
    return None


def test_vectorized_matches_naive_order():
    rng = random.Random(61)
    alphabet = ("p", "q")
    for _ in range(60):
        f = rand_formula(rng, 3, alphabet)
        spec = EnumerationSpec(alphabet, 3)
        assert enumerate_sat(f, spec) == naive_enumerate(f, alphabet, 3)


def test_block_eval_matches_scalar():
    rng = random.Random(67)
    alphabet = ("p", "q")
    for _ in range(40):
        f = rand_formula(rng, 3, alphabet)
        a, b = rng.choice([(0, 1), (1, 1), (0, 2), (2, 1), (1, 2)])
        mask = _sat_block(f, alphabet, a, b)
        for v in range(1 << (len(alphabet) * (a + b))):
            t = _trace_of_index(alphabet, a, b, v)
            assert bool((mask >> v) & 1) == evaluate(f, t, 0)


def test_empty_alphabet_formulas():
    from wfltl.ltl import TRUE
    spec = EnumerationSpec((), 2)
    out = enumerate_sat(TRUE, spec)
    assert out == LassoTrace.make([], [[]])


# ---------------------------------------------------------------------------
# explain


@pytest.fixture(scope="module")
def case_unit():
    w = parse_workflow(wfltl.case_study_path().read_text())
    return compile_workflow(w)


def test_explain_nominal_run(case_unit):
    out = check(model_formula(case_unit), CheckConfig(k=20))
    assert isinstance(out, Sat)
    report = explain(out.witness, case_unit)
    text = report.text()
    assert "pos" in text
    if not report.divergent:
        assert all("end" in s for s in out.witness.loop)


def test_explain_rejects_invalid_witness(case_unit):
    from wfltl.oracle import InvalidWitnessError

    junk = LassoTrace.make([["Bill"]], [["Ship"]])
    with pytest.raises(InvalidWitnessError):
        explain(junk, case_unit)


def test_explain_never_flags_end_only_loop(case_unit):
    out = check(model_formula(case_unit), CheckConfig(k=20))
    assert isinstance(out, Sat)
    report = explain(out.witness, case_unit)
    if all(s == frozenset({"end"}) for s in out.witness.loop):
        assert report.divergent == ()


def test_empty_loop_rejected():
    with pytest.raises(ValueError):
        LassoTrace.make([["p"]], [])
