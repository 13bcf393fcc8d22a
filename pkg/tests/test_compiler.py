import pytest

import wfltl
from wfltl.compiler import (
    CompilationUnit,
    InvalidWorkflowError,
    Provenance,
    RuleTag,
    compile_exceptions,
    compile_workflow,
    emit_ltl,
    model_formula,
)
from wfltl.ltl import (
    FALSE,
    And,
    Eventually,
    Globally,
    Iff,
    Implies,
    LassoTrace,
    Next,
    Not,
    Or,
    Prev,
    Prop,
    Since,
    Until,
    evaluate,
    parse_formula,
    pretty,
)
from wfltl.workflow import in_set, out_set, parse_workflow

MINIMAL = """
start start
activity A
end end
trans t_start_A : start -> A
trans t_A_end : A -> end
"""


@pytest.fixture(scope="module")
def case_study():
    return parse_workflow(wfltl.case_study_path().read_text())


@pytest.fixture(scope="module")
def unit(case_study):
    return compile_workflow(case_study)


def axiom_set(cu):
    return {f for f, _ in cu.axioms}


def tagged(cu, tag):
    return [f for f, p in cu.axioms if p.tag is tag]


def test_billing_rule_axioms(unit):
    Bill, t1, t3 = Prop("Bill"), Prop("t1"), Prop("t3")
    expected = [
        Implies(Bill, Since(And(Bill, Not(t1)), t1)),
        Implies(t1, And(Next(Bill), Not(Bill))),
        Implies(Bill, Or(Until(And(Bill, Not(t3)), t3), Globally(Bill))),
        Implies(t3, And(Prev(Bill), Not(Bill))),
    ]
    axioms = axiom_set(unit)
    for f in expected:
        assert f in axioms


def test_split_axioms(unit):
    axioms = axiom_set(unit)
    par = Prop("par_start")
    assert Iff(Prop("t1"), Prop("t2")) in axioms
    assert Implies(par, And(Not(Prev(par)), Not(Next(par)))) in axioms
    assert Implies(par, Since(And(par, Not(Prop("t_yes"))), Prop("t_yes"))) in axioms
    assert Iff(Prop("t3"), Prop("t4")) in axioms


def test_conditional_axioms(unit):
    axioms = axiom_set(unit)
    assert Implies(Prop("t_yes"), Not(Prop("t_no"))) in axioms
    sc = Prop("stock_check")
    assert Implies(sc, And(Not(Prev(sc)), Not(Next(sc)))) in axioms
    # merge conditionals keep punctuality but get no exclusivity axiom
    mc = Prop("merge_credit")
    assert Implies(mc, And(Not(Prev(mc)), Not(Next(mc)))) in axioms
    excl_subjects = [p.subject for _, p in unit.axioms if p.tag is RuleTag.COND_EXCL]
    assert "merge_credit" not in excl_subjects


def test_exception_axioms(unit):
    axioms = axiom_set(unit)
    tf, hf, sf = Prop("tf"), Prop("hf"), Prop("sf")
    Bill = Prop("Bill")
    assert Implies(tf, Not(Next(tf))) in axioms
    assert Implies(tf, Prop("Ship")) in axioms
    assert Implies(hf, Iff(Not(Globally(hf)), FALSE)) in axioms
    assert Implies(sf, Iff(Not(Globally(sf)), Until(sf, Prop("Recovery")))) in axioms
    assert Implies(And(Bill, hf), Globally(Bill)) in axioms
    assert Implies(And(And(Bill, tf), Not(Prop("Reject2"))), Globally(Bill)) in axioms
    assert Implies(And(And(Bill, sf), Not(Prop("Recovery"))), Globally(Bill)) in axioms
    assert Implies(hf, Since(hf, And(hf, Prop("InternalCreditCheck")))) in axioms


def test_end_stability(unit):
    assert Implies(Prop("end"), Globally(Prop("end"))) in axiom_set(unit)


def test_divergence_conditions_cover_activities_and_start(unit, case_study):
    subjects = [p.subject for _, p in unit.axioms if p.tag is RuleTag.LOOP_NEC_PUNCT]
    assert set(subjects) == set(case_study.activities()) | {"start"}
    assert len(subjects) == 11
    perm = tagged(unit, RuleTag.LOOP_NEC_PERM)
    assert len(perm) == 11
    # the permanent-divergence consequent lists the three probed pairs
    consequent = perm[0].right
    expected = Eventually(
        Or(Or(Globally(And(Prop("Bill"), Prop("hf"))),
              Globally(And(And(Prop("Bill"), Prop("sf")), Not(Prop("Recovery"))))),
           Globally(And(Prop("Ship"), Prop("hf")))))
    assert consequent == expected


def test_initial_condition(unit, case_study):
    init = tagged(unit, RuleTag.INITIAL)
    assert len(init) == 1
    text = pretty(init[0])
    assert text.startswith("start & !OrderReceipt")
    assert "!tf" not in text  # exceptions are unconstrained at the origin


def test_axiom_count_formula(unit, case_study):
    w = case_study
    count = 1  # initial condition
    for name, kind in w.places:
        ins, outs = in_set(w, name), out_set(w, name)
        if ins:
            count += 1 + len(ins)
        if outs:
            count += 1 + len(outs)
        if kind.value == "cond":
            count += 1 + (1 if len(outs) == 2 else 0)
        if kind.value == "splitjoin":
            n = len(outs) if len(outs) >= 2 else len(ins)
            count += 1 + n * (n - 1) // 2
        if kind.value == "end":
            count += 1
    punctual = [e for e in w.exceptions if e.duration.value == "punctual"]
    permanent = [e for e in w.exceptions if e.duration.value == "permanent"]
    count += len(punctual) + len(permanent)
    count += sum(len(w.probe_of(a)) for a in w.activities())
    count += 2 * (len(w.activities()) + 1)  # divergence conditions incl. start
    count += len(w.exceptions)  # throw-side conditions
    assert len(unit.axioms) == count


def test_compile_deterministic(case_study):
    a = compile_workflow(case_study)
    b = compile_workflow(case_study)
    assert a == b
    assert emit_ltl(a) == emit_ltl(b)


def test_emit_format(unit):
    text = emit_ltl(unit)
    lines = text.splitlines()
    assert "tf -> !(X tf)" in lines
    assert "# ExcPunctual tf" in lines
    idx = lines.index("tf -> !(X tf)")
    assert lines[idx - 1] == "# ExcPunctual tf"
    # every axiom line parses back
    for line in lines:
        if not line.startswith("#"):
            parse_formula(line)


def test_alphabet(unit, case_study):
    w = case_study
    assert unit.alphabet == (set(w.place_names())
                             | {t.name for t in w.transitions}
                             | set(w.exception_names()))


def test_compile_rejects_invalid():
    w = parse_workflow(MINIMAL + "trans t_back : end -> A\n")
    with pytest.raises(InvalidWorkflowError):
        compile_workflow(w)
    with pytest.raises(InvalidWorkflowError):
        compile_exceptions(w)


def test_external_exception_forms():
    src = MINIMAL + "exception ext_p punctual\nexception ext_s permanent\n"
    w = parse_workflow(src)
    axioms = axiom_set(compile_workflow(w))
    A = Prop("A")
    assert Implies(Prop("ext_p"), A) in axioms
    assert Implies(Prop("ext_s"),
                   Since(Prop("ext_s"), And(Prop("ext_s"), A))) in axioms


def test_model_formula_shapes():
    empty = CompilationUnit(axioms=(), places=(), transition_names=(),
                            exception_names=())
    from wfltl.ltl import TRUE
    assert model_formula(empty) == And(TRUE, Globally(TRUE))


def test_minimal_model_admits_hand_built_run():
    w = parse_workflow(MINIMAL)
    cu = compile_workflow(w)
    s = model_formula(cu)
    run = LassoTrace.make(
        [["start"], ["t_start_A"], ["A"], ["t_A_end"]], [["end"]])
    assert evaluate(s, run, 0) is True
    # a run that abandons A without firing its transition violates the model
    bad = LassoTrace.make([["start"], ["t_start_A"], ["A"]], [[]])
    assert evaluate(s, bad, 0) is False
