import random

import pytest

import wfltl
from wfltl.workflow import (
    ExceptionDuration,
    ExceptionOrigin,
    PlaceKind,
    Transition,
    UnknownPlaceError,
    Workflow,
    WorkflowParseError,
    in_set,
    out_set,
    parse_workflow,
    print_workflow,
    validate,
)

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


def test_parse_minimal():
    w = parse_workflow(MINIMAL)
    assert len(w.places) == 3
    assert len(w.transitions) == 2
    assert w.kind_of("A") is PlaceKind.ACTIVITY
    assert validate(w) == []


def test_parse_case_study(case_study):
    w = case_study
    assert len(w.activities()) == 10
    assert w.throw_of("InternalCreditCheck") == {"hf", "sf"}
    assert w.throw_of("Ship") == {"tf"}
    assert w.catch_of("Recovery") == {"sf"}
    assert w.catch_of("Reject2") == {"tf"}
    assert w.probe_of("Bill") == {"hf", "sf", "tf"}
    assert w.probe_of("Ship") == {"hf"}
    durations = {e.name: e.duration for e in w.exceptions}
    assert durations == {
        "hf": ExceptionDuration.PERMANENT,
        "sf": ExceptionDuration.PERMANENT,
        "tf": ExceptionDuration.PUNCTUAL,
    }
    assert all(e.origin is ExceptionOrigin.INTERNAL for e in w.exceptions)
    assert validate(w) == []


def test_duplicate_name_is_parse_error():
    src = MINIMAL + "trans A : start -> end\n"
    with pytest.raises(WorkflowParseError) as err:
        parse_workflow(src)
    assert "duplicate" in str(err.value)
    assert err.value.line > 0


def test_undeclared_references_are_parse_errors():
    with pytest.raises(WorkflowParseError, match="undeclared place"):
        parse_workflow("start s\ntrans t : s -> nowhere\n")
    with pytest.raises(WorkflowParseError, match="undeclared exception"):
        parse_workflow(MINIMAL + "throw A { ghost }\n")
    with pytest.raises(WorkflowParseError, match="expected"):
        parse_workflow("trans t :\n")


def test_validate_end_with_outgoing():
    w = parse_workflow(MINIMAL + "trans t_back : end -> A\n")
    codes = [v.code for v in validate(w)]
    assert codes == ["end-out-degree"]


def test_validate_unreachable_and_no_path():
    src = """
    start start
    activity A
    activity B
    end end
    trans t1 : start -> B
    trans t2 : B -> start
    trans t3 : A -> end
    """
    w = parse_workflow(src)
    violations = validate(w)
    assert len(violations) == 2
    assert {v.code for v in violations} == {"no-in", "no-path"}
    assert {v.subject for v in violations} == {"A", "start"}


def test_validate_self_loop():
    w = parse_workflow(MINIMAL + "trans t_loop : A -> A\n")
    assert [v.code for v in validate(w)] == ["self-loop"]


def test_validate_gateway_arities():
    src = """
    start start
    cond c
    activity A
    end end
    trans t1 : start -> c
    trans t2 : c -> A
    trans t3 : A -> end
    """
    w = parse_workflow(src)
    assert [v.code for v in validate(w)] == ["cond-arity"]
    src = """
    start start
    splitjoin s
    activity A
    end end
    trans t1 : start -> s
    trans t2 : s -> A
    trans t3 : A -> end
    """
    w = parse_workflow(src)
    assert [v.code for v in validate(w)] == ["split-arity"]


def test_validate_maps_on_non_activity():
    src = MINIMAL + "exception e punctual\nthrow start { e }\n"
    w = parse_workflow(src)
    assert [v.code for v in validate(w)] == ["bad-map-key"]


def test_validate_start_end_cardinality():
    w = parse_workflow("activity A\nactivity B\ntrans t : A -> B\ntrans u : B -> A\n")
    codes = {v.code for v in validate(w)}
    assert "missing-start" in codes and "missing-end" in codes


def test_validate_built_workflow_origin_and_duplicates():
    from wfltl.workflow import ExceptionDecl

    w = Workflow(
        places=(("s", PlaceKind.START), ("A", PlaceKind.ACTIVITY), ("e", PlaceKind.END)),
        transitions=(Transition("t1", "s", "A"), Transition("t2", "A", "e")),
        exceptions=(),
    )
    assert validate(w) == []

    w2 = Workflow(
        places=w.places,
        transitions=w.transitions,
        exceptions=(ExceptionDecl("x", ExceptionDuration.PUNCTUAL,
                                  ExceptionOrigin.INTERNAL),),
    )
    assert [v.code for v in validate(w2)] == ["origin-mismatch"]


def test_in_out_sets(case_study):
    w = parse_workflow(MINIMAL)
    assert [t.name for t in out_set(w, "start")] == ["t_start_A"]
    assert [t.name for t in in_set(w, "end")] == ["t_A_end"]
    assert [t.name for t in out_set(case_study, "par_start")] == ["t1", "t2"]
    assert {t.target for t in out_set(case_study, "par_start")} == {"Bill", "Ship"}
    with pytest.raises(UnknownPlaceError):
        out_set(w, "ghost")


def test_in_out_sets_partition_transitions(case_study):
    w = case_study
    seen_out, seen_in = [], []
    for name in w.place_names():
        seen_out += [t.name for t in out_set(w, name)]
        seen_in += [t.name for t in in_set(w, name)]
    all_names = [t.name for t in w.transitions]
    assert sorted(seen_out) == sorted(all_names)
    assert sorted(seen_in) == sorted(all_names)


def rand_workflow(rng: random.Random) -> Workflow:
    n_act = rng.randrange(1, 6)
    acts = [f"A{i}" for i in range(n_act)]
    places = [("start", PlaceKind.START)]
    places += [(a, PlaceKind.ACTIVITY) for a in acts]
    places.append(("end", PlaceKind.END))
    chain = ["start"] + acts + ["end"]
    transitions = [
        Transition(f"t{i}", chain[i], chain[i + 1]) for i in range(len(chain) - 1)
    ]
    from wfltl.workflow import ExceptionDecl

    n_exc = rng.randrange(0, 3)
    excs, throw, catch, probe = [], {}, {}, {}
    for i in range(n_exc):
        name = f"e{i}"
        thrower = rng.choice(acts)
        throw.setdefault(thrower, set()).add(name)
        if rng.random() < 0.5:
            catch.setdefault(rng.choice(acts), set()).add(name)
        if rng.random() < 0.5:
            probe.setdefault(rng.choice(acts), set()).add(name)
        excs.append(ExceptionDecl(
            name,
            rng.choice([ExceptionDuration.PUNCTUAL, ExceptionDuration.PERMANENT]),
            ExceptionOrigin.INTERNAL))
    return Workflow(
        places=tuple(places),
        transitions=tuple(transitions),
        exceptions=tuple(excs),
        throw={k: frozenset(v) for k, v in throw.items()},
        catch={k: frozenset(v) for k, v in catch.items()},
        probe={k: frozenset(v) for k, v in probe.items()},
    )


def test_print_parse_roundtrip(case_study):
    rng = random.Random(23)
    for w in [parse_workflow(MINIMAL), case_study] + [rand_workflow(rng) for _ in range(50)]:
        assert parse_workflow(print_workflow(w)) == w
