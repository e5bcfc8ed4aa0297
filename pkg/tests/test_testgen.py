import pytest
from oracles import scenario4_violations

from isoltest import soc
from isoltest.dsl.tp_text import parse_tp
from isoltest.lts import TAU, Lts, ValidationError, visible
from isoltest.scenarios import generation_model, scenario_ctg, scenario_suite
from isoltest.testgen import (
    MATCH,
    REFUSE,
    EmptyCtgError,
    Leaf,
    Obs,
    PAccept,
    Stim,
    TestCase,
    TestPurpose,
    Verdict,
    choices,
    compile_purpose,
    decision_states,
    execute,
    extract_ctg,
    extract_single_test,
    extract_test_suite,
    product,
    run_suite,
    walk,
    worst,
)

W = visible("Write", 1, "secure", "privileged", "data1")
R = visible("Read", 1, "secure", "privileged")
P = visible("Protection", 1, "secure", "privileged", "secure", "privileged")
GW = visible("Grant_Write", 1)
RW = visible("Reject_Write", 1)
GR = visible("Grant_Read", 1, "data1")
GP = visible("Grant_Protection", 1, "secure", "privileged")


def tp(text):
    return parse_tp(text)


def ctg(model, purpose):
    return extract_ctg(product(model, purpose))


# -- purposes ------------------------------------------------------------------------


def test_scenario1_purpose_shape():
    aut = tp(
        "purpose p is select Reject_Read(*) [] Reject_Write(*) [] Reject_Protection(*) end select; accept end purpose"
    ).automaton
    assert len(aut.accept) == 1
    matches = [t for t in aut.transitions if t.kind == MATCH]
    assert len(matches) == 3
    assert {t.dst for t in matches} == set(aut.accept)


def test_refuse_compiles_to_refuse_transition():
    aut = tp("purpose p is select refuse Grant_Write(*) [] Reject_Write(*) end select; accept end purpose").automaton
    assert [t.kind for t in aut.transitions].count(REFUSE) == 1


# -- trivial CTGs ------------------------------------------------------------------------


def test_initially_accepting_purpose():
    model = Lts(2, 0, [(0, W, 1)])
    c = ctg(model, TestPurpose("now", PAccept()))
    assert (c.n_states, c.n_transitions) == (1, 0)
    (t,) = extract_test_suite(c)
    assert t.root == Leaf(Verdict.PASS)
    assert execute(t, model) is Verdict.PASS


def test_linear_ctg_has_no_choice():
    model = Lts(3, 0, [(0, W, 1), (1, GW, 2)])
    c = ctg(model, tp("purpose p is Grant_Write(*); accept end purpose"))
    assert choices(c) == 0
    (t,) = extract_test_suite(c)
    assert t.root == Stim(W, Obs(((GW, Leaf(Verdict.PASS)),)))
    assert execute(t, model) is Verdict.PASS


def test_three_way_choice():
    model = Lts(5, 0, [(0, W, 1), (0, R, 2), (0, P, 3), (1, GW, 4), (2, GR, 4), (3, GP, 4)])
    c = ctg(model, tp("purpose p is select Grant_Write(*) [] Grant_Read(*, *) [] Grant_Protection(*, *, *) end select; accept end purpose"))
    assert choices(c) == 3
    assert decision_states(c) == 1
    suite = extract_test_suite(c)
    assert len(suite) == 3
    assert {t.stimuli()[0] for t in suite} == {W, R, P}


def test_unreachable_goal():
    model = Lts(2, 0, [(0, W, 1)])
    with pytest.raises(EmptyCtgError):
        ctg(model, tp("purpose p is Grant_Read(*, *); accept end purpose"))


def test_refused_label_excluded():
    model = Lts(4, 0, [(0, W, 1), (1, GW, 2), (1, RW, 3), (2, W, 1)])
    c = ctg(model, tp("purpose p is select refuse Grant_Write(*) [] Reject_Write(*) end select; accept end purpose"))
    assert GW not in c.lts.labels
    assert RW in c.lts.labels


def test_unrelated_output_leads_to_inconclusive():
    model = Lts(4, 0, [(0, W, 1), (1, GW, 2), (1, RW, 3)])
    c = ctg(model, tp("purpose p is Reject_Write(*); accept end purpose"))
    assert c.inconclusive_state is not None
    assert any(a == GW and t == c.inconclusive_state for _, a, t in c.lts.edges())


def test_nondeterministic_ctg_rejected():
    model = Lts(4, 0, [(0, W, 1), (0, W, 2), (1, GW, 3), (2, GW, 3)])
    c = ctg(model, tp("purpose p is Grant_Write(*); accept end purpose"))
    with pytest.raises(ValidationError):
        extract_test_suite(c)


def test_worst_verdict():
    assert worst([Verdict.PASS, Verdict.INCONCLUSIVE]) is Verdict.INCONCLUSIVE
    assert worst([Verdict.FAIL, Verdict.PASS]) is Verdict.FAIL
    assert worst([]) is Verdict.PASS


# -- execution -------------------------------------------------------------------------------


def test_missing_output_fails():
    test = TestCase("t", Stim(W, Obs(((GW, Leaf(Verdict.PASS)),))))
    assert execute(test, Lts(2, 0, [(0, W, 1)])) is Verdict.FAIL


def test_unlisted_output_fails():
    test = TestCase("t", Stim(W, Obs(((GW, Leaf(Verdict.PASS)),))))
    assert execute(test, Lts(3, 0, [(0, W, 1), (1, RW, 2)])) is Verdict.FAIL


def test_refused_stimulus_is_inconclusive():
    test = TestCase("t", Stim(W, Obs(((GW, Leaf(Verdict.PASS)),))))
    assert execute(test, Lts(4, 0, [(0, R, 1), (1, GR, 2), (2, W, 3)])) is Verdict.INCONCLUSIVE


def test_internal_moves_are_taken():
    test = TestCase("t", Stim(W, Obs(((GW, Leaf(Verdict.PASS)),))))
    impl = Lts(4, 0, [(0, TAU, 1), (1, W, 2), (2, TAU, 3), (3, GW, 3)])
    assert all(execute(test, impl, seed=s) is Verdict.PASS for s in range(10))


def test_unknown_gate_rejected():
    test = TestCase("t", Stim(visible("Bogus"), Leaf(Verdict.PASS)))
    with pytest.raises(ValidationError):
        execute(test, Lts(2, 0, [(0, W, 1)]))


# -- builtin scenarios -------------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 3, 4])
def test_suite_covers_every_controllable_transition(k):
    c = scenario_ctg(k)
    hit = set()
    for t in scenario_suite(k):
        hit |= walk(c, t)
    assert hit == set(c.controllable_transitions())


def test_scenario1_ctg_counts():
    c = scenario_ctg(1)
    assert (c.n_states, choices(c)) == (183, 384)


def test_ctg_ordering():
    s1, s2, s3 = (scenario_ctg(k) for k in (1, 2, 3))
    assert s1.n_states < s3.n_states < s2.n_states
    assert s1.n_transitions < s3.n_transitions < s2.n_transitions


def test_suite_is_deterministic():
    c = scenario_ctg(1)
    assert extract_test_suite(c, prefix="s1_t") == list(scenario_suite(1))
    assert extract_single_test(c, seed=3) == extract_single_test(c, seed=3)


def test_single_test_passes_on_model():
    c = scenario_ctg(3)
    raw = soc.build_soc_lts(soc.eight_source_params())
    for seed in range(5):
        t = extract_single_test(c, seed=seed)
        assert execute(t, raw, seed=seed) is Verdict.PASS


def test_scenario1_suite_sound():
    raw = soc.build_soc_lts(soc.eight_source_params())
    for seed in range(3):
        assert Verdict.FAIL not in run_suite(scenario_suite(1), raw, seed=seed)


def test_tests_reach_a_verdict():
    for t in scenario_suite(1):
        stack = [t.root]
        while stack:
            n = stack.pop()
            if isinstance(n, Stim):
                stack.append(n.child)
            elif isinstance(n, Obs):
                assert n.branches
                stack.extend(c for _, c in n.branches)
            else:
                assert n.verdict in (Verdict.PASS, Verdict.INCONCLUSIVE)


@pytest.mark.parametrize("mutation", soc.MUTATIONS)
def test_scenario1_detects_mutation(mutation):
    bad = soc.mutate(soc.eight_source_params(), mutation)
    assert Verdict.FAIL in run_suite(scenario_suite(1), bad, seed=0)


# -- scenario 4 -------------------------------------------------------------------------------


def test_scenario4_exclusion():
    c = scenario_ctg(4)
    assert scenario4_violations(c) == []
    assert any(t == c.pass_state for _, _, t in c.lts.edges())


def test_scenario4_oracle_catches_missing_refuse():
    loose = tp(
        """purpose p is
             Write(?id, ?ws, ?wp, ?wd); Grant_Write(!id);
             Read(*, ?rs, ?rp) where rs >= ws and rp >= wp and (rs > ws or rp > wp);
             Grant_Read(*, !wd); accept
           end purpose"""
    )
    c = extract_ctg(product(generation_model(), loose))
    assert scenario4_violations(c)
