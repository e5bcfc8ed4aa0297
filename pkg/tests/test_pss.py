import itertools
import random

import pytest
from oracles import forward_shortest

from isoltest import soc
from isoltest.bisim import equivalent, minimize
from isoltest.dsl.pss_text import parse_pss_model, parse_vi
from isoltest.lts import Label, ResourceLimitError, ValidationError, determinize
from isoltest.pss import (
    ActionDef,
    Cmp,
    ConstraintModel,
    FieldDef,
    FlowObjectType,
    InferredTest,
    Leaf,
    Lit,
    Ref,
    Select,
    Seq,
    UnsatisfiableError,
    VerificationIntent,
    backward_infer,
    build_lts,
    compile_expr,
    explore,
    inferred_trace,
    monolithic_ri_model,
    refs,
    replay,
    solve,
    to_gate_vocabulary,
)

from importlib.resources import files

CATALOG = files("isoltest.catalog")
SOURCE_FIELDS = {"src_sec", "src_priv", "src_data"}
TARGET_FIELDS = {"tgt_sec", "tgt_priv", "tgt_data"}


@pytest.fixture(scope="module")
def model():
    return monolithic_ri_model()


@pytest.fixture(scope="module")
def graph(model):
    return explore(model)


def vi(model, k):
    return parse_vi(CATALOG.joinpath(f"scenario{k}.vi").read_text(), model)


def val(model, **fields):
    base = dict(
        initial="false", sstate="idle", src_sec="secure", src_priv="privileged", src_data="data1",
        tgt_sec="nonsecure", tgt_priv="nonprivileged", tgt_data="data1", new_sec="nonsecure", new_priv="nonprivileged",
    )
    base.update(fields)
    return model.flow.from_dict(base)


def brute_solve(m, a, in_val):
    checks = [compile_expr(m.flow, c) for c in a.constraints]
    out = set()
    domains = [("false",)] + [f.values for f in m.flow.fields[1:]]
    probe = in_val if in_val is not None else tuple(f.values[0] for f in m.flow.fields)
    for cand in itertools.product(*domains):
        if all(f(probe, cand) for f in checks):
            out.add(cand)
    return out


# -- solve ---------------------------------------------------------------------------


def test_grant_read_disabled_outside_read_state(model):
    assert solve(model, "target_grant_read", val(model, sstate="idle")) == set()


def test_grant_read_returns_to_idle_copying_everything_else(model):
    v = val(model, sstate="read", tgt_data="data2")
    (out,) = solve(model, "target_grant_read", v)
    assert model.flow.as_dict(out)["sstate"] == "idle"
    assert out[2:] == v[2:]


def test_copy_only_action_leaves_other_fields_free():
    bits = tuple(FieldDef(f"f{k}", "bit", ("0", "1")) for k in range(4))
    flow = FlowObjectType("s", bits)
    init = ActionDef("init", False, True)
    copy = ActionDef("copy", True, True, (Cmp("==", Ref("in", "initial"), Lit("false")), Cmp("==", Ref("out", "f0"), Ref("in", "f0"))))
    m = ConstraintModel(flow, [init, copy])
    v = ("false", "1", "0", "0", "1")
    outs = solve(m, "copy", v)
    assert len(outs) == 2**3
    assert all(o[1] == "1" for o in outs)


def test_solve_matches_enumeration_oracle(model):
    rng = random.Random(7)
    states = list(explore(model).nodes[1:])
    for a in model.actions:
        for v in rng.sample(states, 6):
            assert solve(model, a, None if a.is_init else v) == brute_solve(model, a, None if a.is_init else v)


def test_solve_never_sets_initial(graph):
    assert all(v[0] == "false" for v in graph.nodes[1:])


# -- builtin model -----------------------------------------------------------------------


def test_builtin_model_has_ten_actions_plus_init(model):
    assert len(model.actions) == 11
    assert model.init_action.name == "init_system_state"


def test_init_configuration(model):
    (v,) = solve(model, model.init_action, None)
    d = model.flow.as_dict(v)
    assert (d["src_sec"], d["src_priv"]) == ("secure", "privileged")
    assert (d["tgt_sec"], d["tgt_priv"]) == ("nonsecure", "nonprivileged")


def test_grant_read_has_thirteen_constraints(model):
    assert len(model.action("target_grant_read").constraints) == 13


@pytest.mark.parametrize("ts,ss,tp,sp", list(itertools.product(range(2), repeat=4)))
def test_grant_read_enabled_iff_valid_access(model, ts, ss, tp, sp):
    sec, priv = ("nonsecure", "secure"), ("nonprivileged", "privileged")
    v = val(model, sstate="read", tgt_sec=sec[ts], src_sec=sec[ss], tgt_priv=priv[tp], src_priv=priv[sp])
    expected = soc.valid_access(soc.SecurityLevel(ts), soc.SecurityLevel(ss), soc.PrivilegeLevel(tp), soc.PrivilegeLevel(sp))
    assert bool(solve(model, "target_grant_read", v)) == expected
    assert bool(solve(model, "target_reject_read", v)) != expected


def test_config_change_touches_source_fields_only(model):
    v = val(model)
    outs = solve(model, "source_config_change", v)
    assert len(outs) == 7
    for o in outs:
        changed = {f for f, x, y in zip(model.flow.names, v, o) if x != y}
        assert changed and changed <= SOURCE_FIELDS


def test_every_untouched_field_has_an_explicit_copy(model):
    for a in model.actions:
        if a.is_init:
            continue
        written = {r.field for c in a.constraints for r in refs(c) if r.side == "out"}
        free = {"new_sec", "new_priv"} if a.name == "source_request_protection" else set()
        assert written | free == set(model.flow.names[1:]), a.name
        copies = {c.left.field for c in a.constraints if isinstance(c, Cmp) and c.op == "==" and c.left == Ref("out", getattr(c.right, "field", None)) and c.right == Ref("in", c.left.field)}
        other = TARGET_FIELDS if a.name.startswith("source_") else SOURCE_FIELDS
        assert other <= copies, a.name


# -- build_lts ---------------------------------------------------------------------------------


def test_init_only_model_size():
    flow = FlowObjectType("s", (FieldDef("x", "d", ("a", "b", "c")),))
    m = ConstraintModel(flow, [ActionDef("init", False, True)])
    l = build_lts(m)
    assert (l.n_states, l.n_transitions) == (4, 3)


def test_build_lts_sizes(model):
    l = build_lts(model)
    full = build_lts(model, labels="full")
    assert (l.n_states, l.n_transitions) == (full.n_states, full.n_transitions)
    assert full.label_count() == full.n_transitions


def test_state_limit(model, monkeypatch):
    monkeypatch.setenv("ISOLTEST_STATE_LIMIT", "50")
    with pytest.raises(ResourceLimitError):
        build_lts(model)


def test_relabeled_model_matches_soc_comparison(model):
    l = determinize(to_gate_vocabulary(model, build_lts(model)))
    ref = soc.relabel_for_comparison(soc.build_soc_lts(soc.eight_source_params()))
    assert equivalent(l, ref, "branching")
    m = minimize(l, "branching")
    assert (m.n_states, m.n_transitions) == (52, 268)


def test_missing_initial_check_rejected():
    flow = FlowObjectType("s", (FieldDef("x", "d", ("a", "b")),))
    with pytest.raises(ValidationError):
        ConstraintModel(flow, [ActionDef("init", False, True), ActionDef("step", True, True)])


def test_two_init_actions_rejected():
    flow = FlowObjectType("s", (FieldDef("x", "d", ("a", "b")),))
    with pytest.raises(ValidationError):
        ConstraintModel(flow, [ActionDef("i1", False, True), ActionDef("i2", False, True)])


# -- backward inference -------------------------------------------------------------------


def test_init_handle_gives_length_one(model):
    intent = VerificationIntent("only_init", {"i": "init_system_state"}, Leaf("i"))
    t = backward_infer(model, intent)
    assert t.actions == ["init_system_state"]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_inference_is_shortest(model, graph, k):
    intent = vi(model, k)
    t = backward_infer(model, intent, graph=graph)
    assert len(t) == forward_shortest(model, intent)
    assert replay(model, t)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_inferred_test_is_a_path_of_the_lts(model, graph, k):
    t = backward_infer(model, vi(model, k), graph=graph)
    full = build_lts(model, labels="full")
    state = full.initial
    for lab in inferred_trace(model, t):
        (state,) = [d for a, d in full.outgoing(state) if a == lab]


def test_scenario1_rejects_protection_after_one_config_change(model, graph):
    t = backward_infer(model, vi(model, 1), graph=graph)
    assert t.actions == ["init_system_state", "source_config_change", "source_request_protection", "target_reject_protection"]
    d = model.flow.as_dict(t.steps[1].out_val)
    assert (d["src_sec"], d["src_priv"]) != ("secure", "privileged")


def test_scenario2_grants_before_rejects(model, graph):
    t = backward_infer(model, vi(model, 2), graph=graph)
    responses = [s.action for s in t.steps if s.action.startswith("target_")]
    assert len(responses) == 6
    kinds = [r.split("_")[1] for r in responses]
    assert kinds == ["grant"] * 3 + ["reject"] * 3


def test_scenario4_binds_are_adjacent(model, graph):
    t = backward_infer(model, vi(model, 4), graph=graph)
    handles = [s.handle for s in t.steps]
    k = handles.index("w")
    assert handles[k : k + 5] == ["w", "gw", "cc", "r", "gr"]


def test_inference_is_deterministic(model):
    a = backward_infer(model, vi(model, 2))
    b = backward_infer(model, vi(model, 2))
    assert a == b


def test_select_sampling_is_seeded(model, graph):
    intent = vi(model, 1)
    runs = [backward_infer(model, intent, select="sample", seed=s, graph=graph) for s in range(6)]
    again = [backward_infer(model, intent, select="sample", seed=s, graph=graph) for s in range(6)]
    assert runs == again
    assert {r.steps[-1].action for r in runs} == {"target_reject_read", "target_reject_write", "target_reject_protection"}


def test_unsatisfiable_intent(model):
    intent = VerificationIntent(
        "never", {"g": "target_grant_protection"}, Leaf("g"),
        {"g": (Cmp("==", Ref("in", "src_sec"), Lit("nonsecure")),)},
    )
    with pytest.raises(UnsatisfiableError):
        backward_infer(model, intent)


def test_bind_cycle_rejected():
    with pytest.raises(ValidationError):
        VerificationIntent("c", {"a": "x", "b": "y"}, Seq((Leaf("a"), Leaf("b"))), binds=[("a", "b"), ("b", "a")])


def test_unreferenced_handle_rejected():
    with pytest.raises(ValidationError):
        VerificationIntent("c", {"a": "x", "b": "y"}, Leaf("a"))


def test_select_picks_shortest_branch(model, graph):
    intent = VerificationIntent(
        "s", {"gw": "target_grant_write", "rp": "target_reject_protection"}, Select((Leaf("rp"), Leaf("gw")))
    )
    t = backward_infer(model, intent, graph=graph)
    assert t.actions == ["init_system_state", "source_request_write", "target_grant_write"]
