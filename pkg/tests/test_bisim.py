import random

import pytest
from hypothesis import given, settings, strategies as st

from isoltest import bisim
from isoltest.bisim import collapse_tau_cycles, equivalent, minimize, partition
from isoltest.lts import TAU, Lts, determinize, hide, visible

from oracles import naive_branching, naive_strong, random_lts, same_partition

a, b = visible("a"), visible("b")
BACKENDS = ["python"] + (["compiled"] if bisim.BACKEND == "compiled" else [])


@pytest.mark.parametrize("backend", BACKENDS)
def test_duplicate_branch_collapses(backend):
    l = Lts(4, 0, [(0, a, 1), (0, a, 2), (1, b, 3), (2, b, 3)])
    assert minimize(l, "strong", backend).n_states == 3


@pytest.mark.parametrize("backend", BACKENDS)
def test_inert_tau_removed(backend):
    l = Lts(3, 0, [(0, TAU, 1), (1, a, 2)])
    assert minimize(l, "branching", backend).n_states == 2
    assert minimize(l, "strong", backend).n_states == 3


def test_non_inert_tau_kept():
    # 0 -a-> 3, 0 -tau-> 1 -b-> 2: the tau discards the a option
    l = Lts(4, 0, [(0, a, 3), (0, TAU, 1), (1, b, 2)])
    m = minimize(l, "branching")
    assert m.has_tau()
    assert equivalent(l, m, "branching")


def test_tau_cycle_collapses():
    l = Lts(3, 0, [(0, TAU, 1), (1, TAU, 0), (1, a, 2)])
    c, comp = collapse_tau_cycles(l)
    assert comp[0] == comp[1]
    assert minimize(l, "branching").stats() == (2, 1, 1)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("seed", range(12))
def test_partitions_match_naive_oracle(backend, seed):
    rng = random.Random(seed)
    l = random_lts(rng, 50 if seed < 4 else 20)
    assert same_partition(partition(l, "strong", backend), naive_strong(l))
    c, _ = collapse_tau_cycles(l)
    assert same_partition(partition(c, "branching", backend), naive_branching(c))


def test_branching_oracle_agrees_across_tau_cycles():
    rng = random.Random(99)
    l = random_lts(rng, 25, tau_ratio=0.5)
    c, comp = collapse_tau_cycles(l)
    blocks = partition(c, "branching")
    rel = naive_branching(l)
    for p in range(l.n_states):
        for q in range(l.n_states):
            assert (blocks[comp[p]] == blocks[comp[q]]) == ((p, q) in rel)


def test_distinguishing_trace():
    x = Lts(1, 0, [(0, a, 0)])
    y = Lts(1, 0, [(0, b, 0)])
    for rel in ("strong", "branching", "weak-trace"):
        r = equivalent(x, y, rel)
        assert not r
        assert r.trace in ((a,), (b,))


small_lts = st.builds(
    lambda n, raw: Lts(n, 0, [(s % n, lab, t % n) for s, lab, t in raw]),
    st.integers(1, 7),
    st.lists(st.tuples(st.integers(0, 6), st.sampled_from([a, b, TAU]), st.integers(0, 6)), max_size=16),
)


@settings(max_examples=80, deadline=None)
@given(small_lts)
def test_reflexive(l):
    for rel in ("strong", "branching", "weak-trace"):
        assert equivalent(l, l, rel)


@settings(max_examples=80, deadline=None)
@given(small_lts, st.sampled_from(["strong", "branching"]))
def test_minimize_equivalent_and_idempotent(l, rel):
    m = minimize(l, rel)
    assert equivalent(l, m, rel)
    mm = minimize(m, rel)
    assert mm.stats() == m.stats()


@settings(max_examples=80, deadline=None)
@given(small_lts, small_lts)
def test_relation_hierarchy(x, y):
    if equivalent(x, y, "strong"):
        assert equivalent(x, y, "branching")
    if equivalent(x, y, "branching"):
        assert equivalent(x, y, "weak-trace")


@settings(max_examples=60, deadline=None)
@given(small_lts)
def test_hiding_never_grows_branching_quotient(l):
    hidden = hide(l, {"a"})
    assert minimize(hidden, "branching").n_states <= hidden.canonical().n_states


@settings(max_examples=60, deadline=None)
@given(small_lts)
def test_minimum_size_against_oracle(l):
    l = l.canonical()
    m = minimize(l, "strong")
    classes = {frozenset(q for q in range(l.n_states) if (p, q) in naive_strong(l)) for p in range(l.n_states)}
    assert m.n_states == len(classes)


def test_weak_trace_via_determinize():
    x = Lts(3, 0, [(0, TAU, 1), (1, a, 2), (0, TAU, 2)])
    assert equivalent(x, determinize(x), "weak-trace")
