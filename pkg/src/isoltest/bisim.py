"""Minimization and equivalence checking modulo strong and branching bisimulation.

The refinement kernels come from the compiled ``_refine`` extension when it
was built, and from ``_refine_py`` otherwise. Set ``ISOLTEST_PURE_PYTHON=1``
to force the fallback.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from enum import Enum

from . import _refine_py
from .lts import TAU, Label, Lts, determinize, disjoint_union

if os.environ.get("ISOLTEST_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _refine as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


class Relation(str, Enum):
    STRONG = "strong"
    BRANCHING = "branching"
    WEAK_TRACE = "weak-trace"


def _arrays(l: Lts):
    src, lab, dst = [], [], []
    for s, a, t in l.transitions:
        src.append(s)
        lab.append(a)
        dst.append(t)
    return src, lab, dst


def tau_sccs(l: Lts) -> list[int]:
    """Component id per state for the graph of tau transitions (iterative Tarjan)."""
    tau = l.label_index(TAU)
    n = l.n_states
    if tau is None:
        return list(range(n))
    adj = [[t for a, t in out if a == tau] for out in l.succ()]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while i < len(adj[v]):
                w = adj[v][i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return comp


def collapse_tau_cycles(l: Lts) -> tuple[Lts, list[int]]:
    """Merge every tau-strongly-connected component into one state.

    Such states are always branching bisimilar (divergence is not observed).
    """
    comp = tau_sccs(l)
    edges = set()
    for s, lab, t in l.edges():
        cs, ct = comp[s], comp[t]
        if lab.is_tau and cs == ct:
            continue
        edges.add((cs, lab, ct))
    n = max(comp) + 1
    return Lts(n, comp[l.initial], edges), comp


def _tau_topological(l: Lts) -> list[int]:
    """Order where every tau-successor precedes its predecessor (graph must be tau-acyclic)."""
    tau = l.label_index(TAU)
    n = l.n_states
    if tau is None:
        return list(range(n))
    adj = [[t for a, t in out if a == tau] for out in l.succ()]
    state = [0] * n
    order: list[int] = []
    for root in range(n):
        if state[root]:
            continue
        work = [(root, iter(adj[root]))]
        state[root] = 1
        while work:
            v, it = work[-1]
            nxt = next(it, None)
            if nxt is None:
                work.pop()
                state[v] = 2
                order.append(v)
            elif state[nxt] == 0:
                state[nxt] = 1
                work.append((nxt, iter(adj[nxt])))
    return order


def partition(l: Lts, relation: Relation | str, backend: str | None = None) -> list[int]:
    """Coarsest bisimulation partition of the states of ``l``.

    For branching bisimulation ``l`` must not contain tau cycles; use
    :func:`collapse_tau_cycles` first.
    """
    relation = Relation(relation)
    impl = _pick(backend)
    src, lab, dst = _arrays(l)
    if relation is Relation.STRONG:
        return impl.strong_partition(l.n_states, src, lab, dst)
    if relation is Relation.BRANCHING:
        tau = l.label_index(TAU)
        return impl.branching_partition(
            l.n_states, src, lab, dst, -1 if tau is None else tau, _tau_topological(l)
        )
    raise ValueError(f"no partition for {relation.value}")


def _pick(backend):
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        return _compiled
    if backend == "python":
        return _refine_py
    raise ValueError(f"unknown backend {backend!r}")


def _quotient(l: Lts, block: list[int], drop_inert: bool) -> Lts:
    edges = set()
    for s, lab, t in l.edges():
        bs, bt = block[s], block[t]
        if drop_inert and lab.is_tau and bs == bt:
            continue
        edges.add((bs, lab, bt))
    return Lts(max(block) + 1, block[l.initial], edges).canonical()


def minimize(l: Lts, relation: Relation | str = Relation.STRONG, backend: str | None = None) -> Lts:
    relation = Relation(relation)
    l = l.canonical()
    if relation is Relation.STRONG:
        return _quotient(l, partition(l, relation, backend), drop_inert=False)
    if relation is Relation.BRANCHING:
        c, _ = collapse_tau_cycles(l)
        return _quotient(c, partition(c, relation, backend), drop_inert=True)
    raise ValueError("minimize supports strong and branching only; use determinize for weak traces")


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    relation: Relation
    trace: tuple[Label, ...] | None = None
    states: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.equivalent

    def describe(self) -> str:
        if self.equivalent:
            return f"equivalent modulo {self.relation.value}"
        if self.trace is not None:
            shown = " ; ".join(str(x) for x in self.trace) or "<empty>"
            return f"not {self.relation.value} equivalent; distinguishing trace: {shown}"
        return f"not {self.relation.value} equivalent; distinguishing states {self.states}"


def trace_witness(a: Lts, b: Lts, weak: bool = True) -> tuple[Label, ...] | None:
    """Shortest trace of one LTS that the other cannot perform, or None."""
    da, db = determinize(a, weak=weak), determinize(b, weak=weak)
    out_a = [dict(da.outgoing(s)) for s in range(da.n_states)]
    out_b = [dict(db.outgoing(s)) for s in range(db.n_states)]
    start = (da.initial, db.initial)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        sa, sb = pair
        la, lb = out_a[sa], out_b[sb]
        for lab in sorted(set(la) | set(lb), key=str):
            if lab not in la or lab not in lb:
                trace = [lab]
                cur = pair
                while parent[cur] is not None:
                    cur, step = parent[cur]
                    trace.append(step)
                return tuple(reversed(trace))
            nxt = (la[lab], lb[lab])
            if nxt not in parent:
                parent[nxt] = (pair, lab)
                queue.append(nxt)
    return None


def equivalent(a: Lts, b: Lts, relation: Relation | str = Relation.BRANCHING, backend: str | None = None) -> EquivalenceResult:
    relation = Relation(relation)
    if relation is Relation.WEAK_TRACE:
        w = trace_witness(a, b, weak=True)
        return EquivalenceResult(w is None, relation, trace=w)
    u, ia, ib = disjoint_union(a, b)
    if relation is Relation.STRONG:
        block = partition(u, relation, backend)
    else:
        c, comp = collapse_tau_cycles(u)
        cblock = partition(c, relation, backend)
        block = [cblock[comp[s]] for s in range(u.n_states)]
    if block[ia] == block[ib]:
        return EquivalenceResult(True, relation)
    w = trace_witness(a, b, weak=relation is not Relation.STRONG)
    return EquivalenceResult(False, relation, trace=w, states=(a.initial, b.initial))
