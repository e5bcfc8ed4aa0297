"""Mini-PSS semantics: actions that read and write one state flow object.

Each action reads an input valuation and writes an output valuation of the
flow object subject to its constraints. A valuation is a tuple of domain
tokens, one per field, with the implicit ``initial`` field in position 0.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .lts import TAU, Label, Lts, ResourceLimitError, ValidationError, state_limit

INITIAL = "initial"
BOOL_DOMAIN = ("false", "true")

Valuation = tuple  # of str, ordered as FlowObjectType.fields


class UnsatisfiableError(Exception):
    """No action chain from the init action realizes the verification intent."""


# -- flow object ---------------------------------------------------------------


@dataclass(frozen=True)
class FieldDef:
    name: str
    domain: str
    values: tuple[str, ...]


@dataclass(frozen=True)
class FlowObjectType:
    name: str
    fields: tuple[FieldDef, ...]

    def __post_init__(self):
        user = tuple(f for f in self.fields if f.name != INITIAL)
        if len(user) != len(self.fields) and self.fields[0].name != INITIAL:
            raise ValidationError("'initial' is implicit and cannot be declared")
        names = [f.name for f in user]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate field in {self.name}")
        object.__setattr__(self, "fields", (FieldDef(INITIAL, "bool", BOOL_DOMAIN),) + user)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.fields)

    def index(self, name: str) -> int:
        for i, f in enumerate(self.fields):
            if f.name == name:
                return i
        raise KeyError(name)

    def field(self, name: str) -> FieldDef:
        return self.fields[self.index(name)]

    def rank(self, i: int, value: str) -> int:
        return self.fields[i].values.index(value)

    def sort_key(self, v: Valuation) -> tuple[int, ...]:
        return tuple(self.rank(i, x) for i, x in enumerate(v))

    def as_dict(self, v: Valuation) -> dict[str, str]:
        return dict(zip(self.names, v))

    def from_dict(self, d: dict[str, str]) -> Valuation:
        v = tuple(d[n] for n in self.names)
        self.check(v)
        return v

    def check(self, v: Valuation) -> None:
        if len(v) != len(self.fields):
            raise ValidationError("valuation is not total")
        for f, x in zip(self.fields, v):
            if x not in f.values:
                raise ValidationError(f"{x!r} not in domain of {f.name}")


# -- constraint expressions ----------------------------------------------------


@dataclass(frozen=True)
class Ref:
    side: str  # "in" or "out"
    field: str

    def __str__(self):
        return f"{self.side}.{self.field}"


@dataclass(frozen=True)
class Lit:
    value: str

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Cmp:
    op: str
    left: object
    right: object

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class BoolOp:
    op: str  # "and", "or", "implies"
    args: tuple

    def __str__(self):
        sym = {"and": " && ", "or": " || ", "implies": " -> "}[self.op]
        return "(" + sym.join(str(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Not:
    arg: object

    def __str__(self):
        return f"!({self.arg})"


CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")


def refs(e) -> set[Ref]:
    if isinstance(e, Ref):
        return {e}
    if isinstance(e, Lit):
        return set()
    if isinstance(e, Cmp):
        return refs(e.left) | refs(e.right)
    if isinstance(e, BoolOp):
        return set().union(*(refs(a) for a in e.args))
    if isinstance(e, Not):
        return refs(e.arg)
    raise TypeError(e)


def term_domain(flow: FlowObjectType, t) -> str | None:
    if isinstance(t, Ref):
        return flow.field(t.field).domain
    return None


def typecheck(flow: FlowObjectType, e) -> None:
    """Raise ValidationError on unknown fields or cross-domain comparisons."""
    if isinstance(e, Cmp):
        if e.op not in CMP_OPS:
            raise ValidationError(f"unknown operator {e.op}")
        for t in (e.left, e.right):
            if isinstance(t, Ref) and t.field not in flow.names:
                raise ValidationError(f"unknown field {t.field!r} in {flow.name}")
        dl, dr = term_domain(flow, e.left), term_domain(flow, e.right)
        if dl and dr and dl != dr:
            raise ValidationError(f"cannot compare {e.left} ({dl}) with {e.right} ({dr})")
        for ref, lit in ((e.left, e.right), (e.right, e.left)):
            if isinstance(ref, Ref) and isinstance(lit, Lit) and lit.value not in flow.field(ref.field).values:
                raise ValidationError(f"{lit.value!r} is not a value of {ref.field} ({flow.field(ref.field).domain})")
        if dl is None and dr is None:
            raise ValidationError(f"comparison between two literals: {e}")
    elif isinstance(e, BoolOp):
        for a in e.args:
            typecheck(flow, a)
    elif isinstance(e, Not):
        typecheck(flow, e.arg)
    else:
        raise ValidationError(f"not a constraint: {e}")


def compile_expr(flow: FlowObjectType, e) -> Callable[[Sequence, Sequence], bool]:
    """Turn ``e`` into ``f(in_val, out_val) -> bool`` comparing by domain rank."""
    if isinstance(e, Cmp):
        left = _compile_term(flow, e.left, e.right)
        right = _compile_term(flow, e.right, e.left)
        op = e.op
        if op == "==":
            return lambda i, o: left(i, o) == right(i, o)
        if op == "!=":
            return lambda i, o: left(i, o) != right(i, o)
        if op == "<":
            return lambda i, o: left(i, o) < right(i, o)
        if op == "<=":
            return lambda i, o: left(i, o) <= right(i, o)
        if op == ">":
            return lambda i, o: left(i, o) > right(i, o)
        return lambda i, o: left(i, o) >= right(i, o)
    if isinstance(e, BoolOp):
        parts = [compile_expr(flow, a) for a in e.args]
        if e.op == "and":
            return lambda i, o: all(p(i, o) for p in parts)
        if e.op == "or":
            return lambda i, o: any(p(i, o) for p in parts)
        a, b = parts
        return lambda i, o: (not a(i, o)) or b(i, o)
    if isinstance(e, Not):
        inner = compile_expr(flow, e.arg)
        return lambda i, o: not inner(i, o)
    raise ValidationError(f"not a constraint: {e}")


def _compile_term(flow, t, other):
    if isinstance(t, Ref):
        k = flow.index(t.field)
        ranks = {v: r for r, v in enumerate(flow.fields[k].values)}
        if t.side == "in":
            return lambda i, o: ranks[i[k]]
        return lambda i, o: ranks[o[k]]
    values = flow.field(other.field).values if isinstance(other, Ref) else (t.value,)
    r = values.index(t.value)
    return lambda i, o: r


# -- actions and models -----------------------------------------------------------


@dataclass(frozen=True)
class ActionDef:
    name: str
    has_input: bool
    has_output: bool
    constraints: tuple = ()
    projection: tuple[Ref, ...] = ()
    gate: str | None = None  # soc-vocabulary gate for relabeling; None hides the action

    @property
    def is_init(self) -> bool:
        return not self.has_input


@dataclass
class ConstraintModel:
    flow: FlowObjectType
    actions: list[ActionDef]
    name: str = "model"
    _solvers: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.actions = sorted(self.actions, key=lambda a: a.name)
        self.validate()

    def validate(self) -> None:
        inits = [a for a in self.actions if a.is_init]
        if len(inits) != 1:
            raise ValidationError(f"expected exactly one init action, found {len(inits)}")
        names = [a.name for a in self.actions]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate action name")
        for a in self.actions:
            if not a.has_output and a.is_init:
                raise ValidationError(f"init action {a.name} must output the flow object")
            for c in a.constraints:
                typecheck(self.flow, c)
                for r in refs(c):
                    if r.side == "in" and not a.has_input:
                        raise ValidationError(f"{a.name} has no input but references {r}")
                    if r.side == "out" and not a.has_output:
                        raise ValidationError(f"{a.name} has no output but references {r}")
            for r in a.projection:
                if r.field not in self.flow.names:
                    raise ValidationError(f"unknown field {r.field!r} in projection of {a.name}")
            if not a.is_init and Cmp("==", Ref("in", INITIAL), Lit("false")) not in a.constraints:
                raise ValidationError(f"{a.name} must require in.initial == false")

    @property
    def init_action(self) -> ActionDef:
        return next(a for a in self.actions if a.is_init)

    def action(self, name: str) -> ActionDef:
        for a in self.actions:
            if a.name == name:
                return a
        raise KeyError(name)

    def solver(self, a: ActionDef) -> "_Solver":
        s = self._solvers.get(a.name)
        if s is None:
            s = self._solvers[a.name] = _Solver(self.flow, a)
        return s


class _Solver:
    """Enumerates out-valuations field by field, pruning as soon as a constraint is decidable."""

    def __init__(self, flow: FlowObjectType, a: ActionDef):
        self.flow = flow
        self.action = a
        n = len(flow.fields)
        self.n = n
        compiled = [(compile_expr(flow, c), {flow.index(r.field) for r in refs(c) if r.side == "out"}) for c in a.constraints]
        self.in_only = [f for f, outs in compiled if not outs]
        # unary constraints filter each out-domain before the search
        self.unary: dict[int, list] = {}
        self.by_last: dict[int, list] = {}
        for f, outs in compiled:
            if len(outs) == 1:
                self.unary.setdefault(next(iter(outs)), []).append(f)
            elif outs:
                self.by_last.setdefault(max(outs), []).append(f)

    def solve(self, in_val: Valuation | None) -> list[Valuation]:
        flow, n = self.flow, self.n
        probe = in_val if in_val is not None else tuple(f.values[0] for f in flow.fields)
        if not all(f(probe, probe) for f in self.in_only):
            return []
        if not self.action.has_output:
            return [in_val]
        domains = []
        out = list(probe)
        for k in range(n):
            if k == 0:
                domains.append(("false",))
                continue
            ok = []
            for v in flow.fields[k].values:
                out[k] = v
                if all(f(probe, out) for f in self.unary.get(k, ())):
                    ok.append(v)
            if not ok:
                return []
            domains.append(tuple(ok))
        results: list[Valuation] = []
        cur = [None] * n

        def rec(k):
            if k == n:
                results.append(tuple(cur))
                return
            for v in domains[k]:
                cur[k] = v
                if all(f(probe, cur) for f in self.by_last.get(k, ())):
                    rec(k + 1)
            cur[k] = None

        rec(0)
        return results


def solve(m: ConstraintModel, a: ActionDef | str, in_val: Valuation | None) -> set[Valuation]:
    """Every out-valuation allowed by the action's constraints for this input."""
    if isinstance(a, str):
        a = m.action(a)
    if in_val is not None:
        m.flow.check(in_val)
    return set(m.solver(a).solve(None if a.is_init else in_val))


# -- state space --------------------------------------------------------------


@dataclass
class ValuationGraph:
    """Reachable valuations; node 0 is the pre-init state (valuation None)."""

    model: ConstraintModel
    nodes: list[Valuation | None]
    edges: list[tuple[int, str, int]]  # (from, action name, to)

    def index(self) -> dict:
        return {v: k for k, v in enumerate(self.nodes)}


def explore(m: ConstraintModel, limit: int | None = None) -> ValuationGraph:
    limit = state_limit(limit)
    nodes: list = [None]
    index: dict = {}
    edges = []
    queue = deque()
    init = m.init_action
    for v in sorted(m.solver(init).solve(None), key=m.flow.sort_key):
        index[v] = len(nodes)
        nodes.append(v)
        queue.append(v)
        edges.append((0, init.name, index[v]))
    others = sorted((a for a in m.actions if not a.is_init), key=lambda a: a.name)
    while queue:
        v = queue.popleft()
        src = index[v]
        for a in others:
            for w in sorted(m.solver(a).solve(v), key=m.flow.sort_key):
                k = index.get(w)
                if k is None:
                    if len(nodes) >= limit:
                        raise ResourceLimitError(f"constraint model exceeds state limit {limit}")
                    k = index[w] = len(nodes)
                    nodes.append(w)
                    queue.append(w)
                edges.append((src, a.name, k))
    return ValuationGraph(m, nodes, edges)


def action_label(m: ConstraintModel, a: ActionDef, in_val, out_val, mode: str = "projection") -> Label:
    if mode == "full":
        offers = tuple(in_val or ()) + tuple(out_val)
        return Label(a.name, offers)
    values = []
    for r in a.projection:
        k = m.flow.index(r.field)
        values.append((in_val if r.side == "in" else out_val)[k])
    return Label(a.name, tuple(values))


def build_lts(m: ConstraintModel, labels: str = "projection", limit: int | None = None) -> Lts:
    """LTS over reachable valuations plus a pre-init state 0.

    ``labels="projection"`` renders each transition as the action name and
    its observable offers; ``labels="full"`` appends the complete input and
    output valuations, making every transition label unique.
    """
    g = explore(m, limit)
    edges = []
    for s, name, t in g.edges:
        a = m.action(name)
        edges.append((s, action_label(m, a, g.nodes[s], g.nodes[t], labels), t))
    return Lts(len(g.nodes), 0, edges)


def to_gate_vocabulary(m: ConstraintModel, lts: Lts) -> Lts:
    """Rename action labels to their declared gates; actions without a gate become tau."""
    from .lts import rename

    gates = {a.name: a.gate for a in m.actions}

    def f(lab: Label) -> Label:
        if lab.is_tau:
            return lab
        g = gates.get(lab.gate)
        return TAU if g is None else Label(g, lab.offers)

    return rename(lts, f)


# -- verification intents ---------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    handle: str


@dataclass(frozen=True)
class Seq:
    items: tuple


@dataclass(frozen=True)
class Select:
    branches: tuple


@dataclass(frozen=True)
class Schedule:
    branches: tuple


@dataclass
class VerificationIntent:
    name: str
    handles: dict[str, str]  # handle -> action name
    activity: object
    constraints: dict[str, tuple] = field(default_factory=dict)  # handle -> constraints over in/out
    binds: list[tuple[str, str]] = field(default_factory=list)  # (earlier, later)

    def __post_init__(self):
        self.validate()

    def leaves(self, node=None) -> list[str]:
        node = self.activity if node is None else node
        if isinstance(node, Leaf):
            return [node.handle]
        kids = node.items if isinstance(node, Seq) else node.branches
        return [h for k in kids for h in self.leaves(k)]

    def validate(self, model: ConstraintModel | None = None) -> None:
        used = self.leaves()
        for h in used:
            if h not in self.handles:
                raise ValidationError(f"undeclared handle {h!r} in activity")
        for h in self.handles:
            if h not in used:
                raise ValidationError(f"handle {h!r} not referenced in the activity")
        if len(used) != len(set(used)):
            raise ValidationError("a handle may occur only once in the activity")
        outs, ins = {}, {}
        for a, b in self.binds:
            for h in (a, b):
                if h not in self.handles:
                    raise ValidationError(f"bind references unknown handle {h!r}")
            if a in outs or b in ins:
                raise ValidationError("a handle output/input may be bound only once")
            outs[a], ins[b] = b, a
        # cycle check on bind edges
        for start in outs:
            seen, cur = {start}, start
            while cur in outs:
                cur = outs[cur]
                if cur in seen:
                    raise ValidationError("bind edges form a cycle")
                seen.add(cur)
        if model is not None:
            for h, act in self.handles.items():
                try:
                    a = model.action(act)
                except KeyError:
                    raise ValidationError(f"handle {h!r} refers to unknown action {act!r}") from None
                for c in self.constraints.get(h, ()):
                    typecheck(model.flow, c)
                    if any(r.side == "in" for r in refs(c)) and not a.has_input:
                        raise ValidationError(f"handle {h!r}: {act} has no input")

    @property
    def bind_next(self) -> dict[str, str]:
        return dict(self.binds)

    @property
    def bind_prev(self) -> dict[str, str]:
        return {b: a for a, b in self.binds}


def choose_branches(node, rng: random.Random):
    """Replace every SELECT by one uniformly drawn branch."""
    if isinstance(node, Leaf):
        return node
    if isinstance(node, Select):
        return choose_branches(node.branches[rng.randrange(len(node.branches))], rng)
    if isinstance(node, Seq):
        return Seq(tuple(choose_branches(k, rng) for k in node.items))
    return Schedule(tuple(choose_branches(k, rng) for k in node.branches))


class _Nfa:
    """Thompson-style automaton over handle names; schedule is a shuffle product."""

    def __init__(self):
        self.n = 0
        self.eps: dict[int, set[int]] = {}
        self.moves: dict[int, list[tuple[str, int]]] = {}

    def new(self) -> int:
        self.n += 1
        return self.n - 1

    def build(self, node) -> tuple[int, int]:
        if isinstance(node, Leaf):
            a, b = self.new(), self.new()
            self.moves.setdefault(a, []).append((node.handle, b))
            return a, b
        if isinstance(node, Seq):
            start = cur = self.new()
            for item in node.items:
                s, e = self.build(item)
                self.eps.setdefault(cur, set()).add(s)
                cur = e
            return start, cur
        if isinstance(node, Select):
            start, end = self.new(), self.new()
            for br in node.branches:
                s, e = self.build(br)
                self.eps.setdefault(start, set()).add(s)
                self.eps.setdefault(e, set()).add(end)
            return start, end
        # shuffle of the branches' own DFAs
        parts = [_dfa(br) for br in node.branches]
        index: dict[tuple, int] = {}
        start_key = tuple(p.start for p in parts)
        end = self.new()
        stack = [start_key]
        index[start_key] = self.new()
        while stack:
            key = stack.pop()
            here = index[key]
            if all(k in p.accepting for k, p in zip(key, parts)):
                self.eps.setdefault(here, set()).add(end)
            for i, (k, p) in enumerate(zip(key, parts)):
                for h, t in p.delta.get(k, {}).items():
                    nk = key[:i] + (t,) + key[i + 1 :]
                    if nk not in index:
                        index[nk] = self.new()
                        stack.append(nk)
                    self.moves.setdefault(here, []).append((h, index[nk]))
        return index[start_key], end

    def closure(self, states) -> frozenset[int]:
        seen = set(states)
        stack = list(seen)
        while stack:
            s = stack.pop()
            for t in self.eps.get(s, ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)


@dataclass
class _Dfa:
    start: int
    delta: dict[int, dict[str, int]]
    accepting: set[int]


def _dfa(node) -> _Dfa:
    nfa = _Nfa()
    s, e = nfa.build(node)
    start = nfa.closure([s])
    index = {start: 0}
    delta: dict[int, dict[str, int]] = {}
    accepting = set()
    stack = [start]
    while stack:
        cur = stack.pop()
        k = index[cur]
        if e in cur:
            accepting.add(k)
        nxt: dict[str, set[int]] = {}
        for q in cur:
            for h, t in nfa.moves.get(q, ()):
                nxt.setdefault(h, set()).add(t)
        for h, ts in nxt.items():
            c = nfa.closure(ts)
            if c not in index:
                index[c] = len(index)
                stack.append(c)
            delta.setdefault(k, {})[h] = index[c]
    return _Dfa(0, delta, accepting)


@dataclass(frozen=True)
class ActionInstance:
    action: str
    in_val: Valuation | None
    out_val: Valuation
    handle: str | None = None


@dataclass(frozen=True)
class InferredTest:
    steps: tuple[ActionInstance, ...]

    def __len__(self):
        return len(self.steps)

    @property
    def actions(self) -> list[str]:
        return [s.action for s in self.steps]


class _IntentSearch:
    """Shared step relation over nodes ``(valuation node, dfa state, last handle)``."""

    START = ("start",)

    def __init__(self, m: ConstraintModel, vi: VerificationIntent, graph: ValuationGraph | None = None):
        vi.validate(m)
        self.m, self.vi = m, vi
        self.g = graph or explore(m)
        self.dfa = _dfa(vi.activity)
        self.next_bind = vi.bind_next
        self.prev_bind = vi.bind_prev
        self.by_action: dict[str, list[str]] = {}
        for h in sorted(vi.handles):
            self.by_action.setdefault(vi.handles[h], []).append(h)
        self.hcons = {h: [compile_expr(m.flow, c) for c in vi.constraints.get(h, ())] for h in vi.handles}
        self.fwd: list[list[tuple[str, int]]] = [[] for _ in self.g.nodes]
        self.rev: list[list[tuple[str, int]]] = [[] for _ in self.g.nodes]
        for s, a, t in self.g.edges:
            self.fwd[s].append((a, t))
            self.rev[t].append((a, s))
        self.rdelta: dict[tuple[int, str], list[int]] = {}
        for d, moves in self.dfa.delta.items():
            for h, d2 in moves.items():
                self.rdelta.setdefault((d2, h), []).append(d)
        self.free_last = [None] + [h for h in sorted(vi.handles) if h not in self.next_bind]

    def handle_ok(self, h, s, t) -> bool:
        i, o = self.g.nodes[s], self.g.nodes[t]
        i = i if i is not None else o
        return all(f(i, o) for f in self.hcons[h])

    def successors(self, node):
        """Yield ``(step, next_node)`` with ``step = (action, target valuation node, handle)``."""
        if node == self.START:
            v, d, last = 0, self.dfa.start, None
        else:
            v, d, last = node
        pending = self.next_bind.get(last) if last is not None else None
        for a, t in self.fwd[v]:
            if pending is None:
                yield (a, t, None), (t, d, None)
            for h in self.by_action.get(a, ()):
                if pending is not None and h != pending:
                    continue
                if self.prev_bind.get(h, last) != last:
                    continue
                d2 = self.dfa.delta.get(d, {}).get(h)
                if d2 is None or not self.handle_ok(h, v, t):
                    continue
                yield (a, t, h), (t, d2, h)

    def predecessors(self, node):
        t, d2, h = node
        for a, v in self.rev[t]:
            if h is None:
                preds = [(v, d2, last) for last in self.free_last]
            else:
                if self.vi.handles[h] != a or not self.handle_ok(h, v, t):
                    continue
                prevs = [self.prev_bind[h]] if h in self.prev_bind else self.free_last
                preds = [(v, d, last) for d in self.rdelta.get((d2, h), ()) for last in prevs]
            for p in preds:
                if p[0] == 0:
                    if p[1] == self.dfa.start and p[2] is None:
                        yield self.START
                else:
                    yield p

    def goals(self):
        for v in range(1, len(self.g.nodes)):
            for d in sorted(self.dfa.accepting):
                for last in self.free_last:
                    if last is not None and d not in self._reach_by(last):
                        continue
                    yield (v, d, last)

    def _reach_by(self, h):
        cache = getattr(self, "_rb", None)
        if cache is None:
            cache = self._rb = {}
            for d, moves in self.dfa.delta.items():
                for hh, d2 in moves.items():
                    cache.setdefault(hh, set()).add(d2)
        return cache.get(h, set())


def backward_infer(
    m: ConstraintModel,
    vi: VerificationIntent,
    select: str = "shortest",
    seed: int | None = None,
    graph: ValuationGraph | None = None,
) -> InferredTest:
    """Shortest action chain from the init action that realizes ``vi``.

    Distances to the goal are computed breadth-first backwards from every
    node completing the intent; the chain is then read off from the start,
    preferring the lexicographically smallest action name, then the smallest
    output valuation. ``select="sample"`` first fixes every SELECT branch
    with a seeded draw.
    """
    if select == "sample":
        vi = sample_branches(vi, random.Random(seed))
    elif select != "shortest":
        raise ValueError(f"unknown select mode {select!r}")
    search = _IntentSearch(m, vi, graph)
    dist: dict = {}
    queue = deque()
    for gnode in search.goals():
        dist[gnode] = 0
        queue.append(gnode)
    while queue and search.START not in dist:
        node = queue.popleft()
        for p in search.predecessors(node):
            if p not in dist:
                dist[p] = dist[node] + 1
                queue.append(p)
    if search.START not in dist:
        raise UnsatisfiableError(f"no action chain realizes intent {vi.name!r}")
    steps = []
    node = search.START
    flow = m.flow
    nodes = search.g.nodes
    while dist[node] > 0:
        want = dist[node] - 1
        best = None
        for (a, t, h), nxt in search.successors(node):
            if dist.get(nxt) != want:
                continue
            key = (a, flow.sort_key(nodes[t]), h or "")
            if best is None or key < best[0]:
                best = (key, (a, t, h), nxt)
        _, (a, t, h), nxt = best
        src = 0 if node == search.START else node[0]
        steps.append(ActionInstance(a, nodes[src], nodes[t], h))
        node = nxt
    return InferredTest(tuple(steps))


def sample_branches(vi: VerificationIntent, rng: random.Random) -> VerificationIntent:
    """Fix every SELECT branch by a draw from ``rng`` and drop the unused handles."""
    activity = choose_branches(vi.activity, rng)
    kept = set(vi.leaves(activity))
    return VerificationIntent(
        vi.name,
        {h: a for h, a in vi.handles.items() if h in kept},
        activity,
        {h: c for h, c in vi.constraints.items() if h in kept},
        [(a, b) for a, b in vi.binds if a in kept and b in kept],
    )


def replay(m: ConstraintModel, test: InferredTest) -> bool:
    """Check chaining and per-action constraints of an inferred test."""
    prev = None
    for k, step in enumerate(test.steps):
        a = m.action(step.action)
        if k == 0:
            if not a.is_init:
                return False
        elif step.in_val != prev:
            return False
        if step.out_val not in solve(m, a, step.in_val):
            return False
        prev = step.out_val
    return True


def inferred_trace(m: ConstraintModel, test: InferredTest, labels: str = "full") -> list[Label]:
    return [action_label(m, m.action(s.action), s.in_val, s.out_val, labels) for s in test.steps]



def monolithic_ri_model() -> ConstraintModel:
    """The builtin single-source, single-target resource-isolation model."""
    from importlib.resources import files

    from .dsl.pss_text import parse_pss_model

    text = files("isoltest.catalog").joinpath("ri_monolithic.pss").read_text()
    return parse_pss_model(text, "ri_monolithic.pss")
