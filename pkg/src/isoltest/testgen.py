"""Test purposes, the model x purpose product, complete test graphs and test extraction.

A test purpose is a small process term (events, sequence, select, par,
loop, accept, refuse) compiled to an automaton whose transitions carry
label patterns. The product follows the model and lets the purpose stutter
on labels it does not match; a matching REFUSE pattern prunes the model
transition and takes priority over MATCH.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable

from . import soc
from .lts import Label, Lts, ResourceLimitError, ValidationError, aut_write, state_limit


class EmptyCtgError(Exception):
    """The purpose's goal is unreachable from the initial state."""


# -- purpose terms -------------------------------------------------------------------


@dataclass(frozen=True)
class OfferPattern:
    kind: str  # "any", "lit", "capture", "ref"
    value: str | int | None = None

    def __str__(self) -> str:
        if self.kind == "any":
            return "*"
        if self.kind == "capture":
            return f"?{self.value}"
        if self.kind == "ref":
            return f"!{self.value}"
        return str(self.value)


@dataclass(frozen=True)
class GVar:
    name: str


@dataclass(frozen=True)
class GLit:
    value: str | int


@dataclass(frozen=True)
class GCmp:
    op: str
    left: GVar | GLit
    right: GVar | GLit


@dataclass(frozen=True)
class GBool:
    op: str  # "and", "or"
    args: tuple


@dataclass(frozen=True)
class GNot:
    arg: object


@dataclass(frozen=True)
class EventPattern:
    gate: str
    offers: tuple[OfferPattern, ...] | None = None  # None matches any offer list
    guard: object | None = None

    def captures(self) -> list[str]:
        return [p.value for p in self.offers or () if p.kind == "capture"]


@dataclass(frozen=True)
class PEvent:
    event: EventPattern


@dataclass(frozen=True)
class PRefuse:
    event: EventPattern


@dataclass(frozen=True)
class PSeq:
    items: tuple


@dataclass(frozen=True)
class PSelect:
    branches: tuple


@dataclass(frozen=True)
class PPar:
    branches: tuple


@dataclass(frozen=True)
class PLoop:
    body: object


@dataclass(frozen=True)
class PNull:
    pass


@dataclass(frozen=True)
class PAccept:
    pass


MATCH, REFUSE = "match", "refuse"


@dataclass(frozen=True)
class TpTransition:
    src: int
    event: EventPattern
    kind: str
    dst: int | None  # None for REFUSE


@dataclass(frozen=True)
class TpAutomaton:
    n_states: int
    initial: int
    accept: frozenset[int]
    transitions: tuple[TpTransition, ...]

    @cached_property
    def by_state(self) -> list[list[TpTransition]]:
        out: list[list[TpTransition]] = [[] for _ in range(self.n_states)]
        for tr in self.transitions:
            out[tr.src].append(tr)
        return out


@dataclass(frozen=True)
class TestPurpose:
    name: str
    body: object

    __test__ = False

    @cached_property
    def automaton(self) -> TpAutomaton:
        return compile_purpose(self.body)

    @property
    def n_states(self) -> int:
        return self.automaton.n_states

    @property
    def accept(self) -> frozenset[int]:
        return self.automaton.accept

    @property
    def transitions(self) -> tuple[TpTransition, ...]:
        return self.automaton.transitions


class _Builder:
    """Thompson construction with epsilon edges; refuse and accept have no exit."""

    def __init__(self):
        self.n = 0
        self.eps: dict[int, set[int]] = {}
        self.trans: list[tuple[int, EventPattern, str, int | None]] = []
        self.accepting: set[int] = set()

    def new(self) -> int:
        self.n += 1
        return self.n - 1

    def link(self, a, b):
        self.eps.setdefault(a, set()).add(b)

    def build(self, p, entry: int) -> int | None:
        """Wire ``p`` starting at ``entry``; return its exit node or None."""
        if isinstance(p, PEvent):
            out = self.new()
            self.trans.append((entry, p.event, MATCH, out))
            return out
        if isinstance(p, PRefuse):
            self.trans.append((entry, p.event, REFUSE, None))
            return None
        if isinstance(p, PNull):
            return entry
        if isinstance(p, PAccept):
            self.accepting.add(entry)
            return None
        if isinstance(p, PSeq):
            cur = entry
            for item in p.items:
                if cur is None:
                    break
                cur = self.build(item, cur)
            return cur
        if isinstance(p, PSelect):
            exit_ = self.new()
            live = False
            for br in p.branches:
                start = self.new()
                self.link(entry, start)
                end = self.build(br, start)
                if end is not None:
                    self.link(end, exit_)
                    live = True
            return exit_ if live else None
        if isinstance(p, PLoop):
            start = self.new()
            self.link(entry, start)
            end = self.build(p.body, start)
            if end is not None:
                self.link(end, start)
            return None
        if isinstance(p, PPar):
            return self._par(p, entry)
        raise ValidationError(f"not a purpose term: {p!r}")

    def _par(self, p: PPar, entry: int) -> int | None:
        parts = []
        for br in p.branches:
            if _contains_accept(br):
                raise ValidationError("accept is not allowed inside par")
            sub = _Builder()
            root = sub.new()
            parts.append(_eliminate(sub, root, sub.build(br, root)))
        index: dict[tuple, int] = {}
        start_key = tuple(aut.initial for aut, _ in parts)
        first = self.new()
        self.link(entry, first)
        index[start_key] = first
        exit_ = self.new()
        stack = [start_key]
        while stack:
            key = stack.pop()
            here = index[key]
            if all(k in fin for k, (_, fin) in zip(key, parts)):
                self.link(here, exit_)
            for i, (k, (aut, _)) in enumerate(zip(key, parts)):
                for tr in aut.by_state[k]:
                    if tr.kind == REFUSE:
                        self.trans.append((here, tr.event, REFUSE, None))
                        continue
                    nk = key[:i] + (tr.dst,) + key[i + 1 :]
                    if nk not in index:
                        index[nk] = self.new()
                        stack.append(nk)
                    self.trans.append((here, tr.event, MATCH, index[nk]))
        return exit_


def _contains_accept(p) -> bool:
    if isinstance(p, PAccept):
        return True
    if isinstance(p, PLoop):
        return _contains_accept(p.body)
    kids = getattr(p, "items", None) or getattr(p, "branches", None) or ()
    return any(_contains_accept(k) for k in kids)


def _eliminate(b: _Builder, root: int, exit_node: int | None) -> tuple[TpAutomaton, set[int]]:
    """Remove epsilon edges; also return the states from which the term may have finished."""

    def closure(s):
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in b.eps.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    out_by: dict[int, list] = {}
    for src, ev, kind, dst in b.trans:
        out_by.setdefault(src, []).append((ev, kind, dst))
    number = {root: 0}
    order = [root]
    transitions = []
    accept = set()
    finals = set()
    k = 0
    while k < len(order):
        node = order[k]
        k += 1
        cl = closure(node)
        if cl & b.accepting:
            accept.add(number[node])
        if exit_node is not None and exit_node in cl:
            finals.add(number[node])
        for x in sorted(cl):
            for ev, kind, dst in out_by.get(x, ()):
                if kind == REFUSE:
                    transitions.append(TpTransition(number[node], ev, REFUSE, None))
                    continue
                if dst not in number:
                    number[dst] = len(order)
                    order.append(dst)
                transitions.append(TpTransition(number[node], ev, MATCH, number[dst]))
    uniq = tuple(dict.fromkeys(transitions))
    return TpAutomaton(len(order), 0, frozenset(accept), uniq), finals


def compile_purpose(body) -> TpAutomaton:
    b = _Builder()
    root = b.new()
    end = b.build(body, root)
    return _merge_accepting(_eliminate(b, root, end)[0])


def _merge_accepting(aut: TpAutomaton) -> TpAutomaton:
    """Collapse accepting states into one; the product never leaves an accepting state."""
    if len(aut.accept) <= 1:
        return aut
    target = min(aut.accept)
    number, n = {}, 0
    for s in range(aut.n_states):
        if s in aut.accept and s != target:
            continue
        number[s] = n
        n += 1
    for s in aut.accept:
        number[s] = number[target]
    trans = tuple(
        dict.fromkeys(
            TpTransition(number[t.src], t.event, t.kind, None if t.dst is None else number[t.dst])
            for t in aut.transitions
            if t.src not in aut.accept
        )
    )
    return TpAutomaton(n, number[aut.initial], frozenset({number[target]}), trans)


# -- matching ---------------------------------------------------------------------------

Env = tuple  # sorted (name, value) pairs


def _rank(v) -> int:
    return v if isinstance(v, int) else soc.VALUE_RANK.get(v, 0)


def _gterm(t, env: dict):
    return env[t.name] if isinstance(t, GVar) else t.value


def eval_guard(g, env: dict) -> bool:
    if g is None:
        return True
    if isinstance(g, GCmp):
        a, b = _rank(_gterm(g.left, env)), _rank(_gterm(g.right, env))
        return {
            "==": a == b, "!=": a != b, "<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b,
        }[g.op]
    if isinstance(g, GNot):
        return not eval_guard(g.arg, env)
    if g.op == "and":
        return all(eval_guard(x, env) for x in g.args)
    return any(eval_guard(x, env) for x in g.args)


def match(ev: EventPattern, lab: Label, env: Env) -> Env | None:
    """Extended environment if ``lab`` matches ``ev`` under ``env``, else None."""
    if lab.is_tau or lab.gate != ev.gate:
        return None
    if ev.offers is None:
        return env if eval_guard(ev.guard, dict(env)) else None
    if len(ev.offers) != len(lab.offers):
        return None
    bound = dict(env)
    for pat, v in zip(ev.offers, lab.offers):
        if pat.kind == "any":
            continue
        if pat.kind == "lit":
            if str(pat.value) != str(v):
                return None
        elif pat.kind == "ref":
            if pat.value not in bound or str(bound[pat.value]) != str(v):
                return None
        else:
            bound[pat.value] = v
    if not eval_guard(ev.guard, bound):
        return None
    return tuple(sorted(bound.items()))


# -- product -------------------------------------------------------------------------------


@dataclass
class Product:
    """Reachable part of model x purpose; accepting states are not expanded."""

    lts: Lts
    keys: list[tuple[int, int, Env]]
    accepting: frozenset[int]


def product(model: Lts, tp: TestPurpose, limit: int | None = None) -> Product:
    limit = state_limit(limit)
    aut = tp.automaton
    out = [model.outgoing(s) for s in range(model.n_states)]
    start = (model.initial, aut.initial, ())
    index = {start: 0}
    keys = [start]
    edges = []
    accepting = set()
    queue = deque([start])
    while queue:
        key = queue.popleft()
        m, t, env = key
        src = index[key]
        if t in aut.accept:
            accepting.add(src)
            continue
        trans = aut.by_state[t]
        for lab, m2 in out[m]:
            if any(tr.kind == REFUSE and match(tr.event, lab, env) is not None for tr in trans):
                continue
            nexts = []
            for tr in trans:
                if tr.kind == MATCH:
                    env2 = match(tr.event, lab, env)
                    if env2 is not None:
                        nexts.append((m2, tr.dst, env2))
            if not nexts:
                nexts.append((m2, t, env))
            for nk in nexts:
                k = index.get(nk)
                if k is None:
                    if len(keys) >= limit:
                        raise ResourceLimitError(f"product exceeds state limit {limit}")
                    k = index[nk] = len(keys)
                    keys.append(nk)
                    queue.append(nk)
                edges.append((src, lab, k))
    return Product(Lts(len(keys), 0, edges), keys, frozenset(accepting))


# -- complete test graphs ----------------------------------------------------------------


class Verdict(Enum):
    PASS = "pass"
    INCONCLUSIVE = "inconclusive"
    FAIL = "fail"

    @property
    def severity(self) -> int:
        return {"pass": 0, "inconclusive": 1, "fail": 2}[self.value]

    def __lt__(self, other):
        return self.severity < other.severity


def worst(verdicts: Iterable[Verdict]) -> Verdict:
    return max(verdicts, key=lambda v: v.severity, default=Verdict.PASS)


@dataclass
class Ctg:
    """Complete test graph; ``pass_state`` merges every accepting product state."""

    lts: Lts
    pass_state: int
    inconclusive_state: int | None
    keys: list  # product key per non-sink state
    is_controllable: Callable[[Label], bool] = soc.is_controllable

    @property
    def verdicts(self) -> dict[int, Verdict]:
        v = {self.pass_state: Verdict.PASS}
        if self.inconclusive_state is not None:
            v[self.inconclusive_state] = Verdict.INCONCLUSIVE
        return v

    @property
    def n_states(self) -> int:
        return self.lts.n_states

    @property
    def n_transitions(self) -> int:
        return self.lts.n_transitions

    def is_sink(self, s: int) -> bool:
        return s == self.pass_state or s == self.inconclusive_state

    @cached_property
    def out(self) -> list[list[tuple[Label, int]]]:
        return [sorted(self.lts.outgoing(s), key=lambda e: (str(e[0]), e[1])) for s in range(self.lts.n_states)]

    @cached_property
    def step(self) -> list[dict[Label, int]]:
        return [dict(o) for o in self.out]

    def controllable_out(self, s: int) -> list[tuple[Label, int]]:
        return [(a, t) for a, t in self.out[s] if self.is_controllable(a)]

    def observable_out(self, s: int) -> list[tuple[Label, int]]:
        return [(a, t) for a, t in self.out[s] if not self.is_controllable(a)]

    def controllable_transitions(self) -> list[tuple[int, Label, int]]:
        return [(s, a, t) for s in range(self.n_states) for a, t in self.controllable_out(s)]

    def annotation(self) -> dict:
        return {
            "states": self.n_states,
            "transitions": self.n_transitions,
            "pass": [self.pass_state],
            "inconclusive": [] if self.inconclusive_state is None else [self.inconclusive_state],
            "controllable_labels": sorted({str(a) for _, a, _ in self.controllable_transitions()}),
            "observable_labels": sorted(
                {str(a) for s in range(self.n_states) for a, _ in self.observable_out(s)}
            ),
        }

    def write(self, aut_path, sidecar_path) -> None:
        aut_write(self.lts, aut_path)
        with open(sidecar_path, "w") as fh:
            json.dump(self.annotation(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def extract_ctg(prod: Product, is_controllable: Callable[[Label], bool] = soc.is_controllable) -> Ctg:
    l = prod.lts
    pred: list[list[int]] = [[] for _ in range(l.n_states)]
    for s, _, t in l.transitions:
        pred[t].append(s)
    live = set(prod.accepting)
    queue = deque(prod.accepting)
    while queue:
        t = queue.popleft()
        for s in pred[t]:
            if s not in live:
                live.add(s)
                queue.append(s)
    if l.initial not in live:
        raise EmptyCtgError("the purpose's goal is unreachable from the initial state")
    if l.initial in prod.accepting:
        return Ctg(Lts(1, 0, []), 0, None, [], is_controllable)
    inner = [s for s in range(l.n_states) if s in live and s not in prod.accepting]
    number = {s: k for k, s in enumerate(inner)}
    pass_state = len(inner)
    incon = pass_state + 1
    edges = []
    used_incon = False
    for s in inner:
        for lab, t in l.outgoing(s):
            if t in prod.accepting:
                edges.append((number[s], lab, pass_state))
            elif t in live:
                edges.append((number[s], lab, number[t]))
            elif not is_controllable(lab):
                edges.append((number[s], lab, incon))
                used_incon = True
    n = incon + 1 if used_incon else incon
    keys = [prod.keys[s] for s in inner]
    return Ctg(Lts(n, number[l.initial], edges), pass_state, incon if used_incon else None, keys, is_controllable)


def choices(ctg: Ctg) -> int:
    """Controllable transitions leaving states that offer at least two of them."""
    total = 0
    for s in range(ctg.n_states):
        k = len(ctg.controllable_out(s))
        if k >= 2:
            total += k
    return total


def decision_states(ctg: Ctg) -> int:
    """Alternative count: states where the tester picks among two or more stimuli."""
    return sum(1 for s in range(ctg.n_states) if len(ctg.controllable_out(s)) >= 2)


# -- test cases ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Stim:
    label: Label
    child: object


@dataclass(frozen=True)
class Obs:
    branches: tuple[tuple[Label, object], ...]

    def get(self, lab: Label):
        for a, node in self.branches:
            if a == lab:
                return node
        return None


@dataclass(frozen=True)
class Leaf:
    verdict: Verdict


@dataclass(frozen=True)
class TestCase:
    id: str
    root: object

    __test__ = False

    def stimuli(self) -> list[Label]:
        out, stack = [], [self.root]
        while stack:
            n = stack.pop()
            if isinstance(n, Stim):
                out.append(n.label)
                stack.append(n.child)
            elif isinstance(n, Obs):
                stack.extend(c for _, c in n.branches)
        return out

    def size(self) -> int:
        count, stack = 0, [self.root]
        while stack:
            n = stack.pop()
            count += 1
            if isinstance(n, Stim):
                stack.append(n.child)
            elif isinstance(n, Obs):
                stack.extend(c for _, c in n.branches)
        return count


INF = float("inf")


def _check_deterministic(ctg: Ctg) -> None:
    for s in range(ctg.n_states):
        labs = [a for a, _ in ctg.out[s]]
        if len(labs) != len(set(labs)):
            raise ValidationError("test extraction needs a CTG that is deterministic on labels")


def _pass_ranks(ctg: Ctg) -> list[float]:
    """Rounds needed to force a verdict sink: stimuli pick, observations are adversarial."""
    n = ctg.n_states
    rank = [INF] * n
    for s in ctg.verdicts:
        rank[s] = 0
    pred: list[list[int]] = [[] for _ in range(n)]
    for s in range(n):
        for _, t in ctg.out[s]:
            pred[t].append(s)
    obs_left = [len(ctg.observable_out(s)) for s in range(n)]
    queue = deque(ctg.verdicts)
    while queue:
        t = queue.popleft()
        for s in dict.fromkeys(pred[t]):
            if rank[s] < INF:
                continue
            if obs_left[s]:
                obs_left[s] -= sum(1 for _, x in ctg.observable_out(s) if x == t)
                if obs_left[s] == 0:
                    rank[s] = rank[t] + 1
                    queue.append(s)
            elif any(x == t for _, x in ctg.controllable_out(s)):
                rank[s] = rank[t] + 1
                queue.append(s)
    return rank


def _reach_dist(ctg: Ctg, target: int) -> dict[int, int]:
    pred: list[list[int]] = [[] for _ in range(ctg.n_states)]
    for s in range(ctg.n_states):
        for _, t in ctg.out[s]:
            pred[t].append(s)
    dist = {target: 0}
    queue = deque([target])
    while queue:
        t = queue.popleft()
        for s in pred[t]:
            if s not in dist:
                dist[s] = dist[t] + 1
                queue.append(s)
    return dist


class _Unfolder:
    def __init__(self, ctg: Ctg, rng: random.Random | None = None):
        _check_deterministic(ctg)
        self.ctg = ctg
        self.rank = _pass_ranks(ctg)
        self.rng = rng
        self.bound = 4 * ctg.n_states + 8
        self._dist: dict[int, dict[int, int]] = {}

    def dist(self, target: int) -> dict[int, int]:
        d = self._dist.get(target)
        if d is None:
            d = self._dist[target] = _reach_dist(self.ctg, target)
        return d

    def pick(self, options):
        if not options:
            return None
        if self.rng is None:
            return options[0]
        return options[self.rng.randrange(len(options))]

    def unfold(self, s: int, goal: tuple[int, Label] | None, depth: int = 0):
        ctg = self.ctg
        verdict = ctg.verdicts.get(s)
        if verdict is not None:
            return Leaf(verdict)
        if depth > self.bound:
            return Leaf(Verdict.INCONCLUSIVE)
        dist = self.dist(goal[0]) if goal else None
        obs = ctg.observable_out(s)
        if obs:
            branches = []
            for lab, t in obs:
                keep = goal if goal and dist.get(t, INF) < dist.get(s, INF) else None
                branches.append((lab, self.unfold(t, keep, depth + 1)))
            return Obs(tuple(branches))
        ctrl = ctg.controllable_out(s)
        if goal is not None:
            if s == goal[0]:
                t = next(t for a, t in ctrl if a == goal[1])
                return Stim(goal[1], self.unfold(t, None, depth + 1))
            here = dist.get(s, INF)
            steps = [(a, t) for a, t in ctrl if dist.get(t, INF) == here - 1]
            if steps:
                a, t = self.pick(steps)
                return Stim(a, self.unfold(t, goal, depth + 1))
        if self.rank[s] < INF:
            best = min(self.rank[t] for _, t in ctrl)
            steps = [(a, t) for a, t in ctrl if self.rank[t] == best]
        else:
            # not forceable: follow any path towards PASS
            d = self.dist(ctg.pass_state)
            best = min(d.get(t, INF) for _, t in ctrl)
            steps = [(a, t) for a, t in ctrl if d.get(t, INF) == best]
        a, t = self.pick(steps)
        return Stim(a, self.unfold(t, None, depth + 1))


def walk(ctg: Ctg, test: TestCase) -> set[tuple[int, Label, int]]:
    """Controllable CTG transitions exercised somewhere in ``test``."""
    out = ctg.step
    seen = set()
    stack = [(ctg.lts.initial, test.root)]
    while stack:
        s, node = stack.pop()
        if isinstance(node, Stim):
            t = out[s][node.label]
            seen.add((s, node.label, t))
            stack.append((t, node.child))
        elif isinstance(node, Obs):
            for lab, child in node.branches:
                stack.append((out[s][lab], child))
    return seen


def extract_test_suite(ctg: Ctg, prefix: str = "t") -> list[TestCase]:
    """Greedy all-choices cover: one test per still-uncovered controllable transition."""
    if ctg.n_states == 1 and not ctg.out[0]:
        return [TestCase(f"{prefix}0", Leaf(Verdict.PASS))]
    unf = _Unfolder(ctg)
    covered: set = set()
    tests = []
    for s, a, t in ctg.controllable_transitions():
        if (s, a, t) in covered:
            continue
        test = TestCase(f"{prefix}{len(tests)}", unf.unfold(ctg.lts.initial, (s, a)))
        hit = walk(ctg, test)
        if (s, a, t) not in hit:
            raise RuntimeError(f"could not steer a test through {a} at state {s}")
        covered |= hit
        tests.append(test)
    if not tests:
        tests.append(TestCase(f"{prefix}0", unf.unfold(ctg.lts.initial, None)))
    return tests


def extract_single_test(ctg: Ctg, seed: int = 0, name: str = "t0") -> TestCase:
    """One test choosing uniformly among the stimuli that make the most progress."""
    unf = _Unfolder(ctg, random.Random(seed))
    return TestCase(name, unf.unfold(ctg.lts.initial, None))


# -- execution -------------------------------------------------------------------------------


def execute(
    test: TestCase,
    impl: Lts,
    seed: int = 0,
    is_controllable: Callable[[Label], bool] = soc.is_controllable,
    max_steps: int = 100_000,
) -> Verdict:
    """Run ``test`` against ``impl``, resolving the implementation's choices with ``seed``.

    A refused stimulus gives INCONCLUSIVE. An output that the test does not
    list, or no output where one is awaited, gives FAIL.
    """
    gates = impl.gates()
    for lab in test.stimuli():
        if lab.gate not in gates:
            raise ValidationError(f"implementation has no gate {lab.gate!r}")
    rng = random.Random(seed)
    succ = impl.succ()
    labels = impl.labels
    state, node = impl.initial, test.root
    for _ in range(max_steps):
        if isinstance(node, Leaf):
            return node.verdict
        moves = succ[state]
        taus = [t for li, t in moves if labels[li].is_tau]
        if isinstance(node, Stim):
            dests = [t for li, t in moves if labels[li] == node.label]
            if dests:
                state, node = dests[rng.randrange(len(dests))], node.child
            elif taus:
                state = taus[rng.randrange(len(taus))]
            else:
                return Verdict.INCONCLUSIVE
            continue
        outputs = [(labels[li], t) for li, t in moves if not labels[li].is_tau and not is_controllable(labels[li])]
        options = outputs + [(None, t) for t in taus]
        if not options:
            return Verdict.FAIL
        lab, t = options[rng.randrange(len(options))]
        state = t
        if lab is None:
            continue
        child = node.get(lab)
        if child is None:
            return Verdict.FAIL
        node = child
    return Verdict.INCONCLUSIVE


def run_suite(tests: Iterable[TestCase], impl: Lts, seed: int = 0, **kw) -> list[Verdict]:
    return [execute(t, impl, seed, **kw) for t in tests]
