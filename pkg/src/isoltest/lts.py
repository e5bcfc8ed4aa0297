"""Explicit labeled transition systems and the structural operations on them.

States are dense integers ``0..n-1``. Labels are interned per LTS, so a
transition is stored as ``(source, label_index, target)``.
"""

from __future__ import annotations

import os
import re
from collections import deque
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Iterable, Iterator, Sequence

Value = "str | int"

DEFAULT_STATE_LIMIT = 10**7
_GATE_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ResourceLimitError(RuntimeError):
    """Raised when an exploration exceeds the configured state ceiling."""


class ValidationError(ValueError):
    pass


def state_limit(limit: int | None = None) -> int:
    if limit is not None:
        return limit
    env = os.environ.get("ISOLTEST_STATE_LIMIT")
    return int(env) if env else DEFAULT_STATE_LIMIT


@dataclass(frozen=True, order=True)
class Label:
    """A gate name with an ordered tuple of offers. ``TAU`` is the internal label."""

    gate: str
    offers: tuple = ()

    def __post_init__(self):
        if not isinstance(self.offers, tuple):
            object.__setattr__(self, "offers", tuple(self.offers))

    @property
    def is_tau(self) -> bool:
        return self.gate == "i" and not self.offers

    def __str__(self) -> str:
        if not self.offers:
            return self.gate
        return " ".join([self.gate] + [f"!{v}" for v in self.offers])

    @classmethod
    def parse(cls, text: str) -> "Label":
        """Parse the ``GATE !v1 !v2`` rendering (``i`` is tau)."""
        parts = text.split()
        if not parts:
            raise ValueError("empty label")
        gate, rest = parts[0], parts[1:]
        if not _GATE_RE.match(gate):
            raise ValueError(f"bad gate name {gate!r}")
        offers = []
        for tok in rest:
            if not tok.startswith("!") or len(tok) == 1:
                raise ValueError(f"bad offer {tok!r}")
            v = tok[1:]
            offers.append(int(v) if re.fullmatch(r"-?\d+", v) else v)
        return cls(gate, tuple(offers))


TAU = Label("i", ())


def visible(gate: str, *offers) -> Label:
    if gate == "i":
        raise ValidationError("gate 'i' is reserved for the internal action")
    return Label(gate, tuple(offers))


class Lts:
    """An explicit LTS.

    Transitions are deduplicated and kept sorted; the label table holds
    exactly the labels that occur on transitions.
    """

    __slots__ = ("n_states", "initial", "labels", "transitions", "_succ", "_label_index")

    def __init__(self, n_states: int, initial: int, transitions: Iterable[tuple[int, Label, int]]):
        if n_states < 1:
            raise ValidationError("an LTS needs at least one state")
        if not 0 <= initial < n_states:
            raise ValidationError(f"initial state {initial} out of range")
        index: dict[Label, int] = {}
        labels: list[Label] = []
        triples = set()
        for s, lab, t in transitions:
            if not (0 <= s < n_states and 0 <= t < n_states):
                raise ValidationError(f"transition ({s}, {lab}, {t}) out of range")
            li = index.get(lab)
            if li is None:
                li = index[lab] = len(labels)
                labels.append(lab)
            triples.add((s, li, t))
        # Canonical label order keeps outputs stable across construction orders.
        order = sorted(range(len(labels)), key=lambda i: _label_key(labels[i]))
        remap = [0] * len(labels)
        for new, old in enumerate(order):
            remap[old] = new
        self.labels: tuple[Label, ...] = tuple(labels[i] for i in order)
        self.transitions: list[tuple[int, int, int]] = sorted((s, remap[li], t) for s, li, t in triples)
        self.n_states = n_states
        self.initial = initial
        self._succ = None
        self._label_index = None

    # -- queries ---------------------------------------------------------

    @property
    def n_transitions(self) -> int:
        return len(self.transitions)

    def label_count(self) -> int:
        """Distinct visible labels occurring on transitions."""
        return sum(1 for lab in self.labels if not lab.is_tau)

    def label_index(self, lab: Label) -> int | None:
        if self._label_index is None:
            self._label_index = {l: i for i, l in enumerate(self.labels)}
        return self._label_index.get(lab)

    def succ(self) -> list[list[tuple[int, int]]]:
        """Adjacency: ``succ()[s]`` is a list of ``(label_index, target)``."""
        if self._succ is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_states)]
            for s, li, t in self.transitions:
                adj[s].append((li, t))
            self._succ = adj
        return self._succ

    def edges(self) -> Iterator[tuple[int, Label, int]]:
        for s, li, t in self.transitions:
            yield s, self.labels[li], t

    def outgoing(self, s: int) -> list[tuple[Label, int]]:
        return [(self.labels[li], t) for li, t in self.succ()[s]]

    def gates(self) -> set[str]:
        return {lab.gate for lab in self.labels if not lab.is_tau}

    def stats(self) -> tuple[int, int, int]:
        return self.n_states, self.n_transitions, self.label_count()

    def has_tau(self) -> bool:
        return any(lab.is_tau for lab in self.labels)

    def reachable(self) -> list[int]:
        """States in breadth-first order from the initial state."""
        adj = self.succ()
        seen = [False] * self.n_states
        seen[self.initial] = True
        order = [self.initial]
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for _, t in adj[s]:
                if not seen[t]:
                    seen[t] = True
                    order.append(t)
                    queue.append(t)
        return order

    def canonical(self) -> "Lts":
        """Restrict to reachable states and renumber them breadth-first.

        Successors are visited in (label, target) order so the numbering is
        a function of the graph alone.
        """
        adj = self.succ()
        number = {self.initial: 0}
        queue = deque([self.initial])
        while queue:
            s = queue.popleft()
            for li, t in sorted(adj[s]):
                if t not in number:
                    number[t] = len(number)
                    queue.append(t)
        return Lts(
            len(number),
            0,
            ((number[s], self.labels[li], number[t]) for s, li, t in self.transitions if s in number),
        )

    def __repr__(self) -> str:
        n, m, k = self.stats()
        return f"Lts(states={n}, transitions={m}, labels={k})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lts):
            return NotImplemented
        return (
            self.n_states == other.n_states
            and self.initial == other.initial
            and set(self.edges()) == set(other.edges())
        )

    __hash__ = None


def _label_key(lab: Label):
    return (lab.gate, tuple((isinstance(v, int), str(v)) for v in lab.offers))


# -- composition and label operations ----------------------------------------


@dataclass(frozen=True)
class SyncRule:
    """Labels on ``gate`` fire only when every participant offers them, jointly."""

    gate: str
    participants: frozenset

    def __init__(self, gate: str, participants: Iterable[int]):
        object.__setattr__(self, "gate", gate)
        object.__setattr__(self, "participants", frozenset(participants))
        if not self.participants:
            raise ValidationError(f"sync rule on {gate!r} has no participants")


def parallel_compose(components: Sequence[Lts], rules: Sequence[SyncRule] = (), limit: int | None = None) -> Lts:
    """Reachable product of ``components`` under the given synchronization rules."""
    limit = state_limit(limit)
    k = len(components)
    if k == 0:
        raise ValidationError("nothing to compose")
    by_gate: dict[str, SyncRule] = {}
    for r in rules:
        if r.gate in by_gate:
            raise ValidationError(f"gate {r.gate!r} appears in two sync rules")
        bad = [i for i in r.participants if not 0 <= i < k]
        if bad:
            raise ValidationError(f"sync rule on {r.gate!r} references unknown component(s) {bad}")
        by_gate[r.gate] = r

    sync_parts: dict[Label, tuple[int, ...]] = {}
    for c in components:
        for lab in c.labels:
            r = None if lab.is_tau else by_gate.get(lab.gate)
            if r is not None:
                sync_parts[lab] = tuple(sorted(r.participants))

    succs = []
    for c in components:
        table: list[dict[Label, list[int]]] = [dict() for _ in range(c.n_states)]
        for s, lab, t in c.edges():
            table[s].setdefault(lab, []).append(t)
        succs.append(table)

    start = tuple(c.initial for c in components)
    index = {start: 0}
    queue = deque([start])
    edges: list[tuple[int, Label, int]] = []

    def add(src_id: int, lab: Label, tgt: tuple):
        tid = index.get(tgt)
        if tid is None:
            if len(index) >= limit:
                raise ResourceLimitError(f"composition exceeds state limit {limit}")
            tid = index[tgt] = len(index)
            queue.append(tgt)
        edges.append((src_id, lab, tid))

    while queue:
        state = queue.popleft()
        sid = index[state]
        pending: dict[Label, dict[int, list[int]]] = {}
        for i, local in enumerate(state):
            for lab, targets in succs[i][local].items():
                parts = sync_parts.get(lab)
                if parts is None or i not in parts:
                    for t in targets:
                        nxt = list(state)
                        nxt[i] = t
                        add(sid, lab, tuple(nxt))
                else:
                    pending.setdefault(lab, {})[i] = targets
        for lab, offered in pending.items():
            parts = sync_parts[lab]
            if len(offered) != len(parts):
                continue
            for combo in cartesian(*(offered[i] for i in parts)):
                nxt = list(state)
                for i, t in zip(parts, combo):
                    nxt[i] = t
                add(sid, lab, tuple(nxt))
    return Lts(len(index), 0, edges)


def hide(l: Lts, gates: Iterable[str]) -> Lts:
    gates = set(gates)
    return Lts(l.n_states, l.initial, ((s, TAU if lab.gate in gates else lab, t) for s, lab, t in l.edges()))


def rename(l: Lts, f: Callable[[Label], Label]) -> Lts:
    """Apply ``f`` to every label; ``f`` must map tau to tau."""
    cache = {}
    for lab in l.labels:
        new = f(lab)
        if lab.is_tau and not new.is_tau:
            raise ValidationError("renaming must map tau to tau")
        cache[lab] = new
    return Lts(l.n_states, l.initial, ((s, cache[lab], t) for s, lab, t in l.edges()))


def tau_closure(l: Lts, states: Iterable[int]) -> frozenset[int]:
    adj = l.succ()
    tau = l.label_index(TAU)
    seen = set(states)
    if tau is None:
        return frozenset(seen)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for li, t in adj[s]:
            if li == tau and t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def determinize(l: Lts, limit: int | None = None, *, weak: bool = True) -> Lts:
    """Subset construction. With ``weak`` (the default) tau steps are absorbed.

    The result is tau-free and deterministic; ``weak=False`` treats tau as an
    ordinary label instead.
    """
    limit = state_limit(limit)
    adj = l.succ()
    tau = l.label_index(TAU) if weak else None
    close = (lambda ss: tau_closure(l, ss)) if weak else frozenset
    start = close([l.initial])
    index = {start: 0}
    queue = deque([start])
    edges = []
    while queue:
        cur = queue.popleft()
        sid = index[cur]
        moves: dict[int, set[int]] = {}
        for s in cur:
            for li, t in adj[s]:
                if li != tau:
                    moves.setdefault(li, set()).add(t)
        for li in sorted(moves):
            nxt = close(moves[li])
            tid = index.get(nxt)
            if tid is None:
                if len(index) >= limit:
                    raise ResourceLimitError(f"determinization exceeds state limit {limit}")
                tid = index[nxt] = len(index)
                queue.append(nxt)
            edges.append((sid, l.labels[li], tid))
    return Lts(len(index), 0, edges)


def disjoint_union(a: Lts, b: Lts) -> tuple[Lts, int, int]:
    """Both LTSs side by side (initial of the result is ``a``'s); returns the two initials."""
    off = a.n_states
    edges = list(a.edges()) + [(s + off, lab, t + off) for s, lab, t in b.edges()]
    return Lts(a.n_states + b.n_states, a.initial, edges), a.initial, b.initial + off


def is_deterministic(l: Lts) -> bool:
    for out in l.succ():
        seen = set()
        for li, _ in out:
            if li in seen:
                return False
            seen.add(li)
    return not l.has_tau()


# -- AUT files ---------------------------------------------------------------


class AutParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


_HEADER = re.compile(r"^\s*des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_TRANS = re.compile(r'^\s*\(\s*(\d+)\s*,\s*(?:"((?:[^"\\]|\\.)*)"|([^,"]+?))\s*,\s*(\d+)\s*\)\s*$')


def aut_dumps(l: Lts) -> str:
    lines = [f"des ({l.initial}, {l.n_transitions}, {l.n_states})"]
    for s, lab, t in l.edges():
        lines.append(f'({s}, "{lab}", {t})')
    return "\n".join(lines) + "\n"


def aut_loads(text: str) -> Lts:
    rows = text.splitlines()
    first = next((i for i, r in enumerate(rows) if r.strip()), None)
    if first is None:
        raise AutParseError("missing 'des' header", 1)
    m = _HEADER.match(rows[first])
    if not m:
        raise AutParseError("malformed header, expected 'des (<initial>, <#transitions>, <#states>)'", first + 1)
    initial, n_trans, n_states = (int(g) for g in m.groups())
    if n_states < 1 or initial >= n_states:
        raise AutParseError("initial state out of range", first + 1)
    edges = []
    for lineno, row in enumerate(rows[first + 1 :], start=first + 2):
        if not row.strip():
            continue
        tm = _TRANS.match(row)
        if not tm:
            raise AutParseError(f"malformed transition {row.strip()!r}", lineno)
        s, quoted, bare, t = tm.groups()
        s, t = int(s), int(t)
        if s >= n_states or t >= n_states:
            raise AutParseError("state index out of range", lineno)
        text_label = quoted if quoted is not None else bare.strip()
        try:
            lab = Label.parse(text_label)
        except ValueError as exc:
            raise AutParseError(str(exc), lineno) from None
        edges.append((s, lab, t))
    if len(edges) != n_trans:
        raise AutParseError(f"header announces {n_trans} transitions, found {len(edges)}", first + 1)
    return Lts(n_states, initial, edges)


def aut_write(l: Lts, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(aut_dumps(l))


def aut_read(path) -> Lts:
    with open(path, encoding="utf-8") as f:
        return aut_loads(f.read())
