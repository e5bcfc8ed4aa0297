"""Pure-Python partition refinement, used when the compiled kernel is unavailable.

Graphs arrive as parallel integer sequences ``src``, ``lab``, ``dst``.
Every function returns a block number per state, numbered by first
occurrence.
"""

from __future__ import annotations


def _renumber(keys):
    ids = {}
    return [ids.setdefault(k, len(ids)) for k in keys]


def strong_partition(n, src, lab, dst, init=None):
    block = list(init) if init is not None else [0] * n
    block = _renumber(block)
    out = [[] for _ in range(n)]
    for s, a, t in zip(src, lab, dst):
        out[s].append((a, t))
    count = len(set(block))
    while True:
        sigs = [(block[s], frozenset((a, block[t]) for a, t in out[s])) for s in range(n)]
        new = _renumber(sigs)
        new_count = max(new) + 1 if n else 0
        block = new
        if new_count == count:
            return block
        count = new_count


def branching_partition(n, src, lab, dst, tau, topo=None, init=None):
    """Groote-Vaandrager style splitting on a graph without tau cycles.

    A block B is split by a pair (a, B') when only some of its states can
    reach, through tau steps that stay inside B, a state having an
    a-transition into B' (an inert tau, B' == B with a == tau, never splits).
    """
    block = _renumber(init if init is not None else [0] * n)
    out = [[] for _ in range(n)]
    tau_in = [[] for _ in range(n)]
    for s, a, t in zip(src, lab, dst):
        out[s].append((a, t))
        if a == tau:
            tau_in[t].append(s)

    members: dict[int, list[int]] = {}
    for s, b in enumerate(block):
        members.setdefault(b, []).append(s)
    next_id = len(members)
    stack = sorted(members)
    while stack:
        b = stack.pop()
        states = members.get(b)
        if states is None or len(states) < 2:
            continue
        splitters = sorted(
            {(a, block[t]) for s in states for a, t in out[s] if not (a == tau and block[t] == b)}
        )
        split_done = False
        for a, target in splitters:
            inside = set(states)
            pos = {s for s in states if any(x == a and block[t] == target for x, t in out[s])}
            work = list(pos)
            while work:
                t = work.pop()
                for s in tau_in[t]:
                    if s in inside and s not in pos and block[s] == b:
                        pos.add(s)
                        work.append(s)
            if 0 < len(pos) < len(states):
                rest = [s for s in states if s not in pos]
                members[b] = rest
                members[next_id] = sorted(pos)
                for s in pos:
                    block[s] = next_id
                # A split may invalidate stability of every block that points into b.
                stack = sorted(members)
                next_id += 1
                split_done = True
                break
        if not split_done:
            continue
    return _renumber(block)
