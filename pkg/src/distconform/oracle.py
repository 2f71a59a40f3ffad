"""Membership of a global trace in the ∼-closure of a machine's language.

The search walks configurations ``(state, cursors)`` where ``cursors[p]``
says how much of the target's local trace at port ``p`` has been matched.
A firing of ``s --x/(z_1..z_n)--> s'`` needs ``x`` (then ``z_q`` if the
output shares the input's port ``q``) under cursor ``q`` and ``z_p`` under
every other cursor with a non-null output.  There are at most
``|S| * prod(|w_p| + 1)`` configurations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import prod
from typing import Optional

from .fsm import MultiPortFsm, _merged_successors, local_traces, prefixes


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: Optional[tuple] = None    # a trace of the machine ∼ the query
    end_state: Optional[str] = None    # where the witness path ends
    visited: int = 0                   # configurations expanded

    def __bool__(self):
        return self.member


def configuration_bound(m: MultiPortFsm, trace) -> int:
    return len(m.states) * prod(len(w) + 1 for w in local_traces(m, trace))


def compiled_moves(m: MultiPortFsm) -> dict:
    """Per state: ``(in_port, input, [(port, output)], target, transition)`` tuples.

    Kept in tie-break order so breadth-first search finds the
    lexicographically least witness first.
    """
    cache = m.__dict__.get("_compiled_moves")
    if cache is None:
        cache = {}
        for s in m.states:
            moves = []
            for t in m.outgoing(s):
                q = m.input_port[t.input]
                outs = [(p, z) for p, z in enumerate(t.outputs) if z is not None]
                moves.append((q, t.input, outs, t.target, t))
            cache[s] = moves
        m.__dict__["_compiled_moves"] = cache
    return cache


def fire(move, words, cursors):
    """New cursor tuple if ``move`` is enabled at ``cursors``, else ``None``."""
    q, x, outs, _, _ = move
    cq = cursors[q]
    wq = words[q]
    if cq >= len(wq) or wq[cq] != x:
        return None
    new = list(cursors)
    new[q] = cq + 1
    for p, z in outs:
        c = new[p]
        w = words[p]
        if c >= len(w) or w[c] != z:
            return None
        new[p] = c + 1
    return tuple(new)


def member_closure(trace, m: MultiPortFsm) -> Membership:
    """Decide ``trace ∈ ℒ(m)``; on success return the least witness."""
    words = local_traces(m, trace)
    full = tuple(len(w) for w in words)
    moves = compiled_moves(m)
    start = (m.initial, (0,) * m.n_ports)
    parent = {start: None}
    queue = deque([start])
    visited = 0
    while queue:
        config = queue.popleft()
        visited += 1
        state, cursors = config
        if cursors == full:
            return Membership(True, _witness(parent, config), state, visited)
        for move in moves[state]:
            nxt = fire(move, words, cursors)
            if nxt is None:
                continue
            child = (move[3], nxt)
            if child not in parent:
                parent[child] = (config, move[4].label)
                queue.append(child)
    return Membership(False, None, None, visited)


def _witness(parent, config) -> tuple:
    steps = []
    while parent[config] is not None:
        config, label = parent[config]
        steps.append(label)
    return tuple(reversed(steps))


def member_closure_bruteforce(trace, m: MultiPortFsm) -> bool:
    """Reference oracle: search the traces of ``m`` with the same local traces.

    Runs of ``m`` are enumerated step by step; a prefix survives only while
    each of its local traces is a prefix of the target's.
    """
    key = local_traces(m, trace)
    n = len(trace)
    stack = [((), frozenset([m.initial]))]
    while stack:
        prefix, current = stack.pop()
        if len(prefix) == n:
            if local_traces(m, prefix) == key:
                return True
            continue
        for lab, targets in _merged_successors(m, current):
            ext = prefix + (lab,)
            if all(w[:len(v)] == v for v, w in zip(local_traces(m, ext), key)):
                stack.append((ext, targets))
    return False


def first_pc_violation(trace, m: MultiPortFsm) -> Optional[int]:
    """Length of the shortest prefix outside ``ℒ(m)``, or ``None``."""
    for pre in prefixes(trace):
        if not member_closure(pre, m):
            return len(pre)
    return None


def member_pc(trace, m: MultiPortFsm) -> bool:
    """``trace ∈ ℒ_pc(m)``: the trace and all its prefixes lie in ``ℒ(m)``."""
    return first_pc_violation(trace, m) is None
