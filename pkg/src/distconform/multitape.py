"""Multi-tape finite automata in which every state is final.

A tuple ``(w_1, ..., w_r)`` is accepted when some word of the automaton
projects onto ``w_i`` on every tape ``i``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import prod

from .conformance import Verdict
from .errors import ModelError, UsageError
from .fsm import MultiPortFsm, Transition, fresh_state


@dataclass(frozen=True)
class MultiTapeFA:
    states: tuple
    initial: str
    alphabets: tuple
    transitions: tuple = ()

    def __post_init__(self):
        set_ = lambda name, value: object.__setattr__(self, name, value)
        set_("states", tuple(self.states))
        set_("alphabets", tuple(tuple(a) for a in self.alphabets))
        if not self.alphabets:
            raise ModelError("an automaton needs at least one tape")
        if len(set(self.states)) != len(self.states):
            raise ModelError("duplicate state identifier")
        if self.initial not in self.states:
            raise ModelError(f"initial state {self.initial!r} is not declared")
        seen = set()
        for tape in self.alphabets:
            for a in tape:
                if a in seen:
                    raise ModelError(f"symbol {a!r} appears on two tapes")
                seen.add(a)
        trans = set()
        for src, sym, dst in self.transitions:
            if src not in self.state_index or dst not in self.state_index:
                raise ModelError(f"transition ({src}, {sym}, {dst}) uses an undeclared state")
            if sym not in self.tape_of:
                raise ModelError(f"transition ({src}, {sym}, {dst}) uses unknown symbol {sym!r}")
            trans.add((src, sym, dst))
        order = lambda t: (self.state_index[t[0]], self.symbol_order[t[1]], self.state_index[t[2]])
        set_("transitions", tuple(sorted(trans, key=order)))

    @property
    def tapes(self) -> int:
        return len(self.alphabets)

    @cached_property
    def state_index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def tape_of(self) -> dict:
        return {a: i for i, tape in enumerate(self.alphabets) for a in tape}

    @cached_property
    def symbol_order(self) -> dict:
        return {a: i for i, a in enumerate(a for tape in self.alphabets for a in tape)}

    @cached_property
    def outgoing(self) -> dict:
        out = {s: [] for s in self.states}
        for src, sym, dst in self.transitions:
            out[src].append((sym, dst))
        return out

    def targets(self, state, symbol) -> list:
        return [d for a, d in self.outgoing[state] if a == symbol]

    def project(self, word) -> tuple:
        tapes = [[] for _ in self.alphabets]
        for a in word:
            tapes[self.tape_of[a]].append(a)
        return tuple(tuple(t) for t in tapes)

    def tuple_key(self, tup) -> tuple:
        """Order: total length, then per-tape lexicographic."""
        return (sum(map(len, tup)), tuple(tuple(self.symbol_order[a] for a in w) for w in tup))

    def validate_tuple(self, tup):
        if len(tup) != self.tapes:
            raise UsageError(f"tuple has {len(tup)} components, automaton has {self.tapes} tapes")
        for i, w in enumerate(tup):
            for a in w:
                if self.tape_of.get(a) != i:
                    raise UsageError(f"{a!r} is not a symbol of tape {i + 1}")


def require_same_tapes(a: MultiTapeFA, b: MultiTapeFA):
    if a.alphabets != b.alphabets:
        raise UsageError("automata must have the same tape alphabets")


@dataclass(frozen=True)
class TupleAcceptance:
    accepted: bool
    visited: int

    def __bool__(self):
        return self.accepted


def accepts_tuple(a: MultiTapeFA, tup) -> TupleAcceptance:
    tup = tuple(tuple(w) for w in tup)
    a.validate_tuple(tup)
    full = tuple(len(w) for w in tup)
    start = (a.initial, (0,) * a.tapes)
    seen = {start}
    queue = deque([start])
    visited = 0
    while queue:
        state, cur = queue.popleft()
        visited += 1
        if cur == full:
            return TupleAcceptance(True, visited)
        for sym, dst in a.outgoing[state]:
            i = a.tape_of[sym]
            c = cur[i]
            if c < full[i] and tup[i][c] == sym:
                nxt = (dst, cur[:i] + (c + 1,) + cur[i + 1:])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return TupleAcceptance(False, visited)


def configuration_bound(a: MultiTapeFA, tup) -> int:
    return len(a.states) * prod(len(w) + 1 for w in tup)


def _disjoint(a: MultiTapeFA, b: MultiTapeFA):
    ren_a = {s: f"1.{s}" for s in a.states}
    ren_b = {s: f"2.{s}" for s in b.states}
    states = [ren_a[s] for s in a.states] + [ren_b[s] for s in b.states]
    trans = [(ren_a[s], x, ren_a[d]) for s, x, d in a.transitions]
    trans += [(ren_b[s], x, ren_b[d]) for s, x, d in b.transitions]
    return ren_a, ren_b, states, trans


def union(a: MultiTapeFA, b: MultiTapeFA) -> MultiTapeFA:
    """Fresh initial state copying the initial moves of both operands."""
    require_same_tapes(a, b)
    ren_a, ren_b, states, trans = _disjoint(a, b)
    r0 = "r0"
    while r0 in states:
        r0 += "'"
    trans += [(r0, x, ren_a[d]) for s, x, d in a.transitions if s == a.initial]
    trans += [(r0, x, ren_b[d]) for s, x, d in b.transitions if s == b.initial]
    return MultiTapeFA([r0] + states, r0, a.alphabets, trans)


def concat(a: MultiTapeFA, b: MultiTapeFA) -> MultiTapeFA:
    """Automaton for the elementwise concatenation of the tuple languages.

    Every move of ``a`` may instead land in ``b``'s initial state; the
    initial state of ``a`` also copies the initial moves of ``b`` so that the
    empty tuple of ``a`` can be followed by any tuple of ``b``.
    """
    require_same_tapes(a, b)
    ren_a, ren_b, states, trans = _disjoint(a, b)
    q0 = ren_b[b.initial]
    trans += [(ren_a[s], x, q0) for s, x, d in a.transitions]
    trans += [(ren_a[a.initial], x, ren_b[d]) for s, x, d in b.transitions if s == b.initial]
    return MultiTapeFA(states, ren_a[a.initial], a.alphabets, trans)


VERDICT_PORT_OUTPUTS = ("0", "1")


def embed_fsm(a: MultiTapeFA) -> MultiPortFsm:
    """The FSM ``F(a)``: tapes become input ports plus an output port for 0/1.

    Along a move of ``a`` the FSM may answer 0 or 1; undefined moves, and
    everything after them, answer 0 from the sink ``s_e``.
    """
    r = a.tapes
    clash = set(a.tape_of) & set(VERDICT_PORT_OUTPUTS)
    if clash:
        raise ModelError(f"tape symbols {sorted(clash)} clash with the verdict outputs")
    one = (None,) * r + ("1",)
    zero = (None,) * r + ("0",)
    probe = MultiPortFsm(a.states, a.initial, a.alphabets + ((),), ((),) * r + (VERDICT_PORT_OUTPUTS,))
    sink = fresh_state(probe, "s_e")
    trans = []
    for s in a.states:
        for tape in a.alphabets:
            for z in tape:
                targets = a.targets(s, z)
                if targets:
                    for d in targets:
                        trans.append(Transition(s, z, one, d))
                        trans.append(Transition(s, z, zero, d))
                else:
                    trans.append(Transition(s, z, zero, sink))
    for tape in a.alphabets:
        for z in tape:
            trans.append(Transition(sink, z, zero, sink))
    return MultiPortFsm(a.states + (sink,), a.initial, a.alphabets + ((),),
                        ((),) * r + (VERDICT_PORT_OUTPUTS,), trans)


def tuple_levels(a: MultiTapeFA, bound: int):
    """Per total length: ``{tuple: states reachable by some word with that tuple}``."""
    level = {((),) * a.tapes: {a.initial}}
    for depth in range(bound + 1):
        yield depth, level
        if depth == bound:
            return
        nxt = {}
        for tup, states in level.items():
            for s in states:
                for sym, dst in a.outgoing[s]:
                    i = a.tape_of[sym]
                    child = tup[:i] + (tup[i] + (sym,),) + tup[i + 1:]
                    nxt.setdefault(child, set()).add(dst)
        level = nxt


def bounded_tuples(a: MultiTapeFA, bound: int) -> set:
    return {t for _, level in tuple_levels(a, bound) for t in level}


def bounded_tuple_inclusion(a: MultiTapeFA, b: MultiTapeFA, bound: int) -> Verdict:
    """Is every tuple of ``a`` with total length ≤ ``bound`` accepted by ``b``?"""
    require_same_tapes(a, b)
    for _, level in tuple_levels(a, bound):
        missing = [t for t in level if not accepts_tuple(b, t)]
        if missing:
            witness = min(missing, key=a.tuple_key)
            return Verdict(False, counterexample=witness, prefix_length=sum(map(len, witness)))
    return Verdict(True)
