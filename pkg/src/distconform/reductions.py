"""Hardness gadgets as concrete machine pairs, with brute-force solvers.

``gen_pcp_gadget`` turns a Post correspondence instance into two 2-tape
automata whose tuple-language inclusion fails exactly when the instance is
solvable; ``gen_sat_gadget`` turns a one-in-three SAT instance into two
DFSMs and a bound ``k`` such that bounded strong conformance holds exactly
when the instance is satisfiable.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import UsageError
from .fsm import MultiPortFsm, Transition
from .multitape import MultiTapeFA, embed_fsm


# -- Post correspondence ------------------------------------------------

@dataclass(frozen=True)
class PcpInstance:
    pairs: tuple   # ((alpha, beta), ...) with alpha, beta tuples of symbols

    def __post_init__(self):
        pairs = tuple((tuple(a), tuple(b)) for a, b in self.pairs)
        if not pairs:
            raise UsageError("a PCP instance needs at least one pair")
        if any(not a or not b for a, b in pairs):
            raise UsageError("PCP words must be non-empty")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_strings(cls, *pairs):
        return cls(tuple((tuple(a), tuple(b)) for a, b in pairs))

    @property
    def alphabet(self) -> tuple:
        seen = {}
        for a, b in self.pairs:
            for c in a + b:
                seen.setdefault(c, None)
        return tuple(seen)

    def concatenations(self, indices):
        """``(alpha_{i1}...alpha_{ik}, beta_{i1}...beta_{ik})`` for 1-based indices."""
        top = tuple(c for i in indices for c in self.pairs[i - 1][0])
        bottom = tuple(c for i in indices for c in self.pairs[i - 1][1])
        return top, bottom

    def is_solution(self, indices) -> bool:
        if not indices:
            return False
        top, bottom = self.concatenations(indices)
        return top == bottom


def solve_pcp_bounded(inst: PcpInstance, max_indices: int) -> Optional[tuple]:
    """Shortest solution (least in index order among those) with ≤ ``max_indices`` indices.

    Breadth-first over the unmatched overhang; two index sequences leaving
    the same overhang have the same continuations, so only the first is kept.
    """
    if max_indices < 1:
        raise UsageError("bound must be at least 1")
    start = ("", ())          # (side carrying the overhang, overhang)
    parent = {start: None}
    queue = deque([(start, 0)])
    while queue:
        node, depth = queue.popleft()
        if depth == max_indices:
            continue
        side, over = node
        for i, (a, b) in enumerate(inst.pairs, start=1):
            top = (over if side == "top" else ()) + a
            bottom = (over if side == "bottom" else ()) + b
            n = min(len(top), len(bottom))
            if top[:n] != bottom[:n]:
                continue
            if len(top) == len(bottom):
                seq = [i]
                cur = node
                while parent[cur] is not None:
                    cur, j = parent[cur]
                    seq.append(j)
                seq = tuple(reversed(seq))
                assert inst.is_solution(seq)
                return seq
            nxt = ("top", top[n:]) if len(top) > n else ("bottom", bottom[n:])
            if nxt not in parent:
                parent[nxt] = (node, i)
                queue.append((nxt, depth + 1))
    return None


X, X_END = "x", "x'"


def tape_symbol(a: str, tape: int) -> str:
    return f"{a}_{tape}"


def pcp_alphabets(inst: PcpInstance) -> tuple:
    sigma = inst.alphabet
    return (tuple(tape_symbol(a, 1) for a in sigma) + (X, X_END),
            tuple(tape_symbol(a, 2) for a in sigma))


def gen_pcp_gadget(inst: PcpInstance):
    """``(N, M)`` with ``ℒ(N) ⊆ ℒ(M)`` iff ``inst`` has no solution.

    ``N`` reads ``x``, then one or more blocks ``f1(alpha_i) f2(beta_i)``
    returning to a hub, then ``x'``.  ``M`` accepts every tuple
    ``(x f1(w1) [x'], f2(w2))`` except those with ``x'`` and ``w1 = w2``.
    """
    alph = pcp_alphabets(inst)
    f1 = lambda w: [tape_symbol(a, 1) for a in w]
    f2 = lambda w: [tape_symbol(a, 2) for a in w]

    # at least one block: the empty index sequence is not a solution
    states = ["n0", "n1", "hub", "end"]
    trans = [("n0", X, "n1"), ("hub", X_END, "end")]
    for i, (alpha, beta) in enumerate(inst.pairs, start=1):
        block = f1(alpha) + f2(beta)
        first = f"p{i}_1"
        trans.append(("n1", block[0], first))
        prev = "hub"
        for j, sym in enumerate(block[:-1], start=1):
            cur = f"p{i}_{j}"
            states.append(cur)
            trans.append((prev, sym, cur))
            prev = cur
        trans.append((prev, block[-1], "hub"))
    n = MultiTapeFA(states, "n0", alph, trans)

    sigma = inst.alphabet
    states = ["s0", "s0'", "s1", "s2", "s3", "s4", "s5", "s6"]
    trans = [("s0", X, "s0'"),
             ("s1", X_END, "s4"), ("s3", X_END, "s5"), ("s2", X_END, "s6")]
    for a in sigma:
        a1, a2 = tape_symbol(a, 1), tape_symbol(a, 2)
        mid = f"u_{a}"
        states.append(mid)
        trans += [("s0'", a1, mid), (mid, a2, "s0'"),       # (a,a) loop
                  ("s0'", a2, "s1"), ("s1", a2, "s1"),      # w1 strict prefix of w2
                  ("s0'", a1, "s3"), ("s3", a1, "s3"),      # w2 strict prefix of w1
                  ("s2", a1, "s2"), ("s2", a2, "s2")]
        for b in sigma:
            if b != a:
                trans.append((mid, tape_symbol(b, 2), "s2"))  # first difference
    m = MultiTapeFA(states, "s0", alph, trans)
    return n, m


def pcp_witness(inst: PcpInstance, indices) -> tuple:
    """The tuple ``(x f1(w) x', f2(w))`` produced by a solution."""
    top, bottom = inst.concatenations(indices)
    return ((X,) + tuple(tape_symbol(a, 1) for a in top) + (X_END,),
            tuple(tape_symbol(a, 2) for a in bottom))


def gen_pcp_fsm_gadget(inst: PcpInstance):
    n, m = gen_pcp_gadget(inst)
    return embed_fsm(n), embed_fsm(m)


def gen_intersection_gadget(alphabet) -> MultiTapeFA:
    """Three-tape automaton whose non-empty tuples all contain ``x'``."""
    sigma = tuple(alphabet)
    alph = (tuple(tape_symbol(a, 1) for a in sigma) + (X,),
            tuple(tape_symbol(a, 2) for a in sigma), (X_END,))
    states = ["s0", "s1", "s2"]
    trans = [("s0", X_END, "s1"), ("s1", X, "s2")]
    for a in sigma:
        states.append(f"c_{a}")
        trans += [("s1", tape_symbol(a, 1), f"c_{a}"), (f"c_{a}", tape_symbol(a, 2), "s1")]
    return MultiTapeFA(states, "s0", alph, trans)


# -- one-in-three SAT ------------------------------------------------------

@dataclass(frozen=True)
class OneInThreeSatInstance:
    variables: int
    clauses: tuple    # ((var, positive), (var, positive), (var, positive)), vars 1-based

    def __post_init__(self):
        clauses = tuple(tuple((int(v), bool(pos)) for v, pos in c) for c in self.clauses)
        if self.variables < 1:
            raise UsageError("need at least one variable")
        for c in clauses:
            if len(c) != 3:
                raise UsageError("every clause has exactly three literals")
            for v, _ in c:
                if not 1 <= v <= self.variables:
                    raise UsageError(f"variable {v} out of range 1..{self.variables}")
        object.__setattr__(self, "clauses", clauses)

    def satisfied_by(self, assignment) -> bool:
        """``assignment[i-1]`` is the value of variable ``i``."""
        return all(sum(assignment[v - 1] == pos for v, pos in c) == 1 for c in self.clauses)


SAT_VARIABLE_CAP = 20


def solve_one_in_three(inst: OneInThreeSatInstance, cap: int = SAT_VARIABLE_CAP) -> Optional[tuple]:
    """First satisfying assignment, enumerating with ``True`` before ``False``."""
    if inst.variables > cap:
        raise UsageError(f"{inst.variables} variables exceed the brute-force cap of {cap}")
    for assignment in itertools.product((True, False), repeat=inst.variables):
        if inst.satisfied_by(assignment):
            return assignment
    return None


@dataclass(frozen=True)
class SatGadget:
    n: MultiPortFsm
    m: MultiPortFsm
    k: int
    port_map: dict = field(default_factory=dict)   # reduction port name -> 1-based port


def _sat_symbols(inst):
    r, q = inst.variables, len(inst.clauses)
    z = {i: f"z{i}" for i in range(1, r + 1)}
    z[-1], z[0] = "z_-1", "z0"
    y = {r + j: f"y{r + j}" for j in range(1, q + 1)}
    return z, y


def sat_m1(inst: OneInThreeSatInstance) -> MultiPortFsm:
    """The four-state DFSM whose ∼-closure encodes the instance.

    Ports are renumbered: reduction port ``p`` (from -1) is port ``p + 2``.
    In ``s1`` input ``z_p`` sends ``y_{r+j}`` to every clause ``j`` holding
    literal ``z_p``, in ``s2`` to every clause holding ``¬z_p``.  A clause
    holding the same literal twice cannot be served by one output, so such a
    move instead emits ``bad`` at port 1, which the target trace never has.
    """
    r, q = inst.variables, len(inst.clauses)
    z, y = _sat_symbols(inst)
    width = r + q + 2
    null = (None,) * width

    def emit(p, positive):
        outs = [None] * width
        bad = False
        for j, clause in enumerate(inst.clauses, start=1):
            count = sum(1 for v, pos in clause if v == p and pos == positive)
            if count == 1:
                outs[r + j + 1] = y[r + j]
            elif count > 1:
                bad = True
        if bad:
            outs[0] = "bad"
        return tuple(outs)

    moves = {p: (emit(p, True), emit(p, False)) for p in range(1, r + 1)}
    needs_bad = any("bad" in o for pair in moves.values() for o in pair)

    inputs = [(z[-1],), (z[0],)] + [(z[p],) for p in range(1, r + 1)] + [()] * q
    outputs = [("bad",) if needs_bad else (), ()] + [()] * r + [(y[r + j],) for j in range(1, q + 1)]
    trans = [Transition("s0", z[-1], null, "s1"), Transition("s1", z[-1], null, "s1"),
             Transition("s2", z[-1], null, "s2"), Transition("s3", z[-1], null, "s3"),
             Transition("s0", z[0], null, "s0"), Transition("s1", z[0], null, "s2"),
             Transition("s2", z[0], null, "s2"), Transition("s3", z[0], null, "s3")]
    for p in range(1, r + 1):
        pos, neg = moves[p]
        trans += [Transition("s1", z[p], pos, "s1"), Transition("s2", z[p], neg, "s2"),
                  Transition("s0", z[p], null, "s3"), Transition("s3", z[p], null, "s3")]
    return MultiPortFsm(("s0", "s1", "s2", "s3"), "s0", inputs, outputs, trans)


def sat_target_trace(inst: OneInThreeSatInstance) -> tuple:
    """``z_-1 z0 z1 ... z_{r-1}`` with null output, then ``z_r`` emitting every clause output."""
    from .fsm import Step
    r, q = inst.variables, len(inst.clauses)
    z, y = _sat_symbols(inst)
    width = r + q + 2
    null = (None,) * width
    last = tuple([None] * (r + 2) + [y[r + j] for j in range(1, q + 1)])
    steps = [Step(z[-1], null), Step(z[0], null)] + [Step(z[p], null) for p in range(1, r)]
    return tuple(steps) + (Step(z[r], last),)


def _chain_machine(m1: MultiPortFsm, labels, prefix: str) -> MultiPortFsm:
    """``m1`` with its ``z1`` move from ``s0`` redirected into a chain.

    ``labels[i]`` is either a step or ``None`` (any input, null output).
    Inputs leaving the chain go to ``s3`` with null output; the chain end
    behaves likewise.
    """
    null = (None,) * m1.n_ports
    first = labels[0]
    chain = [f"{prefix}{i}" for i in range(1, len(labels) + 1)]
    trans = [t for t in m1.transitions if not (t.source == "s0" and t.input == first.input)]
    trans.append(Transition("s0", first.input, first.outputs, chain[0]))
    for i, lab in enumerate(labels[1:]):
        src, dst = chain[i], chain[i + 1]
        for x in m1.all_inputs:
            if lab is None:
                trans.append(Transition(src, x, null, dst))
            elif x == lab.input:
                trans.append(Transition(src, x, lab.outputs, dst))
            else:
                trans.append(Transition(src, x, null, "s3"))
    for x in m1.all_inputs:
        trans.append(Transition(chain[-1], x, null, "s3"))
    return MultiPortFsm(m1.states + tuple(chain), m1.initial, m1.inputs, m1.outputs, trans)


def gen_sat_gadget(inst: OneInThreeSatInstance) -> SatGadget:
    """DFSMs ``N``, ``M`` and ``k = r + 2`` with ``N ⊑_s^k M`` iff ``inst`` is satisfiable.

    ``N`` adds to ``M1`` a path labelled ``sigma1`` (the target trace with
    its first three inputs reordered to ``z1 z_-1 z0``); ``M`` adds a path
    ``z1, any input, sigma1'`` where ``sigma1 = z1 sigma1'``.
    """
    r = inst.variables
    if r <= 1:
        raise UsageError("the reduction needs at least two variables")
    m1 = sat_m1(inst)
    sigma = sat_target_trace(inst)
    sigma1 = (sigma[2], sigma[0], sigma[1]) + sigma[3:]
    n = _chain_machine(m1, list(sigma1), "n")
    m = _chain_machine(m1, [sigma1[0], None] + list(sigma1[1:]), "m")
    port_map = {-1: 1, 0: 2}
    port_map.update({p: p + 2 for p in range(1, r + len(inst.clauses) + 1)})
    return SatGadget(n, m, r + 2, port_map)
