"""Witness machines for traces of ``ℒ_pc(M)`` and the example machines."""

from __future__ import annotations

from .errors import PreconditionError
from .fsm import MultiPortFsm, Transition, check_well_formed, complete, trim
from .oracle import first_pc_violation, member_closure


def deterministic_restriction(m: MultiPortFsm, keep=()) -> MultiPortFsm:
    """One transition per (state, input): one from ``keep`` if present, else the least."""
    keep = set(keep)
    chosen = {}
    for t in m.transitions:          # already in tie-break order
        slot = (t.source, t.input)
        if slot not in chosen or (t in keep and chosen[slot] not in keep):
            chosen[slot] = t
    return MultiPortFsm(m.states, m.initial, m.inputs, m.outputs, tuple(chosen.values()))


def witness_fsm(m: MultiPortFsm, trace) -> MultiPortFsm:
    """A DFSM ``N`` with ``trace ∈ L(N)`` and ``L(N) ⊆ ℒ(m)``.

    A chain ``c0 .. c_{k-1}`` spells the trace.  Each chain state ``c_{i-1}``
    is paired with a state ``s_{i-1}`` of ``m`` reached by some trace
    equivalent to the length-(i-1) prefix; inputs other than the chain's
    copy ``h(s_{i-1}, x)`` into a copy of ``m``, and the last chain step
    enters the copy at ``s_k``.
    """
    trace = tuple(trace)
    m.validate_trace(trace)
    bad = first_pc_violation(trace, m)
    if bad is not None:
        raise PreconditionError(f"the prefix of length {bad} is not in the closure of the machine")
    if not check_well_formed(m).complete:
        m = complete(m)
    k = len(trace)
    if k == 0:
        return trim(deterministic_restriction(m))
    anchors = [m.initial]
    for i in range(1, k + 1):
        anchors.append(member_closure(trace[:i], m).end_state)
    copy = {s: f"m.{s}" for s in m.states}
    chain = [f"c{i}" for i in range(k)]
    trans = [Transition(copy[t.source], t.input, t.outputs, copy[t.target]) for t in m.transitions]
    spine = []
    for i, (x, outs) in enumerate(trace, start=1):
        dst = chain[i] if i < k else copy[anchors[k]]
        spine.append(Transition(chain[i - 1], x, outs, dst))
        for t in m.outgoing(anchors[i - 1]):
            if t.input != x:
                trans.append(Transition(chain[i - 1], t.input, t.outputs, copy[t.target]))
    trans += spine
    states = chain + [copy[s] for s in m.states]
    full = MultiPortFsm(states, chain[0], m.inputs, m.outputs, trans)
    return trim(deterministic_restriction(full, keep=spine))


# -- fixtures ------------------------------------------------------------

def _fsm(states, inputs, outputs, trans):
    return MultiPortFsm(states, states[0], inputs, outputs,
                        [Transition(s, x, tuple(None if z == "-" else z for z in o), d)
                         for s, x, o, d in trans])


TWO_PORT_INPUTS = (("x1",), ())
TWO_PORT_OUTPUTS = (("y1", "y1'"), ("y2", "y2'"))
XY_INPUTS = (("x1",), ("x2",))


def fixture_m1() -> MultiPortFsm:
    return _fsm(["s0"], TWO_PORT_INPUTS, TWO_PORT_OUTPUTS,
                [("s0", "x1", ("y1", "y2"), "s0"), ("s0", "x1", ("y1'", "y2'"), "s0")])


def fixture_n1() -> MultiPortFsm:
    return _fsm(["s0"], TWO_PORT_INPUTS, TWO_PORT_OUTPUTS,
                [("s0", "x1", ("y1", "y2'"), "s0")])


def fixture_m4() -> MultiPortFsm:
    return _fsm(["s0", "s1", "s3", "s4"], XY_INPUTS, TWO_PORT_OUTPUTS, [
        ("s0", "x1", ("-", "-"), "s1"), ("s1", "x2", ("-", "-"), "s0"),
        ("s0", "x2", ("y1'", "y2'"), "s3"), ("s1", "x1", ("y1", "y2"), "s4"),
        ("s3", "x1", ("y1'", "y2'"), "s3"), ("s3", "x2", ("y1'", "y2'"), "s3"),
        ("s4", "x1", ("y1", "y2"), "s4"), ("s4", "x2", ("y1", "y2"), "s4")])


M7_OUTPUTS = (("y1",), ("y2", "y2'"))


def _m7_transitions():
    return [("s0", "x1", ("y1", "-"), "s1"), ("s0", "x2", ("-", "y2'"), "s2"),
            ("s1", "x1", ("y1", "-"), "s1"), ("s1", "x2", ("-", "y2"), "s1"),
            ("s2", "x1", ("y1", "-"), "s2"), ("s2", "x2", ("-", "y2'"), "s2")]


def fixture_m7() -> MultiPortFsm:
    return _fsm(["s0", "s1", "s2"], XY_INPUTS, M7_OUTPUTS, _m7_transitions())


def fixture_m7_prime() -> MultiPortFsm:
    return _fsm(["s0", "s1", "s2"], XY_INPUTS, M7_OUTPUTS,
                _m7_transitions() + [("s0", "x1", ("y1", "-"), "s0")])


def fixture_m5() -> MultiPortFsm:
    return _fsm(["s0", "s1", "s2"], XY_INPUTS, (("y1",), ("y2",)), [
        ("s0", "x2", ("-", "-"), "s0"), ("s0", "x1", ("-", "-"), "s1"),
        ("s1", "x2", ("-", "-"), "s0"), ("s1", "x1", ("y1", "y2"), "s2"),
        ("s2", "x1", ("-", "-"), "s2"), ("s2", "x2", ("-", "-"), "s2")])


def fixture_nonprefix() -> MultiPortFsm:
    """A DFSM with trace ``x1/(y1,y2) x1/(y1,-)``: its closure is not prefix closed."""
    return _fsm(["s0", "s1", "s2"], TWO_PORT_INPUTS, (("y1",), ("y2",)), [
        ("s0", "x1", ("y1", "y2"), "s1"), ("s1", "x1", ("y1", "-"), "s2"),
        ("s2", "x1", ("-", "-"), "s2")])


MACHINE_FIXTURES = {
    "M1": fixture_m1,
    "N1": fixture_n1,
    "M4": fixture_m4,
    "M7": fixture_m7,
    "M7'": fixture_m7_prime,
    "M5": fixture_m5,
}


def fixtures() -> dict:
    """Every example machine by name, including ``nonprefix``."""
    out = {name: make() for name, make in MACHINE_FIXTURES.items()}
    out["nonprefix"] = fixture_nonprefix()
    return out


def automaton_fixtures() -> dict:
    from .reductions import PcpInstance, gen_intersection_gadget, gen_pcp_gadget
    _, pcp_m = gen_pcp_gadget(PcpInstance.from_strings(("a", "b"), ("b", "a")))
    return {"pcp-M": pcp_m, "intersection-M": gen_intersection_gadget("ab")}

