"""Multi-port finite state machines, local projections and trace enumeration.

Ports are numbered from 1 in the public API.  An output tuple always has one
slot per port; ``None`` marks a null slot (written ``-`` in files).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple, Sequence

from .errors import ModelError, UsageError

NULL_TOKEN = "-"


class Step(NamedTuple):
    input: str
    outputs: tuple

    def __str__(self):
        slots = ", ".join(NULL_TOKEN if z is None else z for z in self.outputs)
        return f"{self.input} / ({slots})"


def format_trace(trace) -> str:
    if not trace:
        return "ε"
    return " · ".join(str(s) for s in trace)


@dataclass(frozen=True)
class Transition:
    source: str
    input: str
    outputs: tuple
    target: str

    @property
    def label(self) -> Step:
        return Step(self.input, self.outputs)


@dataclass(frozen=True)
class MultiPortFsm:
    """A multi-port FSM ``(S, s0, I, O, h)``.

    ``inputs[p-1]`` and ``outputs[p-1]`` hold the symbols of port ``p`` in
    declaration order; that order drives every enumeration tie-break.
    Transitions are stored sorted by (source, input, output tuple, target).
    """

    states: tuple
    initial: str
    inputs: tuple
    outputs: tuple
    transitions: tuple = field(default=())

    def __post_init__(self):
        set_ = lambda name, value: object.__setattr__(self, name, value)
        set_("states", tuple(self.states))
        set_("inputs", tuple(tuple(p) for p in self.inputs))
        set_("outputs", tuple(tuple(p) for p in self.outputs))
        if len(self.inputs) != len(self.outputs):
            raise ModelError("inputs and outputs must list the same number of ports")
        if not self.inputs:
            raise ModelError("a machine needs at least one port")
        if len(set(self.states)) != len(self.states):
            raise ModelError("duplicate state identifier")
        if self.initial not in self.states:
            raise ModelError(f"initial state {self.initial!r} is not declared")
        seen = {}
        for kind, table in (("input", self.inputs), ("output", self.outputs)):
            for p, syms in enumerate(table, start=1):
                for a in syms:
                    if a == NULL_TOKEN:
                        raise ModelError(f"{NULL_TOKEN!r} is reserved for null output")
                    if a in seen:
                        raise ModelError(
                            f"symbol {a!r} declared twice ({seen[a]} and {kind} of port {p})")
                    seen[a] = f"{kind} of port {p}"
        trans = []
        for t in self.transitions:
            if not isinstance(t, Transition):
                t = Transition(t[0], t[1], tuple(t[2]), t[3])
            outs = tuple(None if z == NULL_TOKEN else z for z in t.outputs)
            t = Transition(t.source, t.input, outs, t.target)
            self._check_transition(t)
            trans.append(t)
        trans.sort(key=self._transition_key)
        for a, b in zip(trans, trans[1:]):
            if a == b:
                raise ModelError(f"duplicate transition {a}")
        set_("transitions", tuple(trans))

    def _check_transition(self, t: Transition):
        if t.source not in self.state_index or t.target not in self.state_index:
            raise ModelError(f"transition {t} uses an undeclared state")
        if t.input not in self.input_port:
            raise ModelError(f"transition {t} uses unknown input {t.input!r}")
        if len(t.outputs) != self.n_ports:
            raise ModelError(
                f"output tuple of arity {len(t.outputs)} on a {self.n_ports}-port machine")
        for p, z in enumerate(t.outputs):
            if z is not None and z not in self.output_index[p]:
                raise ModelError(f"{z!r} is not an output of port {p + 1}")

    # -- derived tables -------------------------------------------------

    @property
    def n_ports(self) -> int:
        return len(self.inputs)

    @cached_property
    def state_index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def input_port(self) -> dict:
        """Input symbol -> 0-based port."""
        return {x: p for p, syms in enumerate(self.inputs) for x in syms}

    @cached_property
    def input_order(self) -> dict:
        return {x: i for i, x in enumerate(self.all_inputs)}

    @cached_property
    def all_inputs(self) -> tuple:
        return tuple(x for syms in self.inputs for x in syms)

    @cached_property
    def output_index(self) -> tuple:
        return tuple({z: i for i, z in enumerate(syms)} for syms in self.outputs)

    @cached_property
    def deterministic(self) -> bool:
        seen = set()
        for t in self.transitions:
            if (t.source, t.input) in seen:
                return False
            seen.add((t.source, t.input))
        return True

    def output_key(self, outputs) -> tuple:
        return tuple(-1 if z is None else self.output_index[p][z] for p, z in enumerate(outputs))

    def step_key(self, step) -> tuple:
        return (self.input_order[step[0]], self.output_key(step[1]))

    def trace_key(self, trace) -> tuple:
        """Sort key giving the (length, lexicographic) order used for minimality."""
        return (len(trace), tuple(self.step_key(s) for s in trace))

    def _transition_key(self, t: Transition):
        return (self.state_index[t.source], self.input_order[t.input],
                self.output_key(t.outputs), self.state_index[t.target])

    @cached_property
    def _outgoing(self) -> dict:
        out = {s: [] for s in self.states}
        for t in self.transitions:
            out[t.source].append(t)
        for s in out:
            out[s].sort(key=lambda t: (self.input_order[t.input], self.output_key(t.outputs),
                                       self.state_index[t.target]))
        return out

    def outgoing(self, state) -> list:
        """Transitions leaving ``state`` in tie-break order."""
        return self._outgoing[state]

    @cached_property
    def _label_successors(self) -> dict:
        table = {}
        for s in self.states:
            groups = {}
            for t in self._outgoing[s]:
                groups.setdefault(t.label, []).append(t.target)
            labels = sorted(groups, key=self.step_key)
            table[s] = [(lab, tuple(groups[lab])) for lab in labels]
        return table

    def label_successors(self, state) -> list:
        """``[(step, targets)]`` leaving ``state``, one entry per distinct label."""
        return self._label_successors[state]

    def successors(self, state, step) -> tuple:
        for lab, targets in self._label_successors[state]:
            if lab == step:
                return targets
        return ()

    # -- trace helpers --------------------------------------------------

    def validate_trace(self, trace):
        for i, step in enumerate(trace):
            x, outs = step
            if x not in self.input_port:
                raise UsageError(f"step {i + 1}: {x!r} is not an input of this machine")
            if len(outs) != self.n_ports:
                raise UsageError(f"step {i + 1}: output tuple has arity {len(outs)}, "
                                 f"expected {self.n_ports}")
            for p, z in enumerate(outs):
                if z is not None and z not in self.output_index[p]:
                    raise UsageError(f"step {i + 1}: {z!r} is not an output of port {p + 1}")

    def reached(self, trace, start=None) -> frozenset:
        """States reachable from ``start`` (default: initial) along ``trace``."""
        current = {self.initial if start is None else start}
        for step in trace:
            step = Step(step[0], tuple(step[1]))
            current = {t for s in current for t in self.successors(s, step)}
            if not current:
                break
        return frozenset(current)

    def is_trace(self, trace) -> bool:
        return bool(self.reached(trace))

    def same_alphabets(self, other: "MultiPortFsm") -> bool:
        return self.inputs == other.inputs and self.outputs == other.outputs

    def with_initial(self, state) -> "MultiPortFsm":
        return MultiPortFsm(self.states, state, self.inputs, self.outputs, self.transitions)


def require_same_alphabets(n: MultiPortFsm, m: MultiPortFsm):
    if n.n_ports != m.n_ports:
        raise UsageError(f"port counts differ ({n.n_ports} vs {m.n_ports})")
    if not n.same_alphabets(m):
        raise UsageError("machines must declare the same input and output alphabets")


# -- projection ----------------------------------------------------------

def project(m: MultiPortFsm, trace, port: int) -> tuple:
    """Local trace observed at ``port`` (1-based)."""
    if not 1 <= port <= m.n_ports:
        raise UsageError(f"port {port} out of range 1..{m.n_ports}")
    m.validate_trace(trace)
    p = port - 1
    out = []
    for x, outs in trace:
        if m.input_port[x] == p:
            out.append(x)
        if outs[p] is not None:
            out.append(outs[p])
    return tuple(out)


def local_traces(m: MultiPortFsm, trace) -> tuple:
    """All projections at once; the canonical key of the trace's ∼-class."""
    m.validate_trace(trace)
    locals_ = [[] for _ in range(m.n_ports)]
    for x, outs in trace:
        locals_[m.input_port[x]].append(x)
        for p, z in enumerate(outs):
            if z is not None:
                locals_[p].append(z)
    return tuple(tuple(w) for w in locals_)


def equivalent(m: MultiPortFsm, a, b) -> bool:
    """``a ∼ b``: identical projections at every port of ``m``."""
    return local_traces(m, a) == local_traces(m, b)


# -- enumeration ---------------------------------------------------------

def enumerate_bounded(m: MultiPortFsm, k: int, start=None, order: str = "dfs") -> Iterator[tuple]:
    """Yield every trace of ``m`` with at most ``k`` steps exactly once.

    Paths sharing a label are merged (subset construction), so a
    nondeterministic machine does not produce duplicates.  ``order`` is
    ``"dfs"`` (pre-order) or ``"bfs"`` (by length, then lexicographic).
    """
    if k < 0:
        raise UsageError("bound must be non-negative")
    root = frozenset([m.initial if start is None else start])
    if order == "bfs":
        level = [((), root)]
        for depth in range(k + 1):
            for trace, _ in level:
                yield trace
            if depth == k:
                break
            level = [(trace + (lab,), targets)
                     for trace, current in level
                     for lab, targets in _merged_successors(m, current)]
        return
    if order != "dfs":
        raise UsageError(f"unknown enumeration order {order!r}")
    stack = [((), root)]
    while stack:
        trace, current = stack.pop()
        yield trace
        if len(trace) < k:
            children = _merged_successors(m, current)
            for lab, targets in reversed(children):
                stack.append((trace + (lab,), targets))


def _merged_successors(m: MultiPortFsm, current) -> list:
    groups = {}
    for s in current:
        for lab, targets in m.label_successors(s):
            groups.setdefault(lab, set()).update(targets)
    return [(lab, frozenset(groups[lab])) for lab in sorted(groups, key=m.step_key)]


# -- well-formedness -----------------------------------------------------

@dataclass(frozen=True)
class WellFormedness:
    missing: tuple       # (state, input) pairs without a transition
    unreachable: tuple   # states not reachable from the initial state
    deterministic: bool

    @property
    def complete(self) -> bool:
        return not self.missing

    @property
    def connected(self) -> bool:
        return not self.unreachable


def reachable_states(m: MultiPortFsm) -> list:
    seen = {m.initial}
    queue = deque([m.initial])
    while queue:
        s = queue.popleft()
        for t in m.outgoing(s):
            if t.target not in seen:
                seen.add(t.target)
                queue.append(t.target)
    return [s for s in m.states if s in seen]


def check_well_formed(m: MultiPortFsm) -> WellFormedness:
    defined = {(t.source, t.input) for t in m.transitions}
    missing = tuple((s, x) for s in m.states for x in m.all_inputs if (s, x) not in defined)
    reach = set(reachable_states(m))
    unreachable = tuple(s for s in m.states if s not in reach)
    return WellFormedness(missing, unreachable, m.deterministic)


def require_complete(m: MultiPortFsm, role: str = "machine"):
    from .errors import IncompleteMachineError
    report = check_well_formed(m)
    if not report.complete:
        s, x = report.missing[0]
        raise IncompleteMachineError(
            f"{role} is not completely specified: no transition for input {x!r} in state {s!r} "
            f"({len(report.missing)} missing pair(s)); pass a completion policy")


def fresh_state(m: MultiPortFsm, base: str) -> str:
    name, i = base, 0
    while name in m.state_index:
        i += 1
        name = f"{base}{i}"
    return name


def complete(m: MultiPortFsm, policy: str = "self-loop-null") -> MultiPortFsm:
    """Add transitions for every undefined (state, input) pair.

    ``self-loop-null`` adds ``x/(-,...,-)`` self-loops; ``error-state`` sends
    undefined inputs with null output to a fresh sink.
    """
    report = check_well_formed(m)
    if report.complete:
        return m
    null = (None,) * m.n_ports
    states = list(m.states)
    extra = []
    if policy == "self-loop-null":
        extra = [Transition(s, x, null, s) for s, x in report.missing]
    elif policy == "error-state":
        sink = fresh_state(m, "s_err")
        states.append(sink)
        extra = [Transition(s, x, null, sink) for s, x in report.missing]
        extra += [Transition(sink, x, null, sink) for x in m.all_inputs]
    else:
        raise UsageError(f"unknown completion policy {policy!r}")
    return MultiPortFsm(states, m.initial, m.inputs, m.outputs, m.transitions + tuple(extra))


def trim(m: MultiPortFsm) -> MultiPortFsm:
    """Drop states that cannot be reached from the initial state."""
    keep = reachable_states(m)
    if len(keep) == len(m.states):
        return m
    kept = set(keep)
    trans = [t for t in m.transitions if t.source in kept]
    return MultiPortFsm(keep, m.initial, m.inputs, m.outputs, trans)


def make_trace(*steps: Sequence) -> tuple:
    """Build a trace from ``(input, outputs)`` pairs; ``"-"`` is accepted for null."""
    return tuple(Step(x, tuple(None if z in (None, NULL_TOKEN) else z for z in outs))
                 for x, outs in steps)


def null_outputs(n: int) -> tuple:
    return (None,) * n


def prefixes(trace) -> Iterator[tuple]:
    for i in range(len(trace) + 1):
        yield tuple(trace[:i])

