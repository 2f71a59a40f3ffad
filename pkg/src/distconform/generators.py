"""Seeded random machines, traces and automata for property tests and sweeps."""

from __future__ import annotations

import random

from .fsm import MultiPortFsm, Step, Transition
from .multitape import MultiTapeFA


def random_alphabets(rng: random.Random, ports: int, max_inputs=2, max_outputs=2,
                     single_symbol=False, all_output=False):
    """Per-port input and output alphabets with globally unique names."""
    inputs, outputs = [], []
    for p in range(1, ports + 1):
        if single_symbol:
            kind = rng.choice(("in", "out", "none"))
            ni, no = (1, 0) if kind == "in" else (0, 1) if kind == "out" else (0, 0)
        else:
            ni = rng.randint(0, max_inputs)
            no = rng.randint(1 if all_output else 0, max_outputs)
        inputs.append(tuple(f"x{p}" + "'" * i for i in range(ni)))
        outputs.append(tuple(f"y{p}" + "'" * i for i in range(no)))
    if not any(inputs):
        # every machine needs some input; give one to a port that has none
        p = rng.randrange(ports)
        if single_symbol:
            outputs[p] = ()
        inputs[p] = (f"x{p + 1}",)
    return tuple(inputs), tuple(outputs)


def random_fsm(rng: random.Random, inputs, outputs, states=3, deterministic=False,
               all_output=False, null_rate=0.4) -> MultiPortFsm:
    """A complete, initially connected machine over the given alphabets."""
    names = [f"s{i}" for i in range(states)]
    ins = [x for port in inputs for x in port]
    trans = set()

    def label():
        outs = []
        for port in outputs:
            if port and (all_output or rng.random() >= null_rate):
                outs.append(rng.choice(port))
            else:
                outs.append(None)
        return tuple(outs)

    # a spanning walk keeps every state reachable
    for i in range(1, states):
        src = names[rng.randrange(i)]
        trans.add(Transition(src, rng.choice(ins), label(), names[i]))
    for s in names:
        for x in ins:
            have = [t for t in trans if t.source == s and t.input == x]
            want = 1 if deterministic else rng.choice((1, 1, 2))
            for _ in range(8):     # small alphabets may not offer two distinct moves
                if len(have) >= want:
                    break
                t = Transition(s, x, label(), rng.choice(names))
                if t not in trans:
                    trans.add(t)
                    have.append(t)
    if deterministic:
        keep = {}
        for t in sorted(trans, key=repr):
            keep.setdefault((t.source, t.input), t)
        trans = set(keep.values())
    return MultiPortFsm(names, names[0], inputs, outputs, sorted(trans, key=repr))


def random_pair(rng: random.Random, ports=2, states=3, **kw):
    single = kw.pop("single_symbol", False)
    all_out = kw.pop("all_output", False)
    inputs, outputs = random_alphabets(rng, ports, single_symbol=single, all_output=all_out)
    n = random_fsm(rng, inputs, outputs, states=rng.randint(1, states), **kw)
    m = random_fsm(rng, inputs, outputs, states=rng.randint(1, states), all_output=all_out, **kw)
    return n, m


def random_walk(rng: random.Random, m: MultiPortFsm, length: int) -> tuple:
    state, steps = m.initial, []
    for _ in range(length):
        t = rng.choice(m.outgoing(state))
        steps.append(t.label)
        state = t.target
    return tuple(steps)


def perturb(rng: random.Random, m: MultiPortFsm, trace) -> tuple:
    """Swap two steps, or change one output slot."""
    steps = list(trace)
    if not steps:
        return ()
    if len(steps) > 1 and rng.random() < 0.5:
        i, j = rng.sample(range(len(steps)), 2)
        steps[i], steps[j] = steps[j], steps[i]
    else:
        i = rng.randrange(len(steps))
        p = rng.randrange(m.n_ports)
        outs = list(steps[i].outputs)
        outs[p] = rng.choice((None,) + m.outputs[p])
        steps[i] = Step(steps[i].input, tuple(outs))
    return tuple(steps)


def random_query(rng: random.Random, m: MultiPortFsm, max_len=5) -> tuple:
    """A trace over ``m``'s alphabet that is a member about half of the time."""
    trace = random_walk(rng, m, rng.randint(0, max_len))
    return perturb(rng, m, trace) if rng.random() < 0.5 else trace


def random_mtfa(rng: random.Random, alphabets, states=3, density=0.35) -> MultiTapeFA:
    names = [f"q{i}" for i in range(rng.randint(1, states))]
    symbols = [a for tape in alphabets for a in tape]
    trans = [(s, a, d) for s in names for a in symbols for d in names if rng.random() < density]
    return MultiTapeFA(names, names[0], alphabets, trans)


def sub_machine(rng: random.Random, m: MultiPortFsm, mutate=0.5) -> MultiPortFsm:
    """A deterministic restriction of ``m``, with one output changed at rate ``mutate``."""
    chosen = {}
    for t in m.transitions:
        chosen.setdefault((t.source, t.input), []).append(t)
    trans = [rng.choice(ts) for _, ts in sorted(chosen.items())]
    if trans and rng.random() < mutate:
        i = rng.randrange(len(trans))
        t = trans[i]
        p = rng.randrange(m.n_ports)
        outs = list(t.outputs)
        outs[p] = rng.choice((None,) + m.outputs[p])
        trans[i] = Transition(t.source, t.input, tuple(outs), t.target)
    return MultiPortFsm(m.states, m.initial, m.inputs, m.outputs, trans)


def related_pair(rng: random.Random, ports=2, states=3, **kw):
    """``(n, m)`` with ``n`` derived from ``m``, so both verdicts are common."""
    single = kw.pop("single_symbol", False)
    all_out = kw.pop("all_output", False)
    inputs, outputs = random_alphabets(rng, ports, single_symbol=single, all_output=all_out)
    m = random_fsm(rng, inputs, outputs, states=rng.randint(1, states), all_output=all_out, **kw)
    return sub_machine(rng, m), m
