"""Line-oriented text formats for machines, traces, automata and instances.

FSM::

    ports 2
    inputs 1: x1
    outputs 1: y1 y1'
    outputs 2: y2 y2'
    states s0
    initial s0
    trans s0 x1 / (y1, y2) -> s0

``#`` starts a comment.  Ports without inputs (outputs) may omit the
``inputs P:`` (``outputs P:``) line.  Declaration order fixes symbol order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .fsm import NULL_TOKEN, MultiPortFsm, Step, Transition
from .multitape import MultiTapeFA
from .reductions import OneInThreeSatInstance, PcpInstance


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self):
        return f"line {self.line}, column {self.column}: {self.message}"


def _lines(text):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield no, line


def _col(line, token, start=0):
    i = line.find(token, start)
    return (i if i >= 0 else len(line) - len(line.lstrip())) + 1


_DECL = re.compile(r"^\s*(inputs|outputs|alphabet)\s+(\S+)\s*:(.*)$")
_TRANS = re.compile(r"^\s*trans\s+(\S+)\s+(\S+)\s*/\s*\((.*)\)\s*->\s*(\S+)\s*$")
_STEP = re.compile(r"^\s*(\S+)\s*/\s*\((.*)\)\s*$")
_MT_TRANS = re.compile(r"^\s*trans\s+(\S+)\s+(\S+)\s*->\s*(\S+)\s*$")


def _int(tok, no, line, diags, what):
    try:
        v = int(tok)
    except ValueError:
        diags.append(Diagnostic(no, _col(line, tok), f"{what} must be an integer, got {tok!r}"))
        return None
    if v < 1:
        diags.append(Diagnostic(no, _col(line, tok), f"{what} must be positive"))
        return None
    return v


def _outputs(body):
    return [s.strip() for s in body.split(",")] if body.strip() else []


def parse_fsm(text: str) -> MultiPortFsm:
    diags = []
    ports = None
    decl = {"inputs": {}, "outputs": {}}
    states, initial, raw_trans = None, None, []
    for no, line in _lines(text):
        head = line.split()[0]
        if head == "ports":
            parts = line.split()
            if len(parts) != 2:
                diags.append(Diagnostic(no, 1, "expected 'ports N'"))
            else:
                ports = _int(parts[1], no, line, diags, "port count")
        elif head in ("inputs", "outputs"):
            m = _DECL.match(line)
            if not m:
                diags.append(Diagnostic(no, 1, f"expected '{head} P: symbols...'"))
                continue
            p = _int(m.group(2), no, line, diags, "port")
            if p is None:
                continue
            if p in decl[head]:
                diags.append(Diagnostic(no, _col(line, m.group(2)), f"{head} of port {p} declared twice"))
            decl[head][p] = (no, line, m.group(3).split())
        elif head == "states":
            states = (no, line.split()[1:])
        elif head == "initial":
            parts = line.split()
            if len(parts) != 2:
                diags.append(Diagnostic(no, 1, "expected 'initial STATE'"))
            else:
                initial = (no, parts[1])
        elif head == "trans":
            m = _TRANS.match(line)
            if not m:
                diags.append(Diagnostic(no, 1, "expected 'trans SRC IN / (o1, ..., oN) -> DST'"))
            else:
                raw_trans.append((no, line, m))
        else:
            diags.append(Diagnostic(no, 1, f"unknown statement {head!r}"))
    if ports is None:
        diags.append(Diagnostic(1, 1, "missing 'ports N' declaration"))
        raise ParseError(diags)
    if states is None:
        diags.append(Diagnostic(1, 1, "missing 'states' declaration"))
        raise ParseError(diags)
    if initial is None:
        diags.append(Diagnostic(1, 1, "missing 'initial' declaration"))
        raise ParseError(diags)

    tables = {"inputs": [[] for _ in range(ports)], "outputs": [[] for _ in range(ports)]}
    owner = {}
    for kind in ("inputs", "outputs"):
        for p, (no, line, syms) in sorted(decl[kind].items()):
            if p > ports:
                diags.append(Diagnostic(no, _col(line, str(p)), f"port {p} exceeds port count {ports}"))
                continue
            for s in syms:
                if s == NULL_TOKEN:
                    diags.append(Diagnostic(no, _col(line, s), f"{NULL_TOKEN!r} is reserved for null"))
                elif s in owner:
                    diags.append(Diagnostic(no, _col(line, s), f"symbol {s!r} already declared"))
                else:
                    owner[s] = (kind, p)
                    tables[kind][p - 1].append(s)
    state_no, state_list = states
    known_states = set()
    for s in state_list:
        if s in known_states:
            diags.append(Diagnostic(state_no, 1, f"state {s!r} declared twice"))
        known_states.add(s)
    if initial[1] not in known_states:
        diags.append(Diagnostic(initial[0], 9, f"unknown state {initial[1]!r}"))

    trans, seen = [], {}
    for no, line, m in raw_trans:
        src, x, body, dst = m.group(1), m.group(2), m.group(3), m.group(4)
        ok = True
        for st, g in ((src, 1), (dst, 4)):
            if st not in known_states:
                diags.append(Diagnostic(no, m.start(g) + 1, f"unknown state {st!r}"))
                ok = False
        if owner.get(x, (None,))[0] != "inputs":
            diags.append(Diagnostic(no, m.start(2) + 1, f"unknown input symbol {x!r}"))
            ok = False
        outs = _outputs(body)
        if len(outs) != ports:
            diags.append(Diagnostic(no, m.start(3) + 1,
                                    f"output tuple has arity {len(outs)}, expected {ports}"))
            ok = False
        else:
            for p, z in enumerate(outs, start=1):
                if z == NULL_TOKEN:
                    continue
                where = owner.get(z)
                if where is None or where[0] != "outputs":
                    diags.append(Diagnostic(no, _col(line, z, m.start(3)), f"unknown output symbol {z!r}"))
                    ok = False
                elif where[1] != p:
                    diags.append(Diagnostic(no, _col(line, z, m.start(3)),
                                            f"output {z!r} belongs to port {where[1]}, not port {p}"))
                    ok = False
        if not ok:
            continue
        t = Transition(src, x, tuple(None if z == NULL_TOKEN else z for z in outs), dst)
        if t in seen:
            diags.append(Diagnostic(no, 1, f"duplicate transition (first on line {seen[t]})"))
            continue
        seen[t] = no
        trans.append(t)
    if diags:
        raise ParseError(diags)
    return MultiPortFsm(state_list, initial[1], tables["inputs"], tables["outputs"], trans)


def _outs_text(outs):
    return "(" + ", ".join(NULL_TOKEN if z is None else z for z in outs) + ")"


def serialize_fsm(m: MultiPortFsm) -> str:
    lines = [f"ports {m.n_ports}"]
    for kind, table in (("inputs", m.inputs), ("outputs", m.outputs)):
        for p, syms in enumerate(table, start=1):
            if syms:
                lines.append(f"{kind} {p}: " + " ".join(syms))
    lines.append("states " + " ".join(m.states))
    lines.append(f"initial {m.initial}")
    for t in m.transitions:
        lines.append(f"trans {t.source} {t.input} / {_outs_text(t.outputs)} -> {t.target}")
    return "\n".join(lines) + "\n"


def parse_trace(text: str, m: MultiPortFsm) -> tuple:
    diags, steps = [], []
    for no, line in _lines(text):
        mt = _STEP.match(line)
        if not mt:
            diags.append(Diagnostic(no, 1, "expected 'IN / (o1, ..., oN)'"))
            continue
        x, outs = mt.group(1), _outputs(mt.group(2))
        if x not in m.input_port:
            diags.append(Diagnostic(no, mt.start(1) + 1, f"unknown input symbol {x!r}"))
            continue
        if len(outs) != m.n_ports:
            diags.append(Diagnostic(no, mt.start(2) + 1,
                                    f"output tuple has arity {len(outs)}, expected {m.n_ports}"))
            continue
        bad = False
        for p, z in enumerate(outs):
            if z != NULL_TOKEN and z not in m.output_index[p]:
                diags.append(Diagnostic(no, _col(line, z, mt.start(2)),
                                        f"{z!r} is not an output of port {p + 1}"))
                bad = True
        if not bad:
            steps.append(Step(x, tuple(None if z == NULL_TOKEN else z for z in outs)))
    if diags:
        raise ParseError(diags)
    return tuple(steps)


def serialize_trace(trace) -> str:
    return "".join(f"{x} / {_outs_text(outs)}\n" for x, outs in trace)


def parse_mtfa(text: str) -> MultiTapeFA:
    diags = []
    tapes, alph, states, initial, trans = None, {}, None, None, []
    for no, line in _lines(text):
        head = line.split()[0]
        if head == "tapes":
            parts = line.split()
            tapes = _int(parts[1], no, line, diags, "tape count") if len(parts) == 2 else None
            if len(parts) != 2:
                diags.append(Diagnostic(no, 1, "expected 'tapes R'"))
        elif head == "alphabet":
            m = _DECL.match(line)
            if not m:
                diags.append(Diagnostic(no, 1, "expected 'alphabet T: symbols...'"))
                continue
            t = _int(m.group(2), no, line, diags, "tape")
            if t is not None:
                alph[t] = (no, line, m.group(3).split())
        elif head == "states":
            states = line.split()[1:]
        elif head == "initial":
            parts = line.split()
            initial = (no, parts[1]) if len(parts) == 2 else None
            if len(parts) != 2:
                diags.append(Diagnostic(no, 1, "expected 'initial STATE'"))
        elif head == "trans":
            m = _MT_TRANS.match(line)
            if not m:
                diags.append(Diagnostic(no, 1, "expected 'trans SRC SYM -> DST'"))
            else:
                trans.append((no, m))
        else:
            diags.append(Diagnostic(no, 1, f"unknown statement {head!r}"))
    if tapes is None or states is None or initial is None:
        diags.append(Diagnostic(1, 1, "need 'tapes', 'states' and 'initial' declarations"))
        raise ParseError(diags)
    tables = [[] for _ in range(tapes)]
    seen_sym = set()
    for t, (no, line, syms) in sorted(alph.items()):
        if t > tapes:
            diags.append(Diagnostic(no, _col(line, str(t)), f"tape {t} exceeds tape count {tapes}"))
            continue
        for s in syms:
            if s in seen_sym:
                diags.append(Diagnostic(no, _col(line, s), f"symbol {s!r} already declared"))
            seen_sym.add(s)
            tables[t - 1].append(s)
    known = set(states)
    if initial[1] not in known:
        diags.append(Diagnostic(initial[0], 9, f"unknown state {initial[1]!r}"))
    out, dup = [], {}
    for no, m in trans:
        src, sym, dst = m.groups()
        ok = True
        for st, g in ((src, 1), (dst, 3)):
            if st not in known:
                diags.append(Diagnostic(no, m.start(g) + 1, f"unknown state {st!r}"))
                ok = False
        if sym not in seen_sym:
            diags.append(Diagnostic(no, m.start(2) + 1, f"unknown symbol {sym!r}"))
            ok = False
        if ok and (src, sym, dst) in dup:
            diags.append(Diagnostic(no, 1, f"duplicate transition (first on line {dup[(src, sym, dst)]})"))
            ok = False
        if ok:
            dup[(src, sym, dst)] = no
            out.append((src, sym, dst))
    if diags:
        raise ParseError(diags)
    return MultiTapeFA(states, initial[1], tables, out)


def serialize_mtfa(a: MultiTapeFA) -> str:
    lines = [f"tapes {a.tapes}"]
    for i, syms in enumerate(a.alphabets, start=1):
        lines.append(f"alphabet {i}: " + " ".join(syms))
    lines.append("states " + " ".join(a.states))
    lines.append(f"initial {a.initial}")
    lines += [f"trans {s} {x} -> {d}" for s, x, d in a.transitions]
    return "\n".join(lines) + "\n"


def parse_pcp(text: str) -> PcpInstance:
    """One pair per line, ``alpha | beta``; every non-blank character is a symbol."""
    diags, pairs = [], []
    for no, line in _lines(text):
        parts = line.split("|")
        if len(parts) != 2:
            diags.append(Diagnostic(no, 1, "expected 'alpha | beta'"))
            continue
        a, b = ("".join(p.split()) for p in parts)
        if not a or not b:
            diags.append(Diagnostic(no, 1 if not a else line.index("|") + 2, "empty word"))
            continue
        pairs.append((tuple(a), tuple(b)))
    if not pairs and not diags:
        diags.append(Diagnostic(1, 1, "no pairs"))
    if diags:
        raise ParseError(diags)
    return PcpInstance(tuple(pairs))


def serialize_pcp(inst: PcpInstance) -> str:
    return "".join(f"{''.join(a)} | {''.join(b)}\n" for a, b in inst.pairs)


def parse_sat(text: str) -> OneInThreeSatInstance:
    """``vars R`` then one clause per line of three signed variable numbers."""
    diags, variables, clauses = [], None, []
    for no, line in _lines(text):
        parts = line.split()
        if parts[0] == "vars":
            if len(parts) != 2:
                diags.append(Diagnostic(no, 1, "expected 'vars R'"))
            else:
                variables = _int(parts[1], no, line, diags, "variable count")
            continue
        if len(parts) != 3:
            diags.append(Diagnostic(no, 1, f"a clause has exactly three literals, got {len(parts)}"))
            continue
        clause = []
        for tok in parts:
            try:
                v = int(tok)
            except ValueError:
                diags.append(Diagnostic(no, _col(line, tok), f"bad literal {tok!r}"))
                continue
            if v == 0 or (variables is not None and abs(v) > variables):
                diags.append(Diagnostic(no, _col(line, tok), f"literal {tok!r} out of range"))
                continue
            clause.append((abs(v), v > 0))
        if len(clause) == 3:
            clauses.append(tuple(clause))
    if variables is None:
        diags.append(Diagnostic(1, 1, "missing 'vars R' declaration"))
    if diags:
        raise ParseError(diags)
    return OneInThreeSatInstance(variables, tuple(clauses))


def serialize_sat(inst: OneInThreeSatInstance) -> str:
    lines = [f"vars {inst.variables}"]
    lines += [" ".join(str(v if pos else -v) for v, pos in c) for c in inst.clauses]
    return "\n".join(lines) + "\n"


def read_text(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
