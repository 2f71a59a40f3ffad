"""Weak conformance, bounded strong conformance and two exact special cases."""

from __future__ import annotations

import os
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .errors import PreconditionError, ResourceBudgetError
from .fsm import (MultiPortFsm, enumerate_bounded, local_traces, require_complete,
                  require_same_alphabets)
from .oracle import compiled_moves, fire, member_closure

BUDGET_ENV = "DISTCONFORM_MAX_CLASSES"
DEFAULT_BUDGET = 5_000_000


def class_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class Verdict:
    passed: bool
    counterexample: Optional[tuple] = None
    port: Optional[int] = None
    local_trace: Optional[tuple] = None
    prefix_length: Optional[int] = None
    per_port: tuple = ()
    stats: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.passed

    @property
    def outcome(self) -> str:
        return "pass" if self.passed else "fail"


PASS = Verdict(True)


# -- weak conformance ------------------------------------------------------

@dataclass(frozen=True)
class ProjectionAutomaton:
    """Finite automaton for ``π_p(L(m))`` with silent moves.

    FSM states are final; a transition emitting both its input and an
    output at ``p`` goes through a non-final intermediate state.
    """

    port: int
    alphabet: tuple
    initial: object
    finals: frozenset
    moves: dict   # state -> [(symbol or None, target)]

    @classmethod
    def of(cls, m: MultiPortFsm, port: int) -> "ProjectionAutomaton":
        p = port - 1
        moves = {s: [] for s in m.states}
        for i, t in enumerate(m.transitions):
            here = m.input_port[t.input] == p
            z = t.outputs[p]
            if here and z is not None:
                mid = ("mid", i)
                moves[t.source].append((t.input, mid))
                moves[mid] = [(z, t.target)]
            elif here:
                moves[t.source].append((t.input, t.target))
            elif z is not None:
                moves[t.source].append((z, t.target))
            else:
                moves[t.source].append((None, t.target))
        alphabet = m.inputs[p] + m.outputs[p]
        return cls(port, alphabet, m.initial, frozenset(m.states), moves)

    def closure(self, states) -> frozenset:
        seen = set(states)
        stack = list(states)
        while stack:
            s = stack.pop()
            for a, t in self.moves[s]:
                if a is None and t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def step(self, states, symbol) -> frozenset:
        return self.closure({t for s in states for a, t in self.moves[s] if a == symbol})

    def accepts(self, word) -> bool:
        current = self.closure({self.initial})
        for a in word:
            current = self.step(current, a)
        return bool(current & self.finals)


def _inclusion_counterexample(a: ProjectionAutomaton, b: ProjectionAutomaton):
    """Shortest (then least) word of ``a`` not accepted by ``b``, or ``None``."""
    start = (a.closure({a.initial}), b.closure({b.initial}))
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        da, db = pair
        if da & a.finals and not db & b.finals:
            word = []
            while parent[pair] is not None:
                pair, sym = parent[pair]
                word.append(sym)
            return tuple(reversed(word))
        for sym in a.alphabet:
            na = a.step(da, sym)
            if not na:
                continue
            nxt = (na, b.step(db, sym))
            if nxt not in parent:
                parent[nxt] = (pair, sym)
                queue.append(nxt)
    return None


def trace_with_projection(m: MultiPortFsm, port: int, word) -> Optional[tuple]:
    """A trace of ``m`` whose projection at ``port`` is exactly ``word``."""
    p = port - 1
    word = tuple(word)
    start = (m.initial, 0)
    parent = {start: None}
    queue = deque([start])
    while queue:
        config = queue.popleft()
        state, c = config
        if c == len(word):
            steps = []
            while parent[config] is not None:
                config, lab = parent[config]
                steps.append(lab)
            return tuple(reversed(steps))
        for t in m.outgoing(state):
            emitted = ((t.input,) if m.input_port[t.input] == p else ()) + \
                ((t.outputs[p],) if t.outputs[p] is not None else ())
            if word[c:c + len(emitted)] != emitted:
                continue
            nxt = (t.target, c + len(emitted))
            if nxt not in parent:
                parent[nxt] = (config, t.label)
                queue.append(nxt)
    return None


def check_weak(n: MultiPortFsm, m: MultiPortFsm) -> Verdict:
    """``n ⊑_w m``: per-port inclusion of projected languages."""
    require_same_alphabets(n, m)
    ports = []
    for port in range(1, n.n_ports + 1):
        word = _inclusion_counterexample(ProjectionAutomaton.of(n, port),
                                         ProjectionAutomaton.of(m, port))
        if word is None:
            ports.append(Verdict(True, port=port))
        else:
            sigma = trace_with_projection(n, port, word)
            ports.append(Verdict(False, counterexample=sigma, port=port, local_trace=word,
                                 prefix_length=len(sigma)))
    failing = [v for v in ports if not v.passed]
    if not failing:
        return Verdict(True, per_port=tuple(ports))
    first = failing[0]
    return Verdict(False, counterexample=first.counterexample, port=first.port,
                   local_trace=first.local_trace, prefix_length=first.prefix_length,
                   per_port=tuple(ports))


# -- bounded strong conformance ------------------------------------------

class _Node:
    __slots__ = ("key", "reps", "seed")

    def __init__(self, key, seed):
        self.key = key
        self.reps = {}   # n-state -> (sort key, least trace of this class ending there)
        self.seed = seed


class StrongEngine:
    """Breadth-first search over the ∼-classes of ``L_k(n)``.

    A class is identified by its tuple of local traces; for each class the
    engine keeps the ``n`` states it can end in and the ``m`` configurations
    reachable while matching it.  A child's configurations extend its
    parent's, so membership is computed incrementally.

    With ``prune`` a class whose every extension is known to pass is not
    expanded: if some witness for the class ends in ``m``-state ``s`` and
    ``n`` from the class's end states strongly conforms to ``m`` from ``s``
    for the remaining budget, all extensions pass (projection is a monoid
    morphism).  That sub-question is answered by the same search, memoized.
    Pruning only drops passing classes, so verdicts and counterexamples do
    not change.
    """

    def __init__(self, n: MultiPortFsm, m: MultiPortFsm, prune=True, budget=None):
        self.n = n
        self.m = m
        self.prune = prune
        self.budget = class_budget() if budget is None else budget
        self.moves = compiled_moves(m)
        self.stats = Counter()
        self._proven = {}
        self._refuted = {}
        self._contrib = {}
        self._step_keys = {}

    def _contribution(self, step):
        c = self._contrib.get(step)
        if c is None:
            c = local_traces(self.n, (step,))
            self._contrib[step] = c
        return c

    def _step_key(self, step):
        k = self._step_keys.get(step)
        if k is None:
            k = self.n.step_key(step)
            self._step_keys[step] = k
        return k

    def _closure(self, seed, words):
        reach = set(seed)
        stack = list(seed)
        moves = self.moves
        while stack:
            state, cur = stack.pop()
            for move in moves[state]:
                nxt = fire(move, words, cur)
                if nxt is not None:
                    c = (move[3], nxt)
                    if c not in reach:
                        reach.add(c)
                        stack.append(c)
        return reach

    def conforms(self, roots: frozenset, m_state, k: int) -> bool:
        if k <= 0:
            return True
        key = (roots, m_state)
        if self._proven.get(key, -1) >= k:
            return True
        if self._refuted.get(key, k + 1) <= k:
            return False
        self.stats["subchecks"] += 1
        ok = self.search(roots, m_state, k) is None
        if ok:
            self._proven[key] = max(self._proven.get(key, -1), k)
        else:
            self._refuted[key] = min(self._refuted.get(key, k + 1), k)
        return ok

    def search(self, roots, m_state, k, first_step=None) -> Optional[tuple]:
        """Least trace of ``n`` from ``roots`` (≤ k steps) outside ``ℒ(m from m_state)``."""
        n = self.n
        width = n.n_ports
        root = _Node(((),) * width, {(m_state, (0,) * width)})
        root.reps = {s: ((), ()) for s in roots}
        level = [root]
        for depth in range(k + 1):
            self.stats["classes"] += len(level)
            if self.stats["classes"] > self.budget:
                raise ResourceBudgetError(
                    f"more than {self.budget} trace classes; raise {BUDGET_ENV} or lower k")
            level.sort(key=lambda node: min(node.reps.values())[0])
            children = {}
            for node in level:
                words = node.key
                full = tuple(len(w) for w in words)
                reach = self._closure(node.seed, words)
                self.stats["memberships"] += 1
                ends = {s for s, c in reach if c == full}
                if not ends:
                    return min(node.reps.values())[1]
                if depth == k:
                    continue
                if self.prune and depth > 0:
                    rset = frozenset(node.reps)
                    if any(self.conforms(rset, s, k - depth)
                           for s in sorted(ends, key=self.m.state_index.get)):
                        self.stats["pruned"] += 1
                        continue
                for s_n, (skey, rep) in node.reps.items():
                    for lab, targets in n.label_successors(s_n):
                        if depth == 0 and first_step is not None and lab != first_step:
                            continue
                        contrib = self._contribution(lab)
                        ckey = tuple(w + c for w, c in zip(words, contrib))
                        child = children.get(ckey)
                        if child is None:
                            child = children[ckey] = _Node(ckey, reach)
                        tkey = skey + (self._step_key(lab),)
                        for t in targets:
                            old = child.reps.get(t)
                            if old is None or tkey < old[0]:
                                child.reps[t] = (tkey, rep + (lab,))
            level = list(children.values())
            if not level:
                break
        return None


def _check_by_traces(n, m, k):
    """No class deduplication: every trace is checked on its own."""
    stats = Counter()
    for sigma in enumerate_bounded(n, k, order="bfs"):
        stats["memberships"] += 1
        if not member_closure(sigma, m):
            return sigma, stats
    return None, stats


def _parallel_worker(args):
    n, m, k, prune, budget, first = args
    engine = StrongEngine(n, m, prune=prune, budget=budget)
    return engine.search(frozenset([n.initial]), m.initial, k, first_step=first), dict(engine.stats)


def check_strong_bounded(n: MultiPortFsm, m: MultiPortFsm, k: int, dedup=True, prune=True,
                         parallel=False, workers=None) -> Verdict:
    """``n ⊑_s^k m``; a failure carries the least violating trace."""
    require_same_alphabets(n, m)
    require_complete(n, "implementation")
    require_complete(m, "specification")
    if k < 0:
        raise ValueError("bound must be non-negative")
    if not dedup:
        sigma, stats = _check_by_traces(n, m, k)
    elif parallel and k > 0:
        firsts = [lab for lab, _ in n.label_successors(n.initial)]
        jobs = [(n, m, k, prune, class_budget(), lab) for lab in firsts]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_parallel_worker, jobs))
        stats = Counter()
        found = []
        for trace, st in results:
            stats.update(st)
            if trace is not None:
                found.append(trace)
        sigma = min(found, key=n.trace_key) if found else None
    else:
        engine = StrongEngine(n, m, prune=prune)
        sigma = engine.search(frozenset([n.initial]), m.initial, k)
        stats = engine.stats
    stats = dict(sorted(stats.items()))
    if sigma is None:
        return Verdict(True, stats=stats)
    return Verdict(False, counterexample=sigma, prefix_length=len(sigma), stats=stats)


# -- decidable special cases ---------------------------------------------

def all_output(m: MultiPortFsm) -> bool:
    return all(z is not None for t in m.transitions for z in t.outputs)


def check_strong_all_output_case(n: MultiPortFsm, m: MultiPortFsm) -> Verdict:
    """Exact ``n ⊑_s m`` when every transition of ``m`` outputs at every port.

    Then ``∼`` is equality on traces of ``m``, and a trace with a missing
    output is never equivalent to one, so the question is plain language
    inclusion, decided on the product with the determinized ``m``.
    """
    require_same_alphabets(n, m)
    if not all_output(m):
        raise PreconditionError("specification has a transition with a null output slot")
    start = (frozenset([n.initial]), frozenset([m.initial]))
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        ns, ms = pair
        labels = {}
        for s in ns:
            for lab, targets in n.label_successors(s):
                labels.setdefault(lab, set()).update(targets)
        for lab in sorted(labels, key=n.step_key):
            m_next = frozenset(t for s in ms for t in m.successors(s, lab))
            steps = [lab]
            if not m_next:
                node = pair
                while parent[node] is not None:
                    node, prev = parent[node]
                    steps.append(prev)
                sigma = tuple(reversed(steps))
                return Verdict(False, counterexample=sigma, prefix_length=len(sigma))
            nxt = (frozenset(labels[lab]), m_next)
            if nxt not in parent:
                parent[nxt] = (pair, lab)
                queue.append(nxt)
    return Verdict(True)


def single_symbol_ports(m: MultiPortFsm) -> bool:
    return all(len(i) + len(o) <= 1 for i, o in zip(m.inputs, m.outputs))


def parikh_vector(m: MultiPortFsm, trace) -> tuple:
    """Occurrence counts per port; with ``|Act_p| <= 1`` that is per symbol."""
    return tuple(len(w) for w in local_traces(m, trace))


def _parikh_levels(m: MultiPortFsm, bound: int):
    """Per depth: ``{(state, vector): least trace}`` for traces of ``m``."""
    level = {(m.initial, (0,) * m.n_ports): ((), ())}
    for depth in range(bound + 1):
        yield depth, level
        if depth == bound:
            return
        nxt = {}
        for (s, vec), (tkey, rep) in level.items():
            for lab, targets in m.label_successors(s):
                v = list(vec)
                v[m.input_port[lab.input]] += 1
                for p, z in enumerate(lab.outputs):
                    if z is not None:
                        v[p] += 1
                v = tuple(v)
                k2 = tkey + (m.step_key(lab),)
                for t in targets:
                    old = nxt.get((t, v))
                    if old is None or k2 < old[0]:
                        nxt[(t, v)] = (k2, rep + (lab,))
        level = nxt


def check_parikh_case_bounded(n: MultiPortFsm, m: MultiPortFsm, bound: int) -> Verdict:
    """Bounded ``⊑_s`` on Parikh vectors, valid when every port has ≤ 1 symbol."""
    require_same_alphabets(n, m)
    if not single_symbol_ports(n) or not single_symbol_ports(m):
        raise PreconditionError("some port observes more than one symbol")
    for (_, n_level), (_, m_level) in zip(_parikh_levels(n, bound), _parikh_levels(m, bound)):
        m_vectors = {vec for _, vec in m_level}
        bad = [v for (_, vec), v in n_level.items() if vec not in m_vectors]
        if bad:
            sigma = min(bad)[1]
            return Verdict(False, counterexample=sigma, prefix_length=len(sigma))
    return Verdict(True)


@dataclass(frozen=True)
class Distinguishability:
    n_from_m: Verdict
    m_from_n: Verdict

    @property
    def n_distinguishable_from_m(self) -> bool:
        return not self.n_from_m.passed

    @property
    def m_distinguishable_from_n(self) -> bool:
        return not self.m_from_n.passed

    @property
    def between(self) -> bool:
        return self.n_distinguishable_from_m and self.m_distinguishable_from_n


def distinguishable_bounded(n: MultiPortFsm, m: MultiPortFsm, k: int, **kw) -> Distinguishability:
    """Bounded witnesses for ``ℒ(n) ⊄ ℒ(m)`` and ``ℒ(m) ⊄ ℒ(n)``."""
    return Distinguishability(check_strong_bounded(n, m, k, **kw),
                              check_strong_bounded(m, n, k, **kw))
