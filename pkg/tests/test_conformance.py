import pytest

from distconform.conformance import (BUDGET_ENV, ProjectionAutomaton, check_parikh_case_bounded,
                                     check_strong_all_output_case, check_strong_bounded,
                                     check_weak, distinguishable_bounded)
from distconform.errors import IncompleteMachineError, PreconditionError, ResourceBudgetError, UsageError
from distconform.fsm import MultiPortFsm, Transition, enumerate_bounded, make_trace, project
from distconform.generators import random_pair, related_pair
from distconform.oracle import member_closure, member_closure_bruteforce

N1_STEP = make_trace(("x1", ("y1", "y2'")))


def definitional(n, m, k):
    """Bounded strong conformance straight from the definition, using the brute-force oracle."""
    for sigma in enumerate_bounded(n, k, order="bfs"):
        if not member_closure_bruteforce(sigma, m):
            return False, sigma
    return True, None


def test_weak_versus_strong_separation(fx):
    assert check_weak(fx["N1"], fx["M1"]).passed
    v = check_strong_bounded(fx["N1"], fx["M1"], 1)
    assert not v.passed and v.counterexample == N1_STEP


def test_weak_failure_reports_port(fx):
    v = check_weak(fx["M1"], fx["N1"])
    assert not v.passed
    # N1 never emits y1' nor y2, so both ports fail; the first is reported
    assert v.port == 1 and v.local_trace == ("x1", "y1'")
    port2 = v.per_port[1]
    assert not port2.passed and port2.local_trace == ("y2",)
    assert project(fx["M1"], port2.counterexample, 2) == ("y2",)


def test_reflexive(fx):
    for m in fx.values():
        assert check_weak(m, m).passed
        assert check_strong_bounded(m, m, 3).passed


def test_m7_prime_conforms_to_m7(fx):
    assert check_strong_bounded(fx["M7'"], fx["M7"], 5).passed


def test_projection_automaton_language(fx):
    for m in fx.values():
        for p in range(1, m.n_ports + 1):
            pa = ProjectionAutomaton.of(m, p)
            for sigma in enumerate_bounded(m, 3):
                assert pa.accepts(project(m, sigma, p))


def test_agrees_with_definition(rng):
    for _ in range(60):
        n, m = (random_pair if rng.random() < .5 else related_pair)(rng, ports=rng.randint(1, 3), states=3)
        k = rng.randint(0, 3)
        ok, sigma = definitional(n, m, k)
        v = check_strong_bounded(n, m, k)
        assert v.passed == ok
        if not ok:
            assert len(v.counterexample) == len(sigma)
            assert n.is_trace(v.counterexample) and not member_closure(v.counterexample, m)


def test_dedup_prune_and_parallel_agree(rng):
    for _ in range(15):
        n, m = related_pair(rng, ports=2, states=3)
        base = check_strong_bounded(n, m, 3)
        for kw in ({"dedup": False}, {"prune": False}, {"parallel": True, "workers": 2}):
            v = check_strong_bounded(n, m, 3, **kw)
            assert (v.passed, v.counterexample) == (base.passed, base.counterexample)


def test_strong_implies_weak_at_bound(rng):
    for _ in range(40):
        n, m = related_pair(rng, ports=2, states=3)
        if check_strong_bounded(n, m, 3).passed:
            for sigma in enumerate_bounded(n, 3):
                for p in range(1, 3):
                    assert ProjectionAutomaton.of(m, p).accepts(project(n, sigma, p))


def test_monotone_in_bound(rng):
    for _ in range(30):
        n, m = related_pair(rng, ports=2, states=3)
        verdicts = [check_strong_bounded(n, m, k).passed for k in range(5)]
        assert verdicts == sorted(verdicts, reverse=True)


def test_incomplete_machines_rejected(fx):
    partial = MultiPortFsm(["s0"], "s0", fx["M1"].inputs, fx["M1"].outputs)
    with pytest.raises(IncompleteMachineError):
        check_strong_bounded(partial, fx["M1"], 1)


def test_alphabet_mismatch(fx):
    with pytest.raises(UsageError):
        check_weak(fx["M1"], fx["M4"])


def test_budget(fx, monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "3")
    with pytest.raises(ResourceBudgetError):
        check_strong_bounded(fx["M4"], fx["M4"], 4)


def test_all_output_case(fx, rng):
    v = check_strong_all_output_case(fx["N1"], fx["M1"])
    assert not v.passed and v.counterexample == N1_STEP
    assert check_strong_all_output_case(fx["M1"], fx["M1"]).passed
    with pytest.raises(PreconditionError):
        check_strong_all_output_case(fx["M7'"], fx["M7"])
    for _ in range(30):
        n, m = related_pair(rng, ports=2, states=3, all_output=True)
        exact = check_strong_all_output_case(n, m)
        for k in range(6):
            assert check_strong_bounded(n, m, k).passed == (exact.passed or len(exact.counterexample) > k)


def test_parikh_case(fx, rng):
    null = (None, None)
    loops = [Transition("s0", "x1", null, "s1"), Transition("s1", "x2", null, "s0"),
             Transition("s0", "x2", null, "s0"), Transition("s1", "x1", null, "s1")]
    counter = MultiPortFsm(["s0", "s1"], "s0", (("x1",), ("x2",)), ((), ()), loops)
    cut = MultiPortFsm(["s0", "s1"], "s0", (("x1",), ("x2",)), ((), ()),
                       loops[:2] + [Transition("s0", "x2", null, "s1"), loops[3]])
    assert check_parikh_case_bounded(counter, counter, 4).passed
    v = check_parikh_case_bounded(cut, counter, 4)
    assert v.passed == check_strong_bounded(cut, counter, 4).passed
    with pytest.raises(PreconditionError):
        check_parikh_case_bounded(fx["M1"], fx["M1"], 2)
    for i in range(30):
        make = random_pair if i % 2 else related_pair
        n, m = make(rng, ports=3, states=3, single_symbol=True)
        for b in range(5):
            assert check_parikh_case_bounded(n, m, b).passed == check_strong_bounded(n, m, b).passed


def test_distinguish(fx):
    d = distinguishable_bounded(fx["N1"], fx["M1"], 1)
    assert d.n_distinguishable_from_m and d.m_distinguishable_from_n and d.between
    assert d.m_from_n.counterexample == make_trace(("x1", ("y1", "y2")))
    same = distinguishable_bounded(fx["M4"], fx["M4"], 3)
    assert not same.n_distinguishable_from_m and not same.m_distinguishable_from_n
