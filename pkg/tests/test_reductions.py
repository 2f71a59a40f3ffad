import itertools

import pytest

from distconform.conformance import check_strong_bounded
from distconform.errors import UsageError
from distconform.fsm import check_well_formed, equivalent
from distconform.multitape import accepts_tuple, bounded_tuple_inclusion, bounded_tuples
from distconform.oracle import member_closure
from distconform.reductions import (X_END, OneInThreeSatInstance, PcpInstance, gen_pcp_fsm_gadget,
                                    gen_pcp_gadget, gen_sat_gadget, pcp_witness, sat_m1,
                                    sat_target_trace, solve_one_in_three, solve_pcp_bounded)

SOLVABLE = PcpInstance.from_strings(("ab", "a"), ("b", "bb"))
UNSOLVABLE = PcpInstance.from_strings(("a", "b"))


def test_pcp_solver():
    inst = PcpInstance.from_strings(("a", "baa"), ("ab", "aa"), ("bba", "bb"))
    sol = solve_pcp_bounded(inst, 6)
    assert sol == (3, 2, 3, 1)
    top, bottom = inst.concatenations(sol)
    assert "".join(top) == "".join(bottom) == "bbaabbbaa"
    assert solve_pcp_bounded(SOLVABLE, 4) == (1, 2)
    assert solve_pcp_bounded(UNSOLVABLE, 12) is None


def test_pcp_solver_against_enumeration(rng):
    for _ in range(40):
        pairs = [("".join(rng.choice("ab") for _ in range(rng.randint(1, 3))),
                  "".join(rng.choice("ab") for _ in range(rng.randint(1, 3)))) for _ in range(2)]
        inst = PcpInstance.from_strings(*pairs)
        found = solve_pcp_bounded(inst, 4)
        brute = next((seq for n in range(1, 5) for seq in itertools.product((1, 2), repeat=n)
                      if inst.is_solution(seq)), None)
        assert (found is None) == (brute is None)
        if found:
            assert inst.is_solution(found) and len(found) == len(brute)


def test_pcp_gadget_solvable():
    n, m = gen_pcp_gadget(SOLVABLE)
    witness = pcp_witness(SOLVABLE, (1, 2))
    assert witness == (("x", "a_1", "b_1", "b_1", X_END), ("a_2", "b_2", "b_2"))
    assert bounded_tuple_inclusion(n, m, 7).passed
    v = bounded_tuple_inclusion(n, m, 8)
    assert not v.passed and v.counterexample == witness


def test_pcp_gadget_unsolvable():
    n, m = gen_pcp_gadget(UNSOLVABLE)
    assert bounded_tuple_inclusion(n, m, 10).passed


def test_pcp_gadget_language_clauses():
    for inst in (SOLVABLE, UNSOLVABLE):
        n, m = gen_pcp_gadget(inst)
        for tup in bounded_tuples(n, 6):
            if X_END not in tup[0]:
                assert accepts_tuple(m, tup)
        # prefix closed: dropping the last symbol of the word lands on some tape's end
        tuples = bounded_tuples(n, 6)
        for tup in tuples - {((), ())}:
            assert any(tup[:i] + (w[:-1],) + tup[i + 1:] in tuples for i, w in enumerate(tup) if w)


def test_pcp_fsm_gadget():
    fn, fm = gen_pcp_fsm_gadget(SOLVABLE)
    for f in (fn, fm):
        wf = check_well_formed(f)
        assert wf.complete and wf.connected
    v = check_strong_bounded(fn, fm, 8)
    assert not v.passed
    tapes = ([], [])
    for x, _ in v.counterexample:
        tapes[0 if x in fn.inputs[0] else 1].append(x)
    assert (tuple(tapes[0]), tuple(tapes[1])) == pcp_witness(SOLVABLE, (1, 2))
    assert check_strong_bounded(fn, fn, 6).passed
    un, um = gen_pcp_fsm_gadget(UNSOLVABLE)
    assert check_strong_bounded(un, um, 10).passed


def sat(r, *clauses):
    return OneInThreeSatInstance(r, tuple(tuple((abs(v), v > 0) for v in c) for c in clauses))


def test_sat_solver():
    assert solve_one_in_three(sat(3, (1, 2, 3))) == (True, False, False)
    assert solve_one_in_three(sat(1, (1, 1, 1))) is None
    sol = solve_one_in_three(sat(2, (1, -2, 2)))
    assert sol is not None and sol[0] is False
    with pytest.raises(UsageError):
        solve_one_in_three(sat(3, (1, 2, 3)), cap=2)


def test_sat_m1_target(rng):
    for _ in range(30):
        r = rng.randint(2, 4)
        inst = sat(r, *[[rng.choice((1, -1)) * rng.randint(1, r) for _ in range(3)]
                       for _ in range(rng.randint(1, 2))])
        m1 = sat_m1(inst)
        assert check_well_formed(m1).deterministic
        assert bool(member_closure(sat_target_trace(inst), m1)) == (solve_one_in_three(inst) is not None)


def test_sat_gadget():
    g = gen_sat_gadget(sat(3, (1, 2, 3)))
    assert g.k == 5
    for mach in (g.n, g.m):
        wf = check_well_formed(mach)
        assert wf.complete and wf.connected and wf.deterministic
    assert check_strong_bounded(g.n, g.m, g.k).passed
    unsat = sat(2, (1, 1, 1))
    g = gen_sat_gadget(unsat)
    v = check_strong_bounded(g.n, g.m, g.k)
    assert not v.passed
    sigma1 = sat_target_trace(unsat)
    sigma1 = (sigma1[2], sigma1[0], sigma1[1]) + sigma1[3:]
    assert equivalent(g.n, v.counterexample, sigma1)
    with pytest.raises(UsageError):
        gen_sat_gadget(sat(1, (1, 1, 1)))


def test_sat_gadget_sweep(rng):
    for _ in range(60):
        r = rng.randint(2, 4)
        inst = sat(r, *[[rng.choice((1, -1)) * rng.randint(1, r) for _ in range(3)]
                       for _ in range(rng.randint(1, 3))])
        g = gen_sat_gadget(inst)
        assert check_strong_bounded(g.n, g.m, g.k).passed == (solve_one_in_three(inst) is not None)
