"""The twelve acceptance criteria, one test each.

Every test records a ``criterion N: PASS|FAIL ...`` line that is echoed in
the terminal summary, then asserts.
"""

import itertools
import os
import random
import subprocess
import sys
import time
from pathlib import Path

from conftest import ACCEPTANCE_LINES

from distconform.conformance import (check_parikh_case_bounded, check_strong_all_output_case,
                                     check_strong_bounded, check_weak)
from distconform.constructions import MACHINE_FIXTURES, witness_fsm
from distconform.fsm import Step, enumerate_bounded, equivalent, make_trace
from distconform.generators import random_mtfa, random_pair, random_query, related_pair
from distconform.multitape import bounded_tuple_inclusion, bounded_tuples, concat, embed_fsm, union
from distconform.oracle import (configuration_bound, member_closure, member_closure_bruteforce,
                                member_pc)
from distconform.reductions import (OneInThreeSatInstance, PcpInstance, gen_pcp_gadget,
                                    gen_sat_gadget, solve_one_in_three)

TAPES = (("a", "b"), ("c", "d"))


def record(n, ok, detail, elapsed, limit):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"criterion {n}: {status}  {detail}  [{elapsed:.2f}s, limit {limit:g}s]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert within, line


def test_criterion_01_weak_strong_separation(fx):
    t = time.perf_counter()
    weak = check_weak(fx["N1"], fx["M1"])
    strong = check_strong_bounded(fx["N1"], fx["M1"], 1)
    target = make_trace(("x1", ("y1", "y2'")))
    ok = weak.passed and not strong.passed and equivalent(fx["M1"], strong.counterexample, target)
    record(1, ok, f"weak={weak.outcome} strong(k=1)={strong.outcome} cex={strong.counterexample and strong.counterexample[0]}",
           time.perf_counter() - t, 1)


def _labels(m):
    slots = [(None,) + port for port in m.outputs]
    return [Step(x, outs) for x in m.all_inputs for outs in itertools.product(*slots)]


def test_criterion_02_oracle_equivalence(fx):
    t = time.perf_counter()
    bad = checked = 0
    for name in MACHINE_FIXTURES:
        m = fx[name]
        labels = _labels(m)
        for n in range(5):
            for sigma in itertools.product(labels, repeat=n):
                checked += 1
                bad += bool(member_closure(sigma, m)) != member_closure_bruteforce(sigma, m)
    rng = random.Random(2)
    for _ in range(1000):
        _, m = random_pair(rng, ports=rng.randint(1, 3), states=4)
        sigma = random_query(rng, m, max_len=5)
        checked += 1
        bad += bool(member_closure(sigma, m)) != member_closure_bruteforce(sigma, m)
    record(2, bad == 0, f"{checked} queries, {bad} discrepancies", time.perf_counter() - t, 60)


def test_criterion_03_complexity_envelope():
    t = time.perf_counter()
    rng = random.Random(3)
    worst = 0.0
    over = 0
    for _ in range(100):
        _, m = random_pair(rng, ports=rng.randint(1, 3), states=4)
        sigma = random_query(rng, m, max_len=6)
        res = member_closure(sigma, m)
        bound = configuration_bound(m, sigma)
        over += res.visited > bound
        worst = max(worst, res.visited / bound)
    record(3, over == 0, f"100 queries, max visited/bound = {worst:.3f}", time.perf_counter() - t, 60)


def test_criterion_04_non_prefix_closed(fx):
    t = time.perf_counter()
    sigma = make_trace(("x1", ("y1", "-")), ("x1", ("y1", "y2")))
    m = fx["nonprefix"]
    a, b = bool(member_closure(sigma, m)), member_pc(sigma, m)
    record(4, a and not b, f"member={a} member_pc={b}", time.perf_counter() - t, 1)


def test_criterion_05_prefix_closed_core_at_bound(fx):
    t = time.perf_counter()
    m, mp = fx["M7"], fx["M7'"]
    v = check_strong_bounded(mp, m, 6)
    fwd = all(member_closure(s, m) for s in enumerate_bounded(mp, 6))
    back = all(member_closure(s, mp) for s in enumerate_bounded(m, 6))
    record(5, v.passed and fwd and back, f"M7'<=M7 at 6: {v.outcome}, L6(M7') in cl(M7): {fwd}, "
           f"L6(M7) in cl(M7'): {back}", time.perf_counter() - t, 30)


def test_criterion_06_pcp_gadget():
    t = time.perf_counter()
    inst = PcpInstance.from_strings(("ab", "a"), ("b", "bb"))
    n, m = gen_pcp_gadget(inst)
    tup = bounded_tuple_inclusion(n, m, 8)
    w1 = [s[0] for s in tup.counterexample[0] if s not in ("x", "x'")] if not tup.passed else None
    w2 = [s[0] for s in tup.counterexample[1]] if not tup.passed else None
    fsm = check_strong_bounded(embed_fsm(n), embed_fsm(m), 8)
    solvable_ok = (not tup.passed and w1 == w2 and "x'" in tup.counterexample[0] and not fsm.passed)
    un, um = gen_pcp_gadget(PcpInstance.from_strings(("a", "b")))
    unsolvable_ok = (bounded_tuple_inclusion(un, um, 10).passed
                     and check_strong_bounded(embed_fsm(un), embed_fsm(um), 10).passed)
    record(6, solvable_ok and unsolvable_ok,
           f"solvable: tuple={tup.outcome} w={''.join(w1 or [])} fsm={fsm.outcome}; "
           f"unsolvable passes at 10: {unsolvable_ok}", time.perf_counter() - t, 300)


def test_criterion_07_embedding_lemma():
    t = time.perf_counter()
    rng = random.Random(7)
    bad = fails = 0
    for _ in range(50):
        a, b = random_mtfa(rng, TAPES), random_mtfa(rng, TAPES)
        for bound in range(6):
            x = bounded_tuple_inclusion(a, b, bound).passed
            y = check_strong_bounded(embed_fsm(a), embed_fsm(b), bound).passed
            bad += x != y
            fails += not x
    record(7, bad == 0, f"50 pairs x B<=5, {bad} discrepancies ({fails} failing checks)",
           time.perf_counter() - t, 300)


def _random_sat(rng, r, q):
    return OneInThreeSatInstance(r, tuple(tuple((rng.randint(1, r), rng.random() < 0.5)
                                                for _ in range(3)) for _ in range(q)))


def test_criterion_08_sat_gadget():
    t = time.perf_counter()
    rng = random.Random(8)
    bad = total = solvable = 0
    for r in (2, 3, 4):
        for q in (1, 2):
            for _ in range(35):
                inst = _random_sat(rng, r, q)
                g = gen_sat_gadget(inst)
                s = solve_one_in_three(inst) is not None
                bad += check_strong_bounded(g.n, g.m, g.k).passed != s
                total += 1
                solvable += s
    record(8, bad == 0 and total >= 200,
           f"{total} instances ({solvable} solvable), {bad} discrepancies", time.perf_counter() - t, 600)


def test_criterion_09_special_cases():
    t = time.perf_counter()
    rng = random.Random(9)
    bad_a = bad_p = 0
    for i in range(50):
        make = related_pair if i % 2 else random_pair
        n, m = make(rng, ports=2, states=3, all_output=True)
        exact = check_strong_all_output_case(n, m)
        for k in range(6):
            expected = exact.passed or len(exact.counterexample) > k
            bad_a += check_strong_bounded(n, m, k).passed != expected
    for i in range(50):
        make = related_pair if i % 2 else random_pair
        n, m = make(rng, ports=3, states=3, single_symbol=True)
        for b in range(7):
            bad_p += check_parikh_case_bounded(n, m, b).passed != check_strong_bounded(n, m, b).passed
    record(9, bad_a == 0 and bad_p == 0, f"all-output {bad_a} / parikh {bad_p} discrepancies",
           time.perf_counter() - t, 300)


def test_criterion_10_witness_construction(fx):
    t = time.perf_counter()
    rng = random.Random(10)
    names = sorted(fx)
    done = failures = 0
    while done < 20:
        m = fx[rng.choice(names)]
        sigma = random_query(rng, m, max_len=4)
        if not sigma or not member_pc(sigma, m):
            continue
        n = witness_fsm(m, sigma)
        ok = n.is_trace(sigma) and check_strong_bounded(n, m, len(sigma) + 2).passed
        failures += not ok
        done += 1
    record(10, failures == 0, f"{done} witnesses, {failures} failures", time.perf_counter() - t, 120)


def test_criterion_11_closure_constructions():
    t = time.perf_counter()
    rng = random.Random(11)
    bad = 0
    for _ in range(50):
        a, b = random_mtfa(rng, TAPES), random_mtfa(rng, TAPES)
        la, lb = bounded_tuples(a, 5), bounded_tuples(b, 5)
        bad += bounded_tuples(union(a, b), 5) != la | lb
        cat = {tuple(x + y for x, y in zip(s, u)) for s in la for u in lb}
        bad += bounded_tuples(concat(a, b), 5) != {c for c in cat if sum(map(len, c)) <= 5}
    record(11, bad == 0, f"50 pairs, {bad} discrepancies", time.perf_counter() - t, 120)


def _report_bytes(tmp_path, seed, args):
    out = tmp_path / f"report-{seed}.json"
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    subprocess.run([sys.executable, "-m", "distconform.cli", *args, "--report", str(out)],
                   env=env, capture_output=True, check=False)
    return out.read_bytes()


def test_criterion_12_monotone_and_deterministic(tmp_path, data_dir):
    t = time.perf_counter()
    rng = random.Random(12)
    violations = 0
    for _ in range(40):
        n, m = related_pair(rng, ports=rng.randint(1, 3), states=3)
        k = rng.randint(1, 5)
        if check_strong_bounded(n, m, k).passed:
            violations += not all(check_strong_bounded(n, m, j).passed for j in range(k))
    fixtures = Path(data_dir) / "fixtures"
    runs = [
        ["check-strong", str(fixtures / "N1.fsm"), str(fixtures / "M1.fsm"), "--k", "3"],
        ["check-weak", str(fixtures / "M1.fsm"), str(fixtures / "N1.fsm")],
        ["check-strong", str(fixtures / "M4.fsm"), str(fixtures / "M5.fsm"), "--k", "4",
         "--complete", "self-loop-null"],
    ]
    identical = True
    for args in runs:
        reports = {_report_bytes(tmp_path, seed, args) for seed in (0, 1, 2)}
        identical &= len(reports) == 1 and reports != {b""}
    record(12, violations == 0 and identical,
           f"monotonicity violations {violations}, reports byte-identical across hash seeds: {identical}",
           time.perf_counter() - t, 300)
