"""``distconform`` command line front-end.

Exit codes: 0 pass, 1 fail (counterexample printed), 2 usage or parse
error, 3 precondition violated, 4 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import model_io, report
from .conformance import (all_output, check_parikh_case_bounded, check_strong_all_output_case,
                          check_strong_bounded, check_weak, distinguishable_bounded,
                          single_symbol_ports)
from .constructions import witness_fsm
from .errors import DistconformError, PreconditionError
from .fsm import check_well_formed, complete, project, require_same_alphabets
from .multitape import embed_fsm
from .oracle import first_pc_violation, member_closure
from .reductions import (gen_pcp_gadget, gen_sat_gadget, pcp_witness, solve_one_in_three,
                         solve_pcp_bounded)

EXIT_PASS, EXIT_FAIL = 0, 1


def _load_fsm(path):
    return model_io.parse_fsm(model_io.read_text(path))


def _load_pair(args):
    n, m = _load_fsm(args.impl), _load_fsm(args.spec)
    if getattr(args, "complete", None):
        n, m = complete(n, args.complete), complete(m, args.complete)
    require_same_alphabets(n, m)
    return n, m


def _print_trace(trace, indent="  "):
    for step in trace:
        print(f"{indent}{step}")


def _emit(args, doc, m, trace):
    if getattr(args, "report", None):
        model_io.write_text(args.report, report.dumps(doc))
    if getattr(args, "figure", None) and trace is not None:
        from .plotting import save_chart, sequence_chart
        save_chart(sequence_chart(m, trace, title=f"{doc['check']}: {doc['verdict']}"), args.figure)


def _finish(verdict, m, label):
    print(f"{label}: {verdict.outcome}")
    if not verdict.passed:
        print("counterexample:")
        _print_trace(verdict.counterexample)
        for p, w in enumerate(_local(m, verdict.counterexample), start=1):
            print(f"  port {p}: {' '.join(w) if w else 'ε'}")
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def _local(m, trace):
    return [project(m, trace, p) for p in range(1, m.n_ports + 1)]


def cmd_check_weak(args):
    n, m = _load_pair(args)
    v = check_weak(n, m)
    for pv in v.per_port:
        line = f"port {pv.port}: {pv.outcome}"
        if not pv.passed:
            line += f"  local trace {' '.join(pv.local_trace) or 'ε'} not observable in spec"
        print(line)
    _emit(args, report.verdict_report("weak", v, n), n, v.counterexample)
    return _finish(v, n, "weak conformance")


def cmd_check_strong(args):
    n, m = _load_pair(args)
    if args.exact:
        if all_output(m):
            v, check, bound = check_strong_all_output_case(n, m), "strong-all-output", None
        elif single_symbol_ports(n) and single_symbol_ports(m):
            k = args.k if args.k is not None else len(n.states) * len(m.states)
            v, check, bound = check_parikh_case_bounded(n, m, k), "strong-parikh", k
        else:
            raise PreconditionError("--exact needs an all-output specification "
                                    "or at most one symbol per port")
    else:
        k = args.k if args.k is not None else len(n.states) * len(m.states)
        v = check_strong_bounded(n, m, k, parallel=args.parallel, workers=args.workers)
        check, bound = "strong-bounded", k
    if bound is not None:
        print(f"bound k = {bound}")
    _emit(args, report.verdict_report(check, v, n, bound), n, v.counterexample)
    return _finish(v, n, "strong conformance")


def _load_trace(args, m):
    return model_io.parse_trace(model_io.read_text(args.trace), m)


def cmd_member(args):
    m = _load_fsm(args.spec)
    trace = _load_trace(args, m)
    if args.pc:
        bad = first_pc_violation(trace, m)
        if bad is None:
            print("member of the prefix-closed closure: yes")
            return EXIT_PASS
        print(f"member of the prefix-closed closure: no (prefix of length {bad} is outside)")
        _print_trace(trace[:bad])
        return EXIT_FAIL
    res = member_closure(trace, m)
    if res.member:
        print("member of the closure: yes")
        print("equivalent trace of the machine:")
        _print_trace(res.witness)
        return EXIT_PASS
    print("member of the closure: no")
    return EXIT_FAIL


def cmd_project(args):
    m = _load_fsm(args.spec)
    w = project(m, _load_trace(args, m), args.port)
    print(" ".join(w) if w else "ε")
    return EXIT_PASS


def cmd_distinguish(args):
    n, m = _load_pair(args)
    k = args.k if args.k is not None else len(n.states) * len(m.states)
    res = distinguishable_bounded(n, m, k)
    for label, v in (("implementation outside spec", res.n_from_m),
                     ("spec outside implementation", res.m_from_n)):
        print(f"{label}: {'yes' if not v.passed else 'no'} (k = {k})")
        if not v.passed:
            _print_trace(v.counterexample)
    if args.report:
        model_io.write_text(args.report, report.dumps(report.distinguish_report(res, n, k)))
    return EXIT_FAIL if res.between else EXIT_PASS


def _write_manifest(out, manifest):
    model_io.write_text(os.path.join(out, "manifest.json"),
                        json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def cmd_gen_pcp(args):
    inst = model_io.parse_pcp(model_io.read_text(args.instance))
    os.makedirs(args.out, exist_ok=True)
    n, m = gen_pcp_gadget(inst)
    files = {"N.mtfa": model_io.serialize_mtfa(n), "M.mtfa": model_io.serialize_mtfa(m),
             "N.fsm": model_io.serialize_fsm(embed_fsm(n)), "M.fsm": model_io.serialize_fsm(embed_fsm(m))}
    for name, text in files.items():
        model_io.write_text(os.path.join(args.out, name), text)
    sol = solve_pcp_bounded(inst, args.max_indices)
    if sol is None:
        # any witness within this bound would use at most max_indices pairs
        bound, verdict, witness = 2 + 2 * args.max_indices, "pass", None
    else:
        witness = pcp_witness(inst, sol)
        bound, verdict = sum(map(len, witness)), "fail"
    _write_manifest(args.out, {
        "kind": "pcp", "files": sorted(files), "bound": bound, "expected_verdict": verdict,
        "solution": list(sol) if sol else None, "search_limit": args.max_indices,
        "witness": [list(w) for w in witness] if witness else None})
    print(f"wrote {len(files)} machines to {args.out}; expected {verdict} at bound {bound}")
    return EXIT_PASS


def cmd_gen_sat(args):
    inst = model_io.parse_sat(model_io.read_text(args.instance))
    os.makedirs(args.out, exist_ok=True)
    g = gen_sat_gadget(inst)
    model_io.write_text(os.path.join(args.out, "N.fsm"), model_io.serialize_fsm(g.n))
    model_io.write_text(os.path.join(args.out, "M.fsm"), model_io.serialize_fsm(g.m))
    sol = solve_one_in_three(inst)
    verdict = "pass" if sol is not None else "fail"
    _write_manifest(args.out, {
        "kind": "one-in-three-sat", "files": ["M.fsm", "N.fsm"], "bound": g.k,
        "expected_verdict": verdict, "assignment": list(sol) if sol else None,
        "port_map": {str(k): v for k, v in sorted(g.port_map.items())}})
    print(f"wrote N.fsm and M.fsm to {args.out}; expected {verdict} at k = {g.k}")
    return EXIT_PASS


def cmd_witness(args):
    m = _load_fsm(args.spec)
    n = witness_fsm(m, _load_trace(args, m))
    text = model_io.serialize_fsm(n)
    if args.out:
        model_io.write_text(args.out, text)
        print(f"wrote {args.out} ({len(n.states)} states)")
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def cmd_info(args):
    m = _load_fsm(args.spec)
    wf = check_well_formed(m)
    print(f"ports: {m.n_ports}")
    print(f"states: {len(m.states)}  transitions: {len(m.transitions)}")
    for p in range(m.n_ports):
        print(f"  port {p + 1}: inputs {list(m.inputs[p])} outputs {list(m.outputs[p])}")
    print(f"deterministic: {'yes' if wf.deterministic else 'no'}")
    print(f"completely specified: {'yes' if wf.complete else 'no'}")
    for s, x in wf.missing:
        print(f"  missing: {s} --{x}-->")
    print(f"initially connected: {'yes' if wf.connected else 'no'}")
    for s in wf.unreachable:
        print(f"  unreachable: {s}")
    print(f"all-output: {'yes' if all_output(m) else 'no'}")
    print(f"at most one symbol per port: {'yes' if single_symbol_ports(m) else 'no'}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="distconform",
                                 description="Conformance of multi-port FSMs under distributed observation.")
    sub = ap.add_subparsers(dest="command", required=True)

    def pair(p):
        p.add_argument("impl", help="implementation FSM file")
        p.add_argument("spec", help="specification FSM file")
        p.add_argument("--complete", choices=("self-loop-null", "error-state"),
                       help="complete both machines before checking")

    p = sub.add_parser("check-weak", help="per-port projected language inclusion")
    pair(p)
    p.add_argument("--report", help="write a JSON report")
    p.add_argument("--figure", help="write a sequence chart PNG of the counterexample")
    p.set_defaults(func=cmd_check_weak)

    p = sub.add_parser("check-strong", help="bounded strong conformance")
    pair(p)
    p.add_argument("--k", type=int, help="input bound (default |S_n|*|S_m|)")
    p.add_argument("--parallel", action="store_true", help="split the search across processes")
    p.add_argument("--workers", type=int)
    p.add_argument("--exact", action="store_true",
                   help="use the all-output or one-symbol-per-port decision procedure")
    p.add_argument("--report", help="write a JSON report")
    p.add_argument("--figure", help="write a sequence chart PNG of the counterexample")
    p.set_defaults(func=cmd_check_strong)

    p = sub.add_parser("member", help="membership of a trace in the closure of a machine")
    p.add_argument("trace")
    p.add_argument("spec")
    p.add_argument("--pc", action="store_true", help="require every prefix to be a member too")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("project", help="local trace at one port")
    p.add_argument("trace")
    p.add_argument("spec")
    p.add_argument("--port", type=int, required=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("distinguish", help="bounded witnesses in both directions")
    pair(p)
    p.add_argument("--k", type=int)
    p.add_argument("--report")
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("gen-pcp", help="write the PCP gadget machines")
    p.add_argument("instance")
    p.add_argument("--out", required=True)
    p.add_argument("--max-indices", type=int, default=8, help="brute-force search limit")
    p.set_defaults(func=cmd_gen_pcp)

    p = sub.add_parser("gen-sat", help="write the one-in-three SAT gadget machines")
    p.add_argument("instance")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_sat)

    p = sub.add_parser("witness", help="build a DFSM containing a trace of the closure")
    p.add_argument("spec")
    p.add_argument("trace")
    p.add_argument("--out")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("info", help="well-formedness report")
    p.add_argument("spec")
    p.set_defaults(func=cmd_info)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DistconformError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
