"""JSON report documents for checks, with a schema and deterministic output."""

from __future__ import annotations

import json

import jsonschema

from .fsm import MultiPortFsm, local_traces

_STEP = {
    "type": "object",
    "required": ["input", "outputs"],
    "properties": {
        "input": {"type": "string"},
        "outputs": {"type": "array", "items": {"type": ["string", "null"]}},
    },
    "additionalProperties": False,
}

_TRACE = {"type": "array", "items": _STEP}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["check", "verdict", "statistics"],
    "properties": {
        "check": {"enum": ["weak", "strong-bounded", "strong-all-output", "strong-parikh",
                           "distinguish", "member", "member-pc"]},
        "verdict": {"enum": ["pass", "fail"]},
        "bound": {"type": ["integer", "null"], "minimum": 0},
        "counterexample": {"oneOf": [{"type": "null"}, _TRACE]},
        "projections": {
            "type": "object",
            "patternProperties": {"^[0-9]+$": {"type": "array", "items": {"type": "string"}}},
            "additionalProperties": False,
        },
        "per_port": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["port", "verdict"],
                "properties": {
                    "port": {"type": "integer", "minimum": 1},
                    "verdict": {"enum": ["pass", "fail"]},
                    "local_trace": {"type": ["array", "null"], "items": {"type": "string"}},
                },
            },
        },
        "statistics": {"type": "object", "additionalProperties": {"type": "integer"}},
        "children": {"type": "array", "items": {"$ref": "#"}},
    },
    "additionalProperties": False,
}


def trace_json(trace):
    if trace is None:
        return None
    return [{"input": x, "outputs": list(outs)} for x, outs in trace]


def projections_json(m: MultiPortFsm, trace) -> dict:
    return {str(p): list(w) for p, w in enumerate(local_traces(m, trace), start=1)}


def verdict_report(check: str, verdict, m: MultiPortFsm, bound=None) -> dict:
    doc = {
        "check": check,
        "verdict": verdict.outcome,
        "bound": bound,
        "counterexample": trace_json(verdict.counterexample),
        "statistics": dict(verdict.stats),
    }
    if verdict.counterexample is not None:
        doc["projections"] = projections_json(m, verdict.counterexample)
    if verdict.per_port:
        doc["per_port"] = [{"port": v.port, "verdict": v.outcome,
                            "local_trace": list(v.local_trace) if v.local_trace is not None else None}
                           for v in verdict.per_port]
    return doc


def distinguish_report(result, m: MultiPortFsm, bound: int) -> dict:
    children = [verdict_report("strong-bounded", result.n_from_m, m, bound),
                verdict_report("strong-bounded", result.m_from_n, m, bound)]
    return {
        "check": "distinguish",
        "verdict": "fail" if result.between else "pass",
        "bound": bound,
        "statistics": {},
        "children": children,
    }


def validate(doc: dict):
    jsonschema.validate(doc, REPORT_SCHEMA)


def dumps(doc: dict) -> str:
    validate(doc)
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
