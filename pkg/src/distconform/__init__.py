"""Conformance checking for multi-port FSMs observed at distributed ports."""

from .conformance import (
    Verdict,
    check_parikh_case_bounded,
    check_strong_all_output_case,
    check_strong_bounded,
    check_weak,
    distinguishable_bounded,
)
from .constructions import fixtures, witness_fsm
from .errors import (
    DistconformError,
    ParseError,
    PreconditionError,
    ResourceBudgetError,
    UsageError,
)
from .fsm import MultiPortFsm, Step, Transition, check_well_formed, equivalent, make_trace, project
from .multitape import MultiTapeFA, accepts_tuple, bounded_tuple_inclusion, embed_fsm
from .oracle import member_closure, member_pc

__version__ = "0.1.0"
