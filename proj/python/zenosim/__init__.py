"""Zeno-machine simulation toolkit.

Two-tape Turing machines with a textual program format, the tape-backed
halving counter with its symbolic w-limit, exact ordinal/rational time
accounting, the Zeno halting procedure, right-mover-to-DFA conversion, and
the dovetailing diagonalization machinery, all at finite truncation.
"""

from zenosim._core import (
    Counter,
    Dfa,
    Machine,
    Ordinal,
    ZenosimError,
    build_placeholder_u,
    build_program_y,
    classify_halting_profile,
    compare_counters,
    decode,
    encode,
    is_right_mover,
    language_equiv_bounded,
    paradox_report,
    parse,
    right_mover_to_dfa,
    run,
    run_dovetail,
    serialize,
    simulate,
    step_duration,
    wall_time,
    wall_time_limit,
    zeno_halt_check,
    __version__,
)

__all__ = [
    "Counter",
    "Dfa",
    "Machine",
    "Ordinal",
    "ZenosimError",
    "build_placeholder_u",
    "build_program_y",
    "classify_halting_profile",
    "compare_counters",
    "decode",
    "encode",
    "is_right_mover",
    "language_equiv_bounded",
    "paradox_report",
    "parse",
    "right_mover_to_dfa",
    "run",
    "run_dovetail",
    "serialize",
    "simulate",
    "step_duration",
    "wall_time",
    "wall_time_limit",
    "zeno_halt_check",
    "__version__",
]
