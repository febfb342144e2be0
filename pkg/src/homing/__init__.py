"""Homing vector automata over exact rational arithmetic."""

from .analysis import (
    DFA,
    BoundReport,
    CheckResult,
    Undetermined,
    config_count_bound,
    cross_check,
    entry_bound,
    enumerate_language,
    equivalence,
    growth_audit,
    unary_dfa_extract,
)
from .codec import InvalidEncoding, gsb_decode, gsb_encode, gsb_matrices, sb_decode, sb_encode
from .counters import CounterMachine, compile_blind, compile_one_counter, run_counter
from .gallery import GalleryEntry, gallery_all, gallery_get
from .linalg import Matrix, Vector, mat_inverse, mat_mul, rat, vec_mat_mul, vector
from .machine import (
    HVA,
    BudgetExceeded,
    Configuration,
    Guard,
    HVAError,
    MachineFormatError,
    RunResult,
    Transition,
    load_machine,
    run,
    step,
    trace,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "BudgetExceeded",
    "CheckResult",
    "Configuration",
    "CounterMachine",
    "DFA",
    "GalleryEntry",
    "Guard",
    "HVA",
    "HVAError",
    "InvalidEncoding",
    "MachineFormatError",
    "Matrix",
    "RunResult",
    "Transition",
    "Undetermined",
    "Vector",
    "compile_blind",
    "compile_one_counter",
    "config_count_bound",
    "cross_check",
    "entry_bound",
    "enumerate_language",
    "equivalence",
    "gallery_all",
    "gallery_get",
    "growth_audit",
    "gsb_decode",
    "gsb_encode",
    "gsb_matrices",
    "load_machine",
    "mat_inverse",
    "mat_mul",
    "rat",
    "run",
    "run_counter",
    "sb_decode",
    "sb_encode",
    "step",
    "trace",
    "unary_dfa_extract",
    "validate",
    "vec_mat_mul",
    "vector",
]
