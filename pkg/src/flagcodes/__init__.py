"""Flag-qubit syndrome extraction gadgets built from classical codes."""

from .codes import ParityCheck, bch_check, decode_classical, hamming_check, sort_desc, verify_distance
from .decode import CorrectionTable, FtVerdict, build_table_bruteforce, build_table_majority, decodable, majority_decode, verify_ft
from .errors import InvalidArgument, InvalidCircuit, OrderingViolation, ResourceLimit, UndecodableSubpattern
from .f2core import BitMatrix, BitVector, suffix_xor, xor
from .faults import DataError, FaultSet, FlagPattern, enumerate_faults, propagate
from .gadget import FlagCircuit, IdealGadget, Stabilizer, build_gadget, double_data, fc_from_circuit, stack, unfold
from .multi import QuantumCode, connect, run_round, single_fault_sweep
from .resources import ResourceModel, flag_count, report, shor_estimate, steane_knill
from .search import min_reps_grid, search_small

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "BitVector",
    "CorrectionTable",
    "DataError",
    "FaultSet",
    "FlagCircuit",
    "FlagPattern",
    "FtVerdict",
    "IdealGadget",
    "InvalidArgument",
    "InvalidCircuit",
    "OrderingViolation",
    "ParityCheck",
    "QuantumCode",
    "ResourceLimit",
    "ResourceModel",
    "Stabilizer",
    "UndecodableSubpattern",
    "bch_check",
    "build_gadget",
    "build_table_bruteforce",
    "build_table_majority",
    "connect",
    "decodable",
    "decode_classical",
    "double_data",
    "enumerate_faults",
    "fc_from_circuit",
    "flag_count",
    "hamming_check",
    "majority_decode",
    "min_reps_grid",
    "propagate",
    "report",
    "run_round",
    "search_small",
    "shor_estimate",
    "single_fault_sweep",
    "sort_desc",
    "stack",
    "steane_knill",
    "suffix_xor",
    "unfold",
    "verify_distance",
    "verify_ft",
    "xor",
]
