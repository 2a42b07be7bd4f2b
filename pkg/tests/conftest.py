import os
import sys

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

import pytest

from flagcodes.f2core import BitMatrix
from flagcodes.gadget import DataOp, FlagCircuit, Stabilizer

# two flags bracketing ten serial CNOTs on one syndrome qubit
W5_FLAG1 = (4, 9)
W5_FLAG2 = (0, 2, 7)
W5_DATA = (1, 3, 5, 6, 8)
# flag bits (FLAG1 = bit 0, FLAG2 = bit 1) -> data slots X1, X2, ...
W5_RULES = {0b00: 0, 0b10: 0b001, 0b01: 0, 0b11: 0b111}


def w5_circuit() -> FlagCircuit:
    rows = [sum(1 << j for j in W5_FLAG1), sum(1 << j for j in W5_FLAG2), sum(1 << j for j in W5_DATA)]
    ops = tuple(DataOp(col, q, "X") for q, col in enumerate(W5_DATA))
    return FlagCircuit(BitMatrix(3, 10, tuple(rows)), ops, Stabilizer.all_x(5), require_even=False)


def three_flag_circuit() -> FlagCircuit:
    rows = [0b0010001, 0b1000100, 0b0101010]
    ops = tuple(DataOp(col, q, "X") for q, col in enumerate((1, 3, 5)))
    return FlagCircuit(BitMatrix(3, 7, tuple(rows)), ops, Stabilizer.all_x(3))


@pytest.fixture
def w5():
    return w5_circuit()


@pytest.fixture
def three_flag():
    return three_flag_circuit()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
