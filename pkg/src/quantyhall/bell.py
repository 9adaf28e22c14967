"""Bell operators for the two-qutrit and six-qubit residual states."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import qubit, qutrit
from .qcore import Operator, State, expectation

LHV_BOUND = 2.0
SQRT3 = np.sqrt(3.0)
I3_MAX = 4.0 * (3.0 + 2.0 * SQRT3) / 9.0
F6_MAX = 16.0 / 3.0
E91_RATIO = np.sqrt(2.0)


@dataclass(frozen=True)
class BellOperator:
    name: str
    operator: Operator
    lhv_bound: float = LHV_BOUND

    @property
    def matrix(self) -> np.ndarray:
        return self.operator.matrix


@dataclass(frozen=True)
class BellValue:
    value: float
    lhv_bound: float = LHV_BOUND

    @property
    def abs_value(self) -> float:
        return abs(self.value)

    @property
    def ratio(self) -> float:
        return self.abs_value / self.lhv_bound


# Nonzero upper-triangle entries (row, col, weight) of the qutrit operators;
# weight "s" is 2/sqrt(3).  Index is 3*b + a over the residual [b, a].
_QUTRIT_ENTRIES = {
    0: [(0, 4, "s"), (0, 8, 2), (1, 5, "s"), (3, 7, "s"), (4, 8, "s")],
    1: [(1, 5, "s"), (1, 6, 2), (2, 3, "s"), (4, 8, "s"), (5, 6, "s")],
    2: [(0, 4, "s"), (2, 3, "s"), (2, 7, 2), (3, 7, "s"), (5, 6, "s")],
}

# (bra-ket pair, sign) dyads of the qubit operators, each weighted by 8
_QUBIT_DYADS = {
    0: [("101110", "011001", +1), ("100110", "010001", -1)],
    1: [("011010", "000101", +1), ("111010", "100101", -1)],
    2: [("110101", "011010", +1), ("100101", "001010", -1)],
}


@lru_cache(maxsize=None)
def qutrit_bell(j: int) -> BellOperator:
    m = np.zeros((9, 9))
    for r, c, w in _QUTRIT_ENTRIES[j]:
        m[r, c] = m[c, r] = 2.0 / SQRT3 if w == "s" else w
    return BellOperator(f"B{j}", Operator(qutrit.PAIR, m))


@lru_cache(maxsize=None)
def qubit_bell(j: int) -> BellOperator:
    m = np.zeros((64, 64))
    for x, y, sign in _QUBIT_DYADS[j]:
        r, c = int(x, 2), int(y, 2)
        m[r, c] = m[c, r] = 8.0 * sign
    return BellOperator(f"B_b{j}", Operator(qubit.RESIDUAL, m))


def _evaluate(op: BellOperator, state: State, dim: int) -> BellValue:
    if state.layout.dim != dim:
        raise ValueError(f"expected a {dim}-dimensional state, got {state.layout.dim}")
    return BellValue(expectation(op.operator, state), op.lhv_bound)


def i3(state: State, j: int) -> BellValue:
    """Two-qutrit Bell parameter using operator ``B_j``."""
    return _evaluate(qutrit_bell(j), state, 9)


def f6(state: State, j: int) -> BellValue:
    """Six-qubit Bell parameter using operator ``B_bj`` (signed; compare ``abs_value``)."""
    return _evaluate(qubit_bell(j), state, 64)


def bell_value(protocol: str, state: State, j: int) -> BellValue:
    if protocol == "qutrit":
        return i3(state, j)
    if protocol == "qubit":
        return f6(state, j)
    raise ValueError(f"unknown protocol {protocol!r}")


def check_chi(chi: float) -> float:
    if not chi > LHV_BOUND:
        raise ValueError(f"security threshold chi must exceed {LHV_BOUND}, got {chi}")
    return float(chi)


def violation_verdict(value: BellValue | float, chi: float) -> str:
    chi = check_chi(chi)
    v = value.abs_value if isinstance(value, BellValue) else abs(value)
    return "safe" if v >= chi else "compromised"
