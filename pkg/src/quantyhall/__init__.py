"""Exact simulation of the quantum Monty Hall key-distribution protocols."""

from .adversary import AttackPolicy, attacked_residual, double_ir_residual, threshold_p
from .bell import F6_MAX, I3_MAX, LHV_BOUND, f6, i3, violation_verdict
from .session import SessionConfig, SessionResult, run_session

__all__ = [
    "AttackPolicy",
    "F6_MAX",
    "I3_MAX",
    "LHV_BOUND",
    "SessionConfig",
    "SessionResult",
    "attacked_residual",
    "double_ir_residual",
    "f6",
    "i3",
    "run_session",
    "threshold_p",
    "violation_verdict",
]
