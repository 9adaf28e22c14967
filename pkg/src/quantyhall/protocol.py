"""One protocol round split at its two quantum-channel legs.

Both protocols share the same shape: a prepared state travels to the remote
party (leg 1), the remote party applies a strategy, the system travels back
(leg 2), and the local party finishes and measures the victory register.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import qubit, qutrit
from .qcore import Operator, PureState, apply, identity, measure

PROTOCOLS = ("qutrit", "qubit")


@dataclass(frozen=True)
class RoundStages:
    protocol: str
    start: PureState  # state entering leg 1
    remote: Operator  # strategy applied between the legs
    finish: Operator  # everything after leg 2, before the final measurement
    channel: tuple[str, ...]  # registers that cross the channel
    victory: tuple[str, ...]  # registers measured at the end


def check_protocol(protocol: str) -> str:
    if protocol not in PROTOCOLS:
        raise ValueError(f"protocol must be one of {PROTOCOLS}, got {protocol!r}")
    return protocol


@lru_cache(maxsize=None)
def stages(protocol: str, k_a: int, k_b: int, k_s: int | None = None) -> RoundStages:
    """Round operators for the given private bits (``k_s`` is qutrit-only)."""
    check_protocol(protocol)
    if protocol == "qutrit":
        if k_s not in (0, 1):
            raise ValueError("qutrit rounds need a switch bit k_s of 0 or 1")
        start = apply(qutrit.player_op(k_a, "a"), qutrit.initial_state())
        sw = qutrit.switch_op() if k_s == 0 else identity(qutrit.GAME)
        finish = qutrit.victory_op() @ sw @ qutrit.open_op()
        return RoundStages(
            protocol, start, qutrit.player_op(k_b, "b"), finish, ("b",), ("o",)
        )
    start = qubit.bob_strategy(qubit.init_state(), k_b)
    return RoundStages(
        protocol,
        start,
        qubit.strategy_on(k_a, "A"),
        qubit.finish_op(),
        qubit.pair_qubits("A"),
        qubit.pair_qubits("O"),
    )


def victory_residual_id(protocol: str, k_a: int, k_s: int | None, outcome: int) -> int:
    """Name of the residual state from what the measuring party knows."""
    if protocol == "qutrit":
        return qutrit.residual_id(k_a, k_s, 0 if outcome == 0 else 1)
    if outcome == 3:
        raise qubit.ProtocolViolation("pair O measured as 11")
    return outcome


@dataclass(frozen=True)
class Observation:
    leg: int
    registers: tuple[str, ...]
    outcome: int


@dataclass(frozen=True)
class RoundOutcome:
    protocol: str
    outcome: int  # raw victory-register value (o digit, or O pair value)
    residual_id: int
    residual: PureState
    observations: tuple[Observation, ...] = field(default=())


def run_round(
    protocol: str,
    k_a: int,
    k_b: int,
    k_s: int | None,
    rng: np.random.Generator,
    taps: Sequence[Sequence[str] | None] = (None, None),
) -> RoundOutcome:
    """Simulate a round; ``taps[i]`` lists registers Eve measures on leg ``i+1``."""
    st = stages(protocol, k_a, k_b, k_s)
    s = st.start
    obs = []
    for leg, tap in enumerate(taps, start=1):
        if tap:
            out, s = measure(s, list(tap), rng, keep=True)
            obs.append(Observation(leg, tuple(tap), out))
        if leg == 1:
            s = apply(st.remote, s)
    s = apply(st.finish, s)
    out, residual = measure(s, list(st.victory), rng)
    rid = victory_residual_id(protocol, k_a, k_s, out)
    return RoundOutcome(protocol, out, rid, residual, tuple(obs))
