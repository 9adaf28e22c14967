"""Intercept-and-resend eavesdropping, channel noise and detection thresholds."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

from . import bell, qubit, qutrit
from .protocol import (
    Observation,
    check_protocol,
    stages,
    victory_residual_id,
)
from .qcore import (
    MixedState,
    PureState,
    State,
    apply,
    dephase,
    measure,
    mix,
    outcome_probabilities,
    project,
)

ATTACK_KINDS = ("none", "ir_first_leg", "ir_second_leg", "double_ir", "single_qubit_ir")

P_Q = 11.0 / 2.0 - 3.0 * np.sqrt(3.0)
P_BQ = 5.0 / 8.0


@dataclass(frozen=True)
class AttackPolicy:
    """What Eve does on a round.

    ``p`` is the chance she acts on any given round and ``noise`` is the
    dephasing weight of the channel itself.  ``qubits`` names the single
    qubit of pair A measured on each leg for ``single_qubit_ir``.
    """

    kind: str = "none"
    p: float = 1.0
    noise: float = 0.0
    qubits: tuple[str, str] = ("A0", "A1")

    def __post_init__(self):
        if self.kind not in ATTACK_KINDS:
            raise ValueError(f"attack kind must be one of {ATTACK_KINDS}, got {self.kind!r}")
        for name in ("p", "noise"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        for q in self.qubits:
            if q not in qubit.pair_qubits("A"):
                raise ValueError(f"single-qubit attack must target A0 or A1, got {q!r}")

    def taps(self, protocol: str) -> tuple[tuple[str, ...] | None, tuple[str, ...] | None]:
        """Registers Eve measures on each leg when she acts."""
        channel = ("b",) if protocol == "qutrit" else qubit.pair_qubits("A")
        if self.kind == "none":
            return None, None
        if self.kind == "ir_first_leg":
            return channel, None
        if self.kind == "ir_second_leg":
            return None, channel
        if self.kind == "double_ir":
            return channel, channel
        if protocol != "qubit":
            raise ValueError("single_qubit_ir applies to the qubit protocol only")
        return (self.qubits[0],), (self.qubits[1],)


@dataclass(frozen=True)
class AttackOutcome:
    attacked: int
    eve_observations: tuple[int, ...] = field(default=())
    post_state: PureState | None = None


def intercept_resend(
    s: PureState, targets: str | Sequence[str], rng: np.random.Generator
) -> AttackOutcome:
    """Measure ``targets`` in the computational basis and forward the collapsed state."""
    out, post = measure(s, targets, rng, keep=True)
    return AttackOutcome(1, (out,), post)


def _branches(s: PureState, targets):
    """All nonzero-probability collapses ``(prob, outcome, state)`` of ``targets``."""
    probs = outcome_probabilities(s, targets)
    for k, pk in enumerate(probs):
        if pk > 1e-15:
            _, post = project(s, targets, k, keep=True)
            yield float(pk), k, post


def enumerate_round(protocol: str, k_a: int, k_b: int, k_s: int | None, taps):
    """Exhaustive branch tree of a round under fixed taps.

    Yields ``(prob, observations, residual_id, residual)``.
    """
    st = stages(protocol, k_a, k_b, k_s)
    level = [(1.0, (), st.start)]
    for leg, tap in enumerate(taps, start=1):
        if tap:
            level = [
                (w * pk, obs + (Observation(leg, tuple(tap), k),), post)
                for w, obs, s in level
                for pk, k, post in _branches(s, list(tap))
            ]
        if leg == 1:
            level = [(w, obs, apply(st.remote, s)) for w, obs, s in level]
    for w, obs, s in level:
        s = apply(st.finish, s)
        for pk, k, _ in _branches(s, list(st.victory)):
            _, residual = project(s, list(st.victory), k)
            rid = victory_residual_id(protocol, k_a, k_s, k)
            yield w * pk, obs, rid, residual


def _bit_tuples(protocol: str):
    if protocol == "qutrit":
        return itertools.product((0, 1), repeat=3)
    return ((a, b, None) for a, b in itertools.product((0, 1), repeat=2))


def unattacked_residual(j: int, protocol: str) -> PureState:
    check_protocol(protocol)
    return qutrit.phi(j) if protocol == "qutrit" else qubit.phi_b(j)


@lru_cache(maxsize=None)
def double_ir_residual(j: int, protocol: str) -> MixedState:
    """State left behind when Eve intercepts both legs, conditioned on residual ``j``.

    Built by brute force: every choice of private bits is weighted equally
    and every sequence of Eve's outcomes by its Born probability.
    """
    check_protocol(protocol)
    channel = ("b",) if protocol == "qutrit" else qubit.pair_qubits("A")
    ensemble = []
    for k_a, k_b, k_s in _bit_tuples(protocol):
        for w, _, rid, residual in enumerate_round(
            protocol, k_a, k_b, k_s, (channel, channel)
        ):
            if rid == j:
                ensemble.append((w, residual))
    total = sum(w for w, _ in ensemble)
    if total == 0:
        raise ValueError(f"residual {j} never occurs under a double attack")
    return mix([(w / total, s) for w, s in ensemble])


def attacked_residual(j: int, p: float, protocol: str) -> MixedState:
    """Residual when Eve runs the double attack with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return mix(
        [(1.0 - p, unattacked_residual(j, protocol)), (p, double_ir_residual(j, protocol))]
    )


def attacked_bell(p: float, protocol: str, j: int = 0) -> float:
    return bell.bell_value(protocol, attacked_residual(j, p, protocol), j).abs_value


def threshold_p(protocol: str, xtol: float = 1e-10) -> float:
    """Attack probability at which the Bell value falls to the classical bound."""
    check_protocol(protocol)
    return bisect(
        lambda p: attacked_bell(p, protocol) - bell.LHV_BOUND, 0.0, 1.0, xtol=xtol
    )


def closed_form_threshold(protocol: str) -> float:
    return P_Q if check_protocol(protocol) == "qutrit" else P_BQ


def noise_channel(state: State, w: float) -> MixedState:
    """Partial computational-basis dephasing with weight ``w``."""
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"noise weight must lie in [0, 1], got {w}")
    return mix([(1.0 - w, state), (w, dephase(state))])


# (k_a, k_b, first-leg qubit, second-leg qubit) for the four surviving
# superpositions, keyed by (k_b, k_a)
LAMBDA_CASES = {
    (0, 0): (0, 0, "A0", "A1"),
    (0, 1): (1, 0, "A1", "A0"),
    (1, 0): (0, 1, "A0", "A1"),
    (1, 1): (1, 1, "A1", "A0"),
}


def single_qubit_attack(
    k_a: int,
    k_b: int,
    first: str,
    second: str,
    rng: np.random.Generator | None = None,
    outcomes: tuple[int, int] | None = None,
) -> tuple[tuple[int, int], int, PureState]:
    """Eve measures one qubit of pair A on each leg of a qubit round.

    With ``outcomes`` given, her results are post-selected instead of sampled.
    Returns ``(eve_outcomes, residual_id, residual)``.
    """
    st = stages("qubit", k_a, k_b)
    s = st.start
    seen = []
    for leg, q in enumerate((first, second)):
        if outcomes is None:
            if rng is None:
                raise ValueError("need an rng when outcomes are not post-selected")
            k, s = measure(s, q, rng, keep=True)
        else:
            k = outcomes[leg]
            _, s = project(s, q, k, keep=True)
        seen.append(k)
        if leg == 0:
            s = apply(st.remote, s)
    s = apply(st.finish, s)
    if rng is None:
        probs = outcome_probabilities(s, list(st.victory))
        out = int(np.argmax(probs))
        if probs[out] < 1 - 1e-9:
            raise ValueError("victory outcome is random; pass an rng")
        _, residual = project(s, list(st.victory), out)
    else:
        out, residual = measure(s, list(st.victory), rng)
    return (seen[0], seen[1]), victory_residual_id("qubit", k_a, None, out), residual


def lambda_state(k_b: int, k_a: int) -> PureState:
    """Final state of the surviving single-qubit-attack branch for these strategies."""
    ka, kb, first, second = LAMBDA_CASES[(k_b, k_a)]
    return single_qubit_attack(ka, kb, first, second, outcomes=(0, 0))[2]


def _consistent_digits(protocol: str, obs: Observation) -> set[int]:
    layout_dims = (3,) if protocol == "qutrit" else (2,) * len(obs.registers)
    vals = np.unravel_index(obs.outcome, layout_dims)
    out = set()
    for d in range(3):
        if protocol == "qutrit":
            regs = {"b": d}
        else:
            regs = {"A1": d >> 1, "A0": d & 1}
        if all(regs[r] == int(v) for r, v in zip(obs.registers, vals)):
            out.add(d)
    return out


def infer_strategy(protocol: str, observations: Sequence[Observation]) -> int | None:
    """The remote party's strategy bit if Eve's two observations pin it down."""
    legs = {o.leg: o for o in observations}
    if set(legs) != {1, 2}:
        return None
    before = _consistent_digits(protocol, legs[1])
    after = _consistent_digits(protocol, legs[2])
    fits = [k for k, step in ((0, 1), (1, -1)) if any((d + step) % 3 in after for d in before)]
    return fits[0] if len(fits) == 1 else None


def hypothetical_intercepts(
    protocol: str, k_a: int, k_b: int, k_s: int | None, rng: np.random.Generator
) -> tuple[int, int]:
    """Outcomes Eve would see on each leg, measured on copies so the round is undisturbed."""
    st = stages(protocol, k_a, k_b, k_s)
    channel = list(st.channel)
    first, _ = measure(st.start, channel, rng)
    second, _ = measure(apply(st.remote, st.start), channel, rng)
    return first, second
