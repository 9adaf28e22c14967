"""Eight-qubit version of the game, each door encoded in a pair of qubits.

Qubits are listed most significant first as ``B_ns1 B_ns0 O1 O0 B_s1 B_s0 A1 A0``;
``X0`` is the low bit of pair ``X``.  Door digits map to pairs as
0 -> 00, 1 -> 01, 2 -> 10; the pattern 11 never occurs on reachable states and
every encoded operator acts trivially on it.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .qcore import (
    Layout,
    Operator,
    PureState,
    apply,
    basis_state,
    embed,
    measure,
    permutation_operator,
    superposition,
)

PAIR_NAMES = ("B_ns", "O", "B_s", "A")


def pair_qubits(pair: str) -> tuple[str, str]:
    if pair not in PAIR_NAMES:
        raise KeyError(f"unknown pair {pair!r}")
    return (f"{pair}1", f"{pair}0")


def _qubits(pairs: Sequence[str]) -> Layout:
    return Layout([(q, 2) for p in pairs for q in pair_qubits(p)])


REGISTER = _qubits(PAIR_NAMES)
RESIDUAL = _qubits(("B_ns", "B_s", "A"))
QUBIT = Layout([("q", 2)])
TWO_QUBITS = Layout([("hi", 2), ("lo", 2)])


class InvalidEncodingError(ValueError):
    pass


class ProtocolViolation(RuntimeError):
    """A measurement returned a pair value that no protocol state can produce."""


def encode(d: int) -> str:
    if d not in (0, 1, 2):
        raise ValueError(f"door digit must be 0, 1 or 2, got {d}")
    return format(d, "02b")


def decode(pair: str) -> int:
    if pair not in ("00", "01", "10"):
        raise InvalidEncodingError(f"pair {pair!r} does not encode a door")
    return int(pair, 2)


def bits_to_state(layout: Layout, bits: str) -> PureState:
    return basis_state(layout, [int(b) for b in bits])


def ket(layout: Layout, *bitstrings: str) -> PureState:
    """Equal-weight superposition of the given bitstrings."""
    return superposition(layout, {tuple(int(b) for b in s): 1.0 for s in bitstrings})


def _pair_values(bits: Sequence[int]) -> list[int]:
    return [2 * bits[i] + bits[i + 1] for i in range(0, len(bits), 2)]


def _pair_bits(values: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for v in values:
        out += [v >> 1, v & 1]
    return tuple(out)


def u3_gate(theta: float, phi: float, lam: float) -> Operator:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    m = np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (lam + phi)) * c],
        ]
    )
    return Operator(QUBIT, m)


HADAMARD = Operator(QUBIT, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
NOT = Operator(QUBIT, np.array([[0, 1], [1, 0]]))

INIT_THETA = 2 * np.arctan(1 / np.sqrt(2))


def controlled(op: Operator, on: int = 1) -> Operator:
    """Two-qubit gate: control is the high qubit, fires when it equals ``on``."""
    proj = np.diag([1.0, 0.0]) if on == 0 else np.diag([0.0, 1.0])
    m = np.kron(proj, op.matrix) + np.kron(np.eye(2) - proj, np.eye(2))
    return Operator(TWO_QUBITS, m)


CNOT = controlled(NOT)


@lru_cache(maxsize=None)
def init_op() -> Operator:
    """Prepare the three-term encoded GHZ state from all-zero qubits.

    U3 splits amplitude 2:1 on ``B_ns1``, a zero-controlled Hadamard
    splits the 2/3 branch over ``B_ns0``, and CNOTs fan both bits out
    to ``B_s`` and ``A``.
    """
    gates = [
        embed(u3_gate(INIT_THETA, 0.0, np.pi), REGISTER, ["B_ns1"]),
        embed(controlled(HADAMARD, on=0), REGISTER, ["B_ns1", "B_ns0"]),
    ]
    for target in ("B_s", "A"):
        for bit in ("1", "0"):
            gates.append(embed(CNOT, REGISTER, ["B_ns" + bit, target + bit]))
    op = Operator(REGISTER, np.eye(REGISTER.dim))
    for g in gates:
        op = g @ op
    return op


def initial_state() -> PureState:
    return bits_to_state(REGISTER, "0" * 8)


def init_state() -> PureState:
    return apply(init_op(), initial_state())


def _door_perm(layout: Layout, rule) -> Operator:
    """Permutation acting on pair values; any 11 pair short-circuits to identity."""

    def mapping(bits):
        vals = _pair_values(bits)
        if 3 in vals:
            return bits
        return _pair_bits(rule(vals))

    return permutation_operator(layout, mapping)


@lru_cache(maxsize=None)
def strategy_op_b(bit: int) -> Operator:
    """Encoded door shift on one pair (4x4); fixes 11."""
    if bit not in (0, 1):
        raise ValueError(f"strategy bit must be 0 or 1, got {bit}")
    step = 1 if bit == 0 else -1
    return _door_perm(TWO_QUBITS, lambda v: [(v[0] + step) % 3])


def _third(x: int, y: int) -> int:
    return 3 - x - y


def _open_rule(v):
    o, bs, a = v
    target = _third(bs, a) if bs != a else (bs + 1) % 3
    return [(o + target) % 3, bs, a]


def _switch_rule(v):
    bns, o, bs = v
    if bns == o:
        return v
    t = _third(bns, o)
    if bs == bns:
        bs = t
    elif bs == t:
        bs = bns
    return [bns, o, bs]


def _victory_rule(v):
    o, bs, a = v
    return [(o + bs + a) % 3, bs, a]


@lru_cache(maxsize=None)
def open_op_b() -> Operator:
    """Encoded door opening on the six qubits ``O B_s A`` (64x64)."""
    return _door_perm(_qubits(("O", "B_s", "A")), _open_rule)


@lru_cache(maxsize=None)
def switch_op_b() -> Operator:
    """Encoded switching on ``B_ns O B_s`` (64x64).

    Reads Bob's unswitched door from ``B_ns`` and swaps ``B_s`` between it
    and the third door, so the operator is an involution.
    """
    return _door_perm(_qubits(("B_ns", "O", "B_s")), _switch_rule)


@lru_cache(maxsize=None)
def victory_op_b() -> Operator:
    """Encoded victory operator on ``O B_s A`` (64x64)."""
    return _door_perm(_qubits(("O", "B_s", "A")), _victory_rule)


@lru_cache(maxsize=None)
def strategy_on(bit: int, pair: str) -> Operator:
    return embed(strategy_op_b(bit), REGISTER, pair_qubits(pair))


@lru_cache(maxsize=None)
def finish_op() -> Operator:
    """Bob's closing sequence: open, switch, victory-encode."""
    o = embed(open_op_b(), REGISTER, _qubits(("O", "B_s", "A")).names)
    s = embed(switch_op_b(), REGISTER, _qubits(("B_ns", "O", "B_s")).names)
    v = embed(victory_op_b(), REGISTER, _qubits(("O", "B_s", "A")).names)
    return v @ s @ o


def bob_strategy(s: PureState, k_b: int) -> PureState:
    s = apply(strategy_on(k_b, "B_ns"), s)
    return apply(strategy_on(k_b, "B_s"), s)


def alice_strategy(s: PureState, k_a: int) -> PureState:
    return apply(strategy_on(k_a, "A"), s)


def evolve_round_b(k_a: int, k_b: int) -> PureState:
    s = bob_strategy(init_state(), k_b)
    s = alice_strategy(s, k_a)
    return apply(finish_op(), s)


def measure_O(s: PureState, rng: np.random.Generator) -> tuple[str, PureState, int]:
    """Measure pair ``O``; returns ``(o_pair, residual, flip)``."""
    k, residual = measure(s, pair_qubits("O"), rng)
    o_pair = format(k, "02b")
    if o_pair == "11":
        raise ProtocolViolation("pair O measured as 11")
    return o_pair, residual, int(o_pair != "00")


PHI_B_TERMS = {
    0: ("001000", "010001", "100110"),
    1: ("000101", "011010", "100000"),
    2: ("001010", "010000", "100101"),
}


def phi_b(j: int) -> PureState:
    """Residual six-qubit state ``j`` over ``B_ns B_s A``."""
    return ket(RESIDUAL, *PHI_B_TERMS[j])
