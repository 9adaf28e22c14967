"""Three-door quantum Monty Hall game and the qutrit key-distribution round.

A game state is ``|o b a>``: ``o`` the opened (later: victory) door, ``b``
Bob's chosen door, ``a`` the door hiding Alice's prize.
"""

from __future__ import annotations

from functools import lru_cache

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
    tensor,
)

DOOR = Layout([("door", 3)])
PAIR = Layout([("b", 3), ("a", 3)])
GAME = Layout([("o", 3), ("b", 3), ("a", 3)])

PHI_TERMS = {
    0: ((0, 0), (1, 1), (2, 2)),
    1: ((0, 1), (1, 2), (2, 0)),
    2: ((0, 2), (1, 0), (2, 1)),
}


def _third_door(x: int, y: int) -> int:
    # the unique i with |epsilon_{x y i}| = 1
    return 3 - x - y


@lru_cache(maxsize=None)
def strategy_op(bit: int) -> Operator:
    """Cyclic shift of a door: +1 (mod 3) for bit 0, -1 (mod 3) for bit 1."""
    if bit not in (0, 1):
        raise ValueError(f"strategy bit must be 0 or 1, got {bit}")
    step = 1 if bit == 0 else -1
    return permutation_operator(DOOR, lambda d: ((d[0] + step) % 3,))


def _open(d):
    l, j, k = d
    if j != k:
        return ((_third_door(j, k) + l) % 3, j, k)
    return ((j + l + 1) % 3, j, k)


def _switch(d):
    i, j, k = d
    if i != j:
        return (i, _third_door(i, j), k)
    return d


def _victory(d):
    i, j, k = d
    return ((i + j + k) % 3, j, k)


@lru_cache(maxsize=None)
def open_op() -> Operator:
    """Empty-door opening: writes a door that is neither Bob's nor the prize's."""
    return permutation_operator(GAME, _open)


@lru_cache(maxsize=None)
def switch_op() -> Operator:
    """Door switching: moves Bob to the door that is neither his nor the opened one."""
    return permutation_operator(GAME, _switch)


@lru_cache(maxsize=None)
def victory_op() -> Operator:
    """Victory encoding ``|o b a> -> |(o+b+a) mod 3, b, a>``."""
    return permutation_operator(GAME, _victory)


def switch_mix_op(gamma: float) -> Operator:
    """``cos(gamma) S + sin(gamma) I``; unitary only at the two protocol angles."""
    m = np.cos(gamma) * switch_op().matrix + np.sin(gamma) * np.eye(GAME.dim)
    return Operator(GAME, m)


def ghz() -> PureState:
    return superposition(PAIR, {(j, j): 1.0 for j in range(3)})


def initial_state() -> PureState:
    return tensor(basis_state(Layout([("o", 3)]), (0,)), ghz())


@lru_cache(maxsize=None)
def player_op(bit: int, register: str) -> Operator:
    """Strategy ``bit`` acting on register ``"a"`` or ``"b"`` of the game."""
    return embed(strategy_op(bit), GAME, [register])


def play(
    a_op: Operator,
    b_op: Operator,
    switch: bool,
    start: PureState | None = None,
) -> PureState:
    """Play the game up to the switching stage (no victory encoding)."""
    s = start if start is not None else initial_state()
    s = apply(embed(b_op, GAME, ["b"]) @ embed(a_op, GAME, ["a"]), s)
    s = apply(open_op(), s)
    if switch:
        s = apply(switch_op(), s)
    return s


def evolve_round(k_a: int, k_b: int, k_s: int) -> PureState:
    """Game state after victory encoding for one protocol round.

    ``k_s = 0`` means Alice applies the switching operator, ``k_s = 1`` not.
    """
    if k_s not in (0, 1):
        raise ValueError(f"switch bit must be 0 or 1, got {k_s}")
    s = apply(player_op(k_a, "a"), initial_state())
    s = apply(player_op(k_b, "b"), s)
    s = apply(open_op(), s)
    if k_s == 0:
        s = apply(switch_op(), s)
    return apply(victory_op(), s)


def measure_victory(s: PureState, rng: np.random.Generator) -> tuple[int, PureState]:
    """Measure the victory register; returns ``(k_r, residual over [b, a])``."""
    o, residual = measure(s, "o", rng)
    return (0 if o == 0 else 1), residual


def residual_id(k_a: int, k_s: int, k_r: int) -> int:
    """Which of the three entangled pairs remains, from Alice's view alone."""
    if k_r == 1:
        return 0
    if k_a == 0 and k_s == 1:
        return 2
    return 1


def phi(j: int) -> PureState:
    """Residual two-qutrit state ``j`` over ``[b, a]``."""
    return superposition(PAIR, {t: 1.0 for t in PHI_TERMS[j]})


def win_probability(s: PureState) -> float:
    """Probability that Bob's door holds the prize, summed over the opened door."""
    t = np.abs(s.amplitudes.reshape(3, 3, 3)) ** 2
    return float(sum(t[o, j, j] for o in range(3) for j in range(3)))


def classical_strategy() -> Operator:
    """Door-choice unitary that reproduces the classical 1/3 vs 2/3 odds."""
    r3, r2, r6 = np.sqrt(3.0), np.sqrt(2.0), np.sqrt(6.0)
    m = np.array(
        [
            [1 / r3, 0.0, np.sqrt(2.0 / 3.0)],
            [1 / r3, -1 / r2, -1 / r6],
            [1 / r3, 1 / r2, -1 / r6],
        ]
    )
    return Operator(DOOR, m)
