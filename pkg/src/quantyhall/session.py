"""Multi-round key distribution with Bell-test verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import bell, qutrit
from .adversary import AttackPolicy, infer_strategy, noise_channel
from .protocol import check_protocol, run_round
from .qcore import PureState, State


@dataclass(frozen=True)
class SessionConfig:
    protocol: str = "qutrit"
    n_rounds: int = 16
    chi: float = 2.5
    attack: AttackPolicy = field(default_factory=AttackPolicy)
    seed: int = 0
    shots: int | None = None  # None: exact Bell expectation per round

    def __post_init__(self):
        check_protocol(self.protocol)
        if self.n_rounds < 1:
            raise ValueError(f"n_rounds must be positive, got {self.n_rounds}")
        bell.check_chi(self.chi)
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots must be positive, got {self.shots}")
        if self.attack.kind == "single_qubit_ir" and self.protocol != "qubit":
            raise ValueError("single_qubit_ir applies to the qubit protocol only")

    @property
    def bell_mode(self) -> str:
        return "exact" if self.shots is None else f"sampled({self.shots})"


@dataclass(frozen=True)
class RoundTranscript:
    index: int
    k_a: int
    k_b: int
    residual_id: int
    bell_value: float
    eve_attacked: int
    k_s: int | None = None
    k_r: int | None = None
    o_pair: str | None = None


@dataclass(frozen=True)
class SessionResult:
    key_alice: tuple[int, ...]
    key_bob: tuple[int, ...]
    mean_bell: float
    verdict: str
    eve_known_fraction: float


def reconcile(k_s: int, k_r: int, k_b: int) -> int:
    """Bob's corrected key bit: unchanged when the public bits agree, negated otherwise."""
    return k_b if k_s == k_r else 1 - k_b


@lru_cache(maxsize=None)
def public_record_ambiguity(k_s: int, k_r: int) -> frozenset[tuple[int, int]]:
    """Every ``(k_a, k_b)`` that could have produced the public pair ``(k_s, k_r)``."""
    rng = np.random.default_rng(0)  # outcomes are deterministic; rng is a formality
    out = set()
    for k_a in (0, 1):
        for k_b in (0, 1):
            kr, _ = qutrit.measure_victory(qutrit.evolve_round(k_a, k_b, k_s), rng)
            if kr == k_r:
                out.add((k_a, k_b))
    return frozenset(out)


@lru_cache(maxsize=None)
def _eigensystem(protocol: str, j: int):
    op = (bell.qutrit_bell if protocol == "qutrit" else bell.qubit_bell)(j)
    return np.linalg.eigh(op.matrix)


def sampled_bell(
    protocol: str, state: State, j: int, shots: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte-Carlo Bell estimate from measurements in the operator's eigenbasis.

    Returns ``(mean, standard_error)``.
    """
    vals, vecs = _eigensystem(protocol, j)
    if isinstance(state, PureState):
        probs = np.abs(vecs.conj().T @ state.amplitudes) ** 2
    else:
        probs = np.einsum("ik,ij,jk->k", vecs.conj(), state.matrix, vecs).real
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    draws = vals[rng.choice(len(vals), size=shots, p=probs)]
    sem = draws.std(ddof=1) / np.sqrt(shots) if shots > 1 else float("nan")
    return float(draws.mean()), float(sem)


def iter_rounds(cfg: SessionConfig) -> Iterator[tuple[RoundTranscript, int, bool]]:
    """Yield ``(transcript, bob_key_bit, eve_knows_bit)`` per round."""
    rng = np.random.default_rng(cfg.seed)
    pol = cfg.attack
    qutrit_mode = cfg.protocol == "qutrit"
    for i in range(cfg.n_rounds):
        k_a = int(rng.integers(2))
        k_b = int(rng.integers(2))
        k_s = int(rng.integers(2)) if qutrit_mode else None
        attacked = pol.kind != "none" and bool(rng.random() < pol.p)
        taps = pol.taps(cfg.protocol) if attacked else (None, None)
        rnd = run_round(cfg.protocol, k_a, k_b, k_s, rng, taps)

        # dephasing commutes with every (permutation) gate after the channel,
        # so channel noise can be applied to the residual directly
        state: State = rnd.residual
        if pol.noise > 0:
            state = noise_channel(state, pol.noise)
        if cfg.shots is None:
            value = bell.bell_value(cfg.protocol, state, rnd.residual_id).abs_value
        else:
            mean, _ = sampled_bell(cfg.protocol, state, rnd.residual_id, cfg.shots, rng)
            value = abs(mean)

        if qutrit_mode:
            k_r = 0 if rnd.outcome == 0 else 1
            bob_bit = reconcile(k_s, k_r, k_b)
            tr = RoundTranscript(i, k_a, k_b, rnd.residual_id, value, int(attacked), k_s=k_s, k_r=k_r)
        else:
            flip = int(rnd.outcome != 0)
            bob_bit = k_b ^ flip
            tr = RoundTranscript(
                i, k_a, k_b, rnd.residual_id, value, int(attacked), o_pair=format(rnd.outcome, "02b")
            )
        knows = attacked and infer_strategy(cfg.protocol, rnd.observations) is not None
        yield tr, bob_bit, knows


def run_session(cfg: SessionConfig) -> tuple[SessionResult, list[RoundTranscript]]:
    rounds: list[RoundTranscript] = []
    key_bob: list[int] = []
    known = 0
    for tr, bit, knows in iter_rounds(cfg):
        rounds.append(tr)
        key_bob.append(bit)
        known += knows
    mean_bell = float(np.mean([r.bell_value for r in rounds]))
    result = SessionResult(
        key_alice=tuple(r.k_a for r in rounds),
        key_bob=tuple(key_bob),
        mean_bell=mean_bell,
        verdict=bell.violation_verdict(mean_bell, cfg.chi),
        eve_known_fraction=known / cfg.n_rounds,
    )
    return result, rounds


def key_hex(bits: tuple[int, ...]) -> str:
    if not bits:
        return ""
    width = (len(bits) + 3) // 4
    return format(int("".join(map(str, bits)), 2), f"0{width}x")
