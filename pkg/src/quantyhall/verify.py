"""Reproduce every published constant and report expected vs computed."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import unitary_group

from . import adversary, bell, figures, qubit, qutrit
from .qcore import EPS, basis_state
from .session import SessionConfig, run_session

SQRT3 = np.sqrt(3.0)

# Reference Bell operators; "s" = 2/sqrt(3)
REFERENCE_QUTRIT_BELL = {
    0: """
        0 0 0 0 s 0 0 0 2
        0 0 0 0 0 s 0 0 0
        0 0 0 0 0 0 0 0 0
        0 0 0 0 0 0 0 s 0
        s 0 0 0 0 0 0 0 s
        0 s 0 0 0 0 0 0 0
        0 0 0 0 0 0 0 0 0
        0 0 0 s 0 0 0 0 0
        2 0 0 0 s 0 0 0 0""",
    1: """
        0 0 0 0 0 0 0 0 0
        0 0 0 0 0 s 2 0 0
        0 0 0 s 0 0 0 0 0
        0 0 s 0 0 0 0 0 0
        0 0 0 0 0 0 0 0 s
        0 s 0 0 0 0 s 0 0
        0 2 0 0 0 s 0 0 0
        0 0 0 0 0 0 0 0 0
        0 0 0 0 s 0 0 0 0""",
    2: """
        0 0 0 0 s 0 0 0 0
        0 0 0 0 0 0 0 0 0
        0 0 0 s 0 0 0 2 0
        0 0 s 0 0 0 0 s 0
        s 0 0 0 0 0 0 0 0
        0 0 0 0 0 0 s 0 0
        0 0 0 0 0 s 0 0 0
        0 0 2 s 0 0 0 0 0
        0 0 0 0 0 0 0 0 0""",
}

# 8|x><y| + 8|y><x| - 8|u><v| - 8|v><u|
REFERENCE_QUBIT_BELL = {
    0: ("101110", "011001", "100110", "010001"),
    1: ("011010", "000101", "111010", "100101"),
    2: ("110101", "011010", "100101", "001010"),
}

# (k_b, k_a) -> (victory-register terms for switch, for stay); digits o b a
REFERENCE_QUTRIT_ROUNDS = {
    (0, 0): (("001", "012", "020"), ("100", "111", "122")),
    (0, 1): (("100", "111", "122"), ("001", "012", "020")),
    (1, 0): (("200", "211", "222"), ("002", "010", "021")),
    (1, 1): (("001", "012", "020"), ("100", "111", "122")),
}

# (k_b, k_a) -> (O pair, residual terms over B_ns B_s A)
REFERENCE_QUBIT_ROUNDS = {
    (0, 0): ("00", ("001000", "010001", "100110")),
    (0, 1): ("01", ("000101", "011010", "100000")),
    (1, 0): ("10", ("001010", "010000", "100101")),
    (1, 1): ("00", ("001000", "010001", "100110")),
}

REFERENCE_PHI = {0: ("00", "11", "22"), 1: ("01", "12", "20"), 2: ("02", "10", "21")}

REFERENCE_VARRHO_B = {
    0: ("001000", "010001", "100110"),
    1: ("000101", "011010", "100000"),
    2: ("001010", "010000", "100101"),
}

REFERENCE_LAMBDA = {
    (0, 0): ("001000", "010001"),
    (0, 1): ("011010", "100000"),
    (1, 0): ("010000", "100101"),
    (1, 1): ("001000", "100110"),
}


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    expected: object
    computed: object
    passed: bool

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} [{self.criterion:2d}] {self.name}: expected {self.expected}, computed {self.computed}"


def reference_qutrit_bell(j: int) -> np.ndarray:
    rows = REFERENCE_QUTRIT_BELL[j].strip().splitlines()
    return np.array(
        [[2 / SQRT3 if x == "s" else float(x) for x in r.split()] for r in rows]
    )


def reference_qubit_bell(j: int) -> np.ndarray:
    x, y, u, v = (int(b, 2) for b in REFERENCE_QUBIT_BELL[j])
    m = np.zeros((64, 64))
    m[x, y] = m[y, x] = 8
    m[u, v] = m[v, u] = -8
    return m


def _close(criterion, name, expected, computed, tol) -> Check:
    ok = bool(np.isfinite(computed) and abs(computed - expected) <= tol)
    return Check(criterion, name, f"{expected:.12g} (tol {tol:g})", f"{computed:.12g}", ok)


def _flag(criterion, name, ok, detail="") -> Check:
    return Check(criterion, name, "true", f"{bool(ok)}{' ' + detail if detail else ''}", bool(ok))


def _qutrit_ket(digits: tuple[str, ...]):
    terms = [tuple(int(c) for c in t) for t in digits]
    layout = qutrit.GAME if len(terms[0]) == 3 else qutrit.PAIR
    amps = np.zeros(layout.dim)
    for t in terms:
        amps[layout.index(t)] = 1 / np.sqrt(len(terms))
    return amps


def check_bell_maxima() -> list[Check]:
    out = []
    for j in range(3):
        out.append(_flag(1, f"B{j} equals reference matrix",
                         np.allclose(bell.qutrit_bell(j).matrix, reference_qutrit_bell(j), atol=EPS, rtol=0)))
        out.append(_close(1, f"<phi{j}|B{j}|phi{j}>", bell.I3_MAX, bell.i3(qutrit.phi(j), j).value, 1e-9))
    r = bell.i3(qutrit.phi(0), 0).ratio
    out.append(Check(2, "qutrit violation ratio in [1.436, 1.437] and > sqrt(2)",
                     "[1.436, 1.437]", f"{r:.12g}", bool(1.436 <= r <= 1.437 and r > np.sqrt(2))))
    for j in range(3):
        out.append(_flag(3, f"B_b{j} equals reference dyads",
                         np.allclose(bell.qubit_bell(j).matrix, reference_qubit_bell(j), atol=EPS, rtol=0)))
        out.append(_close(3, f"|<phi_b{j}|B_b{j}|phi_b{j}>|", 16 / 3, bell.f6(qubit.phi_b(j), j).abs_value, 1e-9))
    out.append(_close(3, "qubit violation ratio", 8 / 3, bell.f6(qubit.phi_b(0), 0).ratio, 1e-9))
    return out


def check_attack_nulls() -> list[Check]:
    out = []
    for j in range(3):
        rho = adversary.double_ir_residual(j, "qutrit")
        expected = np.diag(_qutrit_ket(REFERENCE_PHI[j]) ** 2)
        out.append(_flag(4, f"brute-force varrho_{j} equals reference", np.allclose(rho.matrix, expected, atol=EPS)))
        out.append(_close(4, f"Tr(varrho_{j} B{j})", 0.0, bell.i3(rho, j).value, 1e-9))
    for j in range(3):
        rho = adversary.double_ir_residual(j, "qubit")
        expected = np.zeros((64, 64))
        for t in REFERENCE_VARRHO_B[j]:
            expected[int(t, 2), int(t, 2)] = 1 / 3
        out.append(_flag(4, f"brute-force varrho_b{j} equals reference", np.allclose(rho.matrix, expected, atol=EPS)))
        out.append(_close(4, f"Tr(varrho_b{j} B_b{j})", 0.0, bell.f6(rho, j).value, 1e-9))
    return out


def check_thresholds() -> list[Check]:
    return [
        _close(5, "p_Q by bisection", 11 / 2 - 3 * SQRT3, adversary.threshold_p("qutrit"), 1e-8),
        _close(5, "p_bQ by bisection", 0.625, adversary.threshold_p("qubit"), 1e-8),
    ]


def check_classical_recovery() -> list[Check]:
    m = qutrit.classical_strategy()
    start = basis_state(qutrit.GAME, (0, 0, 0))
    switch = qutrit.win_probability(qutrit.play(m, m, True, start))
    stay = qutrit.win_probability(qutrit.play(m, m, False, start))
    return [
        _flag(6, "classical strategy is unitary", m.is_unitary()),
        _close(6, "win probability when switching", 2 / 3, switch, 1e-9),
        _close(6, "win probability when staying", 1 / 3, stay, 1e-9),
    ]


def check_enumeration() -> list[Check]:
    rng = np.random.default_rng(0)
    ok_states, ok_keys = True, True
    for k_a, k_b, k_s in itertools.product((0, 1), repeat=3):
        s = qutrit.evolve_round(k_a, k_b, k_s)
        terms = REFERENCE_QUTRIT_ROUNDS[(k_b, k_a)][k_s]
        ok_states &= np.allclose(s.amplitudes, _qutrit_ket(terms), atol=EPS)
        k_r, _ = qutrit.measure_victory(s, rng)
        ok_keys &= (k_b if k_s == k_r else 1 - k_b) == k_a
    ok_bstates, ok_bkeys = True, True
    for k_a, k_b in itertools.product((0, 1), repeat=2):
        s = qubit.evolve_round_b(k_a, k_b)
        o, terms = REFERENCE_QUBIT_ROUNDS[(k_b, k_a)]
        full = [t[:2] + o + t[2:] for t in terms]
        ok_bstates &= s.allclose(qubit.ket(qubit.REGISTER, *full))
        _, _, flip = qubit.measure_O(s, rng)
        ok_bkeys &= (k_b ^ flip) == k_a
    return [
        _flag(7, "8 qutrit rounds reproduce reference states", ok_states),
        _flag(7, "qutrit reconciliation gives k_a = k_b", ok_keys),
        _flag(7, "4 qubit rounds reproduce reference states", ok_bstates),
        _flag(7, "qubit bit-flip rule gives k_a = k_b", ok_bkeys),
    ]


def check_residual_table() -> list[Check]:
    rng = np.random.default_rng(1)
    ok = True
    for k_a, k_b, k_s in itertools.product((0, 1), repeat=3):
        k_r, res = qutrit.measure_victory(qutrit.evolve_round(k_a, k_b, k_s), rng)
        j = qutrit.residual_id(k_a, k_s, k_r)
        ok &= np.allclose(res.amplitudes, _qutrit_ket(REFERENCE_PHI[j]), atol=EPS)
    okb = True
    for k_a, k_b in itertools.product((0, 1), repeat=2):
        o, res, _ = qubit.measure_O(qubit.evolve_round_b(k_a, k_b), rng)
        okb &= res.allclose(qubit.ket(qubit.RESIDUAL, *REFERENCE_VARRHO_B[int(o, 2)]))
    return [
        _flag(8, "qutrit residual selection matches phi table", ok),
        _flag(8, "qubit residual selection matches phi_b table", okb),
    ]


def check_lambda_states() -> list[Check]:
    out = []
    for (k_b, k_a), terms in REFERENCE_LAMBDA.items():
        lam = adversary.lambda_state(k_b, k_a)
        ka, kb, first, second = adversary.LAMBDA_CASES[(k_b, k_a)]
        _, rid, _ = adversary.single_qubit_attack(ka, kb, first, second, outcomes=(0, 0))
        out.append(_flag(9, f"lambda_{k_b}{k_a} reproduced", lam.allclose(qubit.ket(qubit.RESIDUAL, *terms))))
        out.append(_close(9, f"|F6(lambda_{k_b}{k_a})|", 0.0, bell.f6(lam, rid).abs_value, 1e-9))
    return out


def check_ghz_counter_strategy(n: int = 50, seed: int = 2024) -> list[Check]:
    rng = np.random.default_rng(seed)
    g = qutrit.ghz()
    worst = 0.0
    for _ in range(n):
        u = unitary_group.rvs(3, random_state=rng)
        u = u / np.linalg.det(u) ** (1 / 3)
        moved = np.kron(u.conj(), u) @ g.amplitudes
        worst = max(worst, float(np.abs(moved - g.amplitudes).max()))
    return [_close(10, f"max GHZ deviation over {n} random SU(3)", 0.0, worst, 1e-9)]


def check_statistical_session(rounds: int = 100_000, seed: int = 11) -> list[Check]:
    t0 = time.perf_counter()
    result, transcript = run_session(SessionConfig("qutrit", rounds, seed=seed))
    elapsed = time.perf_counter() - t0
    rng = np.random.default_rng(seed + 1)
    counts = np.zeros((2, 3))
    for r in transcript:
        first, second = adversary.hypothetical_intercepts("qutrit", r.k_a, r.k_b, r.k_s, rng)
        counts[0, first] += 1
        counts[1, second] += 1
    sigma = np.sqrt(rounds * (1 / 3) * (2 / 3))
    worst = float(np.abs(counts - rounds / 3).max() / sigma)
    return [
        _flag(11, f"{rounds}-round session keys identical", result.key_alice == result.key_bob),
        Check(11, "leg outcome frequencies within 4 sigma of 1/3", "<= 4 sigma",
              f"{worst:.3f} sigma", worst <= 4.0),
        Check(11, "session runtime", "< 60 s", f"{elapsed:.2f} s", elapsed < 60.0),
    ]


def check_figures() -> list[Check]:
    out = []
    for protocol, intercept in (("qutrit", bell.I3_MAX), ("qubit", bell.F6_MAX)):
        rows, _ = figures.sweep(protocol, 0.0, 1.0, 101)
        p = np.array([r[0] for r in rows])
        v = np.array([r[1] for r in rows])
        dev = float(np.abs(v - intercept * (1 - p)).max())
        out.append(_close(12, f"{protocol} sweep deviation from affine line", 0.0, dev, 1e-9))
        out.append(_close(12, f"{protocol} sweep at p=0", intercept, v[0], 1e-9))
        out.append(_close(12, f"{protocol} sweep at p=1", 0.0, v[-1], 1e-9))
    return out


CHECKS: list[Callable[[], list[Check]]] = [
    check_bell_maxima,
    check_attack_nulls,
    check_thresholds,
    check_classical_recovery,
    check_enumeration,
    check_residual_table,
    check_lambda_states,
    check_ghz_counter_strategy,
    check_statistical_session,
    check_figures,
]


def run_checks(rounds: int = 100_000) -> list[Check]:
    out: list[Check] = []
    for fn in CHECKS:
        try:
            if fn is check_statistical_session:
                out += fn(rounds)
            else:
                out += fn()
        except Exception as exc:  # a broken operator must surface as a failure, not a crash
            out.append(Check(0, fn.__name__, "no error", f"{type(exc).__name__}: {exc}", False))
    return out
