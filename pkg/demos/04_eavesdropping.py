"""
Eve on the channel
==================

Eve measures Alice's qutrit (or pair A) on its way to Bob and again on its
way back. Seeing both shifts reveals Bob's strategy bit, but the measurement
destroys the entanglement the Bell test looks for.
"""

import numpy as np

from quantyhall import adversary, bell

# A double interception leaves a classical mixture; its Bell value is zero.
for protocol in ("qutrit", "qubit"):
    rho = adversary.double_ir_residual(0, protocol)
    print(protocol, "diagonal:", np.round(np.diag(rho.matrix)[np.diag(rho.matrix) > 0], 4))

# Attacking only a fraction p of the rounds lowers the Bell value linearly.
for p in np.linspace(0, 1, 6):
    print(f"p={p:.1f}  I3={adversary.attacked_bell(p, 'qutrit'):.4f}  |F6|={adversary.attacked_bell(p, 'qubit'):.4f}")

# The classical bound 2 is crossed at these attack rates.
print("qutrit threshold", adversary.threshold_p("qutrit"))
print("qubit threshold ", adversary.threshold_p("qubit"))

# Measuring a single qubit of pair A on each leg sometimes leaves a
# superposition, but never one that violates the inequality.
for key in adversary.LAMBDA_CASES:
    ka, kb, first, second = adversary.LAMBDA_CASES[key]
    _, rid, lam = adversary.single_qubit_attack(ka, kb, first, second, outcomes=(0, 0))
    print(f"lambda_{key[0]}{key[1]}: |F6| = {bell.f6(lam, rid).abs_value:.2e}")
