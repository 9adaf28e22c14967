"""
The eight-qubit version
=======================

Each door becomes a pair of qubits (0 -> 00, 1 -> 01, 2 -> 10). A short
circuit prepares the encoded GHZ state and the game operators become
permutations of 64 basis states.
"""

import itertools

import numpy as np

from quantyhall import bell, qubit

# The preparation circuit yields three equally weighted terms.
s0 = qubit.init_state()
for n in np.nonzero(np.abs(s0.amplitudes) > 1e-12)[0]:
    print(format(n, "08b"), np.round(s0.amplitudes[n].real, 4))

# No public discussion is needed: Bob reads pair O and flips his bit unless it
# shows 00.
rng = np.random.default_rng(1)
for k_a, k_b in itertools.product((0, 1), repeat=2):
    o_pair, residual, flip = qubit.measure_O(qubit.evolve_round_b(k_a, k_b), rng)
    f6 = bell.f6(residual, int(o_pair, 2))
    print(f"ka={k_a} kb={k_b} -> O={o_pair}  Bob keeps {k_b ^ flip}  |F6|={f6.abs_value:.4f}")
