"""
Classical Monty Hall odds from the quantum game
===============================================

The quantized game reduces to the familiar puzzle when both players use a
fixed real unitary and the game starts from a plain basis state.
"""

import numpy as np

from quantyhall import qutrit
from quantyhall.qcore import basis_state

# The door-choice unitary spreads amplitude evenly over the three doors.
m = qutrit.classical_strategy()
print(np.round(m.matrix.real, 4))

# Start with every register on door 0 and let both players use it.
start = basis_state(qutrit.GAME, (0, 0, 0))

# Switching wins two times in three; staying wins one time in three.
for switch in (True, False):
    p = qutrit.win_probability(qutrit.play(m, m, switch, start))
    print(f"{'switch' if switch else 'stay  '}: P(win) = {p:.6f}")
