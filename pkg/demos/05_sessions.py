"""
Full sessions and the accept/reject decision
============================================

A session strings many rounds together, averages the per-round Bell values,
and accepts the key only if the mean reaches the agreed bound chi.
"""

from quantyhall import AttackPolicy, SessionConfig, run_session
from quantyhall.session import key_hex

configs = [
    SessionConfig("qutrit", 64, chi=2.5),
    SessionConfig("qutrit", 64, chi=2.5, attack=AttackPolicy("double_ir", 1.0)),
    SessionConfig("qubit", 64, chi=2.5, attack=AttackPolicy("double_ir", 0.5)),
    SessionConfig("qubit", 64, chi=2.5, attack=AttackPolicy("double_ir", 0.3, noise=0.2)),
]

for cfg in configs:
    result, _ = run_session(cfg)
    print(
        f"{cfg.protocol:6s} {cfg.attack.kind:9s} p={cfg.attack.p:.1f} noise={cfg.attack.noise:.1f}"
        f"  key={key_hex(result.key_alice)}  agree={result.key_alice == result.key_bob}"
        f"  bell={result.mean_bell:.3f}  {result.verdict:11s} eve={result.eve_known_fraction:.2f}"
    )

# Sampling the Bell test with a finite number of shots per round adds noise
# around the exact value.
result, _ = run_session(SessionConfig("qutrit", 16, shots=5000, seed=3))
print(f"sampled mean I3 = {result.mean_bell:.4f}")
