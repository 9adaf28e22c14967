"""Command-line front end: ``quantyhall {demo,session,sweep,verify,figures}``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import figures, transcript
from .adversary import AttackPolicy
from .session import SessionConfig, key_hex, run_session
from .verify import run_checks

DEFAULT_CHI = 2.5  # arbitrary hardened bound above the classical limit of 2


def _session_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--protocol", choices=["qutrit", "qubit"], default="qutrit")
    p.add_argument("--rounds", type=int, default=1000)
    p.add_argument("--chi", type=float, default=DEFAULT_CHI,
                   help="accepted Bell value must reach this bound (> 2); default %(default)s")
    p.add_argument("--attack", default="none",
                   choices=["none", "ir-first-leg", "ir-second-leg", "double-ir", "single-qubit-ir"])
    p.add_argument("--p", type=float, default=1.0, help="probability Eve acts on a round")
    p.add_argument("--noise", type=float, default=0.0, help="channel dephasing weight")
    p.add_argument("--qubits", nargs=2, default=["A0", "A1"], metavar=("FIRST", "SECOND"),
                   help="qubits of pair A measured per leg by single-qubit-ir")
    p.add_argument("--shots", type=int, default=None,
                   help="sample the Bell test with this many shots per round (default: exact)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None, help="transcript file (JSON lines)")
    p.add_argument("--summary", type=Path, default=None, help="session summary file (JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quantyhall", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    demo = sub.add_parser("demo", help="16-round unattacked qutrit session")
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--out", type=Path, default=None)

    _session_args(sub.add_parser("session", help="run a key-distribution session"))

    sw = sub.add_parser("sweep", help="Bell value versus attack probability as CSV")
    sw.add_argument("--protocol", choices=["qutrit", "qubit"], default="qutrit")
    sw.add_argument("--p-from", type=float, default=0.0)
    sw.add_argument("--p-to", type=float, default=1.0)
    sw.add_argument("--steps", type=int, default=101)
    sw.add_argument("--out", type=Path, default=None, help="CSV file (default: stdout)")

    ver = sub.add_parser("verify", help="check every published constant")
    ver.add_argument("--rounds", type=int, default=100_000,
                     help="length of the statistical session check")

    fig = sub.add_parser("figures", help="write both sweep CSVs")
    fig.add_argument("--outdir", type=Path, default=Path("."))
    fig.add_argument("--steps", type=int, default=101)
    return parser


def _print_session(cfg: SessionConfig, args) -> int:
    result, rounds = run_session(cfg)
    print(f"protocol      {cfg.protocol}")
    print(f"rounds        {cfg.n_rounds}")
    print(f"attack        {cfg.attack.kind} (p={cfg.attack.p}, noise={cfg.attack.noise})")
    print(f"bell mode     {cfg.bell_mode}")
    print(f"key (Alice)   {key_hex(result.key_alice)}")
    print(f"key (Bob)     {key_hex(result.key_bob)}")
    print(f"keys agree    {result.key_alice == result.key_bob}")
    print(f"mean Bell     {result.mean_bell:.12g}")
    print(f"chi           {cfg.chi}")
    print(f"verdict       {result.verdict}")
    print(f"eve knows     {result.eve_known_fraction:.4f} of raw key")
    if args.out is not None:
        transcript.save_transcript(rounds, args.out)
    if getattr(args, "summary", None) is not None:
        transcript.save_summary(cfg, result, args.summary)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "demo":
        return _print_session(SessionConfig("qutrit", 16, DEFAULT_CHI, seed=args.seed), args)

    if args.command == "session":
        try:
            attack = AttackPolicy(args.attack.replace("-", "_"), args.p, args.noise, tuple(args.qubits))
            cfg = SessionConfig(args.protocol, args.rounds, args.chi, attack, args.seed, args.shots)
        except ValueError as exc:
            parser.error(str(exc))
        return _print_session(cfg, args)

    if args.command == "sweep":
        try:
            rows, crossing = figures.sweep(args.protocol, args.p_from, args.p_to, args.steps)
        except ValueError as exc:
            parser.error(str(exc))
        if args.out is None:
            figures.write_csv(rows, crossing, sys.stdout)
        else:
            with open(args.out, "w", encoding="utf-8") as fp:
                figures.write_csv(rows, crossing, fp)
        return 0

    if args.command == "figures":
        if args.steps < 2:
            parser.error("steps must be at least 2")
        args.outdir.mkdir(parents=True, exist_ok=True)
        for protocol, name in (("qutrit", "i3_vs_p.csv"), ("qubit", "f6_vs_p.csv")):
            rows, crossing = figures.sweep(protocol, 0.0, 1.0, args.steps)
            with open(args.outdir / name, "w", encoding="utf-8") as fp:
                figures.write_csv(rows, crossing, fp)
            print(f"wrote {args.outdir / name} (crossing p={crossing:.12g})")
        return 0

    checks = run_checks(rounds=args.rounds)
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
