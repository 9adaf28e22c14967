"""JSON-lines transcripts and JSON session summaries."""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path
from typing import IO, Iterable

from .adversary import AttackPolicy
from .session import RoundTranscript, SessionConfig, SessionResult

# transcript key -> RoundTranscript attribute
FIELDS = {
    "round": "index",
    "ka": "k_a",
    "kb": "k_b",
    "ks": "k_s",
    "kr": "k_r",
    "o_pair": "o_pair",
    "residual": "residual_id",
    "bell": "bell_value",
    "attacked": "eve_attacked",
}
REQUIRED = ("round", "ka", "kb", "residual", "bell", "attacked")


class TranscriptError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def round_to_record(r: RoundTranscript) -> dict:
    rec = {}
    for key, attr in FIELDS.items():
        v = getattr(r, attr)
        if v is not None:
            rec[key] = v
    return rec


def record_to_round(rec: dict) -> RoundTranscript:
    unknown = set(rec) - set(FIELDS)
    if unknown:
        raise ValueError(f"unknown fields {sorted(unknown)}")
    missing = [k for k in REQUIRED if k not in rec]
    if missing:
        raise ValueError(f"missing fields {missing}")
    kwargs = {FIELDS[k]: v for k, v in rec.items()}
    kwargs["bell_value"] = float(kwargs["bell_value"])
    return RoundTranscript(**kwargs)


def write_transcript(rounds: Iterable[RoundTranscript], fp: IO[str]) -> None:
    for r in rounds:
        fp.write(json.dumps(round_to_record(r)) + "\n")


def read_transcript(fp: IO[str]) -> list[RoundTranscript]:
    out = []
    for lineno, line in enumerate(fp, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict):
                raise ValueError("record is not an object")
            out.append(record_to_round(rec))
        except (ValueError, TypeError) as exc:
            raise TranscriptError(lineno, str(exc)) from exc
    return out


def save_transcript(rounds: Iterable[RoundTranscript], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        write_transcript(rounds, fp)


def load_transcript(path: str | Path) -> list[RoundTranscript]:
    with open(path, encoding="utf-8") as fp:
        return read_transcript(fp)


def summary_document(cfg: SessionConfig, result: SessionResult) -> dict:
    return {
        "config": {
            "protocol": cfg.protocol,
            "n_rounds": cfg.n_rounds,
            "chi": cfg.chi,
            "attack": asdict(cfg.attack),
            "seed": cfg.seed,
            "bell_mode": cfg.bell_mode,
            "shots": cfg.shots,
        },
        "result": {
            "key_alice": "".join(map(str, result.key_alice)),
            "key_bob": "".join(map(str, result.key_bob)),
            "mean_bell": result.mean_bell,
            "verdict": result.verdict,
            "eve_known_fraction": result.eve_known_fraction,
        },
    }


def parse_summary(doc: dict) -> tuple[SessionConfig, SessionResult]:
    c, r = doc["config"], doc["result"]
    attack = dict(c["attack"])
    attack["qubits"] = tuple(attack["qubits"])
    cfg = SessionConfig(
        protocol=c["protocol"],
        n_rounds=c["n_rounds"],
        chi=c["chi"],
        attack=AttackPolicy(**attack),
        seed=c["seed"],
        shots=c["shots"],
    )
    result = SessionResult(
        key_alice=tuple(int(b) for b in r["key_alice"]),
        key_bob=tuple(int(b) for b in r["key_bob"]),
        mean_bell=float(r["mean_bell"]),
        verdict=r["verdict"],
        eve_known_fraction=float(r["eve_known_fraction"]),
    )
    return cfg, result


def save_summary(cfg: SessionConfig, result: SessionResult, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(summary_document(cfg, result), fp, indent=2)
        fp.write("\n")


def load_summary(path: str | Path) -> tuple[SessionConfig, SessionResult]:
    with open(path, encoding="utf-8") as fp:
        return parse_summary(json.load(fp))
