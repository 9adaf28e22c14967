"""Bell parameter versus attack probability, as CSV."""

from __future__ import annotations

from typing import IO

import numpy as np

from .adversary import attacked_bell, threshold_p
from .protocol import check_protocol


def sweep(
    protocol: str, p_from: float = 0.0, p_to: float = 1.0, steps: int = 101
) -> tuple[list[tuple[float, float]], float | None]:
    """Exact ``(p, |Bell|)`` rows on a uniform grid plus the crossing of the classical bound.

    The crossing is ``None`` when it falls outside ``[p_from, p_to]``.
    """
    check_protocol(protocol)
    if not (0.0 <= p_from <= p_to <= 1.0):
        raise ValueError(f"need 0 <= p_from <= p_to <= 1, got {p_from}, {p_to}")
    if steps < 2:
        raise ValueError(f"steps must be at least 2, got {steps}")
    rows = [(float(p), attacked_bell(float(p), protocol)) for p in np.linspace(p_from, p_to, steps)]
    crossing = threshold_p(protocol)
    if not p_from <= crossing <= p_to:
        crossing = None
    return rows, crossing


def write_csv(rows, crossing: float | None, fp: IO[str]) -> None:
    fp.write("p,bell\n")
    for p, v in rows:
        fp.write(f"{p:.15g},{v:.15g}\n")
    if crossing is not None:
        fp.write(f"# crossing p={crossing:.15g} bell=2\n")


def read_csv(fp: IO[str]) -> list[tuple[float, float]]:
    lines = [ln for ln in fp.read().splitlines() if ln and not ln.startswith("#")]
    if not lines or lines[0] != "p,bell":
        raise ValueError("expected header 'p,bell'")
    return [tuple(float(x) for x in ln.split(",")) for ln in lines[1:]]
