"""Per-phase wall-clock timings over a grid of ``(n, k)``.

The simulator runs every bidder in one thread, so a phase's wall time is
the sum of all bidders' work.  ``per_bidder_seconds`` divides by ``n``,
which is what one bidder would wait on with the work spread out.
"""

from __future__ import annotations

import csv
import itertools
import random
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .config import AuctionConfig
from .simulate import PHASES, Simulation

BUS_PHASE = {"price": "round"}


@dataclass
class BenchRow:
    n: int
    k: int
    phase: str
    reps: int
    mean_seconds: float
    per_bidder_seconds: float
    messages: int


def bench(ns, ks, reps: int = 3, seed: int = 0, bits: tuple[int, int] = (31, 32)) -> list[BenchRow]:
    rows = []
    rng = random.Random(seed)
    for n, k in itertools.product(ns, ks):
        totals = dict.fromkeys(PHASES, 0.0)
        sends = dict.fromkeys(PHASES, 0)
        for r in range(reps):
            bids = [rng.randrange(2 ** k) for _ in range(n)]
            cfg = AuctionConfig(n=n, k=k, bids=bids, seed=rng.getrandbits(63), bits=bits)
            sim = Simulation(cfg, record=False)
            res = sim.run()
            for ph in PHASES:
                totals[ph] += res.timings.get(ph, 0.0)
                sends[ph] += sim.net.bus.sends_by_phase.get(BUS_PHASE.get(ph, ph), 0)
        for ph in PHASES:
            mean = totals[ph] / reps
            rows.append(BenchRow(n, k, ph, reps, mean, mean / n, sends[ph] // reps))
    return rows


def write_csv(rows: list[BenchRow], path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(BenchRow.__dataclass_fields__))
        w.writeheader()
        for row in rows:
            w.writerow(asdict(row))


def read_csv(path) -> list[BenchRow]:
    with Path(path).open() as fh:
        return [BenchRow(int(r["n"]), int(r["k"]), r["phase"], int(r["reps"]),
                         float(r["mean_seconds"]), float(r["per_bidder_seconds"]),
                         int(r["messages"])) for r in csv.DictReader(fh)]


def series(rows: list[BenchRow], phase: str, vary: str, **fixed) -> tuple[list[int], list[float]]:
    """``(x, per-bidder seconds)`` for one phase, varying ``n`` or ``k``."""
    pts = sorted((getattr(r, vary), r.per_bidder_seconds) for r in rows
                 if r.phase == phase and all(getattr(r, a) == v for a, v in fixed.items()))
    return [x for x, _ in pts], [y for _, y in pts]


def fit_r2(x, y, degree: int) -> tuple[float, float]:
    """``(R^2, residual sum of squares)`` of a least-squares polynomial fit."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    coef = np.polyfit(x, y, degree)
    resid = float(np.sum((y - np.polyval(coef, x)) ** 2))
    total = float(np.sum((y - y.mean()) ** 2))
    return (1.0 - resid / total if total > 0 else 1.0), resid
