"""Bid commitment and the digit-by-digit price determination loop.

The pure per-round rules live here as functions; the phase drivers take the
bidders (``{index: Bidder}``) and the :class:`~vickrey_ring.ringnet.Network`
and run one phase to its barrier.  The coordinator only schedules and
re-publishes aggregates anyone could compute from the board.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .field import FieldParams, finv
from .keygen import KeySet
from .ringnet import BrokenRing, IncompleteFamily, Network, aggregate_product

COORDINATOR = "coordinator"


@dataclass(frozen=True)
class OutputPrice:
    bits: tuple[int, ...]

    @property
    def value(self) -> int:
        v = 0
        for b in self.bits:
            v = 2 * v + b
        return v

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass
class RoundState:
    j: int
    B: int
    P: int
    D: int | None = None
    digit: int | None = None
    families: dict[str, dict[int, int]] = dc_field(default_factory=dict)
    sole_flags: dict[int, bool] = dc_field(default_factory=dict)


def sole_check(key: int, B: int) -> bool:
    return key == B


def choose_mask_shares(l: int, j: int, sole: bool, keyset: KeySet, n: int,
                       field: FieldParams, rng: random.Random | None = None,
                       draws: list[int] | None = None) -> list[int]:
    """``d_{i,l,j}`` for ``i = 1..n``; their product is ``F_{l,j}`` when sole,
    else ``C_{l,j}``.  The first ``n - 1`` are uniform in ``[1, p - 1]``."""
    target = keyset.F[j - 1] if sole else keyset.C[j - 1]
    if draws is None:
        draws = [rng.randint(1, field.p - 1) for _ in range(n - 1)]
    shares = [field.elem(x) for x in draws]
    shares.append(field.mul(target, finv(field, field.prod(shares))))
    return shares


def decide_digit(D: int, P: int, n: int, field: FieldParams) -> int:
    return 0 if D == pow(P, n - 2, field.p) else 1


def _barrier(net: Network, tag: str, j, n: int, field: FieldParams) -> int:
    net.drain()
    try:
        return aggregate_product(net.board, tag, j, n, field)
    except IncompleteFamily as exc:
        raise BrokenRing(f"{tag} ring for j={j} did not complete "
                         f"(missing slots {exc.missing})") from exc


def commit_bids(parties: dict, net: Network) -> list[int]:
    """Run the commitment chains; returns the published vector by slot."""
    for party in parties.values():
        party.start_commit()
    n = len(parties)
    field = next(iter(parties.values())).field
    _barrier(net, "commit", None, n, field)
    fam = net.board.family("commit")
    return [fam[i] for i in range(1, n + 1)]


def round_BP(parties: dict, j: int, net: Network) -> tuple[int, int]:
    n = len(parties)
    field = next(iter(parties.values())).field
    for party in parties.values():
        party.start_bp(j)
    B = _barrier(net, "B", j, n, field)
    P = aggregate_product(net.board, "P", j, n, field)
    net.board.append("round", COORDINATOR, "B_agg", B, j=j)
    net.board.append("round", COORDINATOR, "P_agg", P, j=j)
    return B, P


def exchange_masks(parties: dict, j: int, net: Network) -> None:
    """Each bidder runs its sole check, picks mask shares and sends them."""
    for party in parties.values():
        party.after_bp(j)
    net.drain()


def round_D(parties: dict, j: int, net: Network) -> int:
    n = len(parties)
    field = next(iter(parties.values())).field
    for party in parties.values():
        party.start_d(j)
    D = _barrier(net, "D", j, n, field)
    net.board.append("round", COORDINATOR, "D_agg", D, j=j)
    return D


def determine_price(parties: dict, net: Network, k: int,
                    on_round=None) -> tuple[OutputPrice, list[RoundState]]:
    """Digits ``1..k``.  ``on_round(j)``, if given, runs after the B/P
    aggregates are public and before anyone reacts to them."""
    n = len(parties)
    field = next(iter(parties.values())).field
    rounds, bits = [], []
    for j in range(1, k + 1):
        B, P = round_BP(parties, j, net)
        if on_round is not None:
            on_round(j)
        exchange_masks(parties, j, net)
        D = round_D(parties, j, net)
        bit = decide_digit(D, P, n, field)
        net.board.append("round", COORDINATOR, "digit", bit, j=j)
        for party in parties.values():
            party.after_digit(j, bit)
        state = RoundState(j, B, P, D, bit,
                           {t: net.board.family(t, j) for t in ("B", "P", "D")},
                           {i: p.sole[j] for i, p in parties.items()})
        rounds.append(state)
        bits.append(bit)
    return OutputPrice(tuple(bits)), rounds
