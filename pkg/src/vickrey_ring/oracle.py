"""Plaintext reference: who should win and what they should pay."""

from __future__ import annotations


def brute_force_oracle(bids) -> tuple[set[int], int]:
    """``(winner set, second price)`` with 1-based winner indices.

    The second price counts multiplicity, so a shared maximum is also the
    price.
    """
    bids = [int(b) for b in bids]
    if len(bids) < 2:
        raise ValueError("need at least two bids")
    top = max(bids)
    winners = {i for i, b in enumerate(bids, start=1) if b == top}
    second = sorted(bids, reverse=True)[1]
    return winners, second
