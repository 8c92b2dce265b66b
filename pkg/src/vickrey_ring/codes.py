"""Per-bidder secret material: codes, indicators, bid shares, adjustments.

Conventions used across the package: bidder indices are 1-based identities
(``owner``, ``origin``, ``sender``), digits ``j`` are 1-based with ``j = 1``
the most significant bit, and array positions are plain 0-based list
indices.  So ``codes.a[i - 1][j - 1]`` holds the code bidder ``owner``
prepared for bidder ``i`` at digit ``j``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .field import FieldParams

MIN_BIDDERS = 3


class TooFewBidders(ValueError):
    pass


class MissingShare(KeyError):
    def __init__(self, sender: int):
        super().__init__(f"no share received from bidder {sender}")
        self.sender = sender


@dataclass(frozen=True)
class Bid:
    value: int
    k: int

    def __post_init__(self):
        if not 0 <= self.value < 2**self.k:
            raise ValueError(f"bid {self.value} does not fit in {self.k} bits")

    @property
    def bits(self) -> list[int]:
        return [(self.value >> (self.k - j)) & 1 for j in range(1, self.k + 1)]

    @classmethod
    def from_bits(cls, bits) -> "Bid":
        value = 0
        for b in bits:
            value = 2 * value + int(b)
        return cls(value, len(bits))


@dataclass
class SecretCodes:
    owner: int
    a: list[list[int]]
    c: list[int]
    e: list[int]

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def k(self) -> int:
        return len(self.e)

    def validate(self, field: FieldParams) -> None:
        n, k = self.n, self.k
        if len(self.a) != n or any(len(row) != k for row in self.a):
            raise ValueError(f"code matrix for bidder {self.owner} is not {n}x{k}")
        for v in (*(x for row in self.a for x in row), *self.c, *self.e):
            if field.exp(v) == 0:
                raise ValueError(f"bidder {self.owner} holds a zero code")

    def canonical(self, field: FieldParams) -> "SecretCodes":
        return SecretCodes(
            self.owner,
            [[field.exp(x) for x in row] for row in self.a],
            [field.exp(x) for x in self.c],
            [field.exp(x) for x in self.e],
        )


def generate_codes(owner: int, n: int, k: int, field: FieldParams,
                   rng: random.Random) -> SecretCodes:
    if n < MIN_BIDDERS:
        raise TooFewBidders(f"need at least {MIN_BIDDERS} bidders, got {n}")
    if k < 1:
        raise ValueError("need at least one bit per bid")
    draw = lambda: rng.randint(1, field.p - 2)  # noqa: E731
    a = [[draw() for _ in range(k)] for _ in range(n)]
    c = [draw() for _ in range(n)]
    e = [draw() for _ in range(k)]
    return SecretCodes(owner, a, c, e)


@dataclass
class Indicators:
    owner: int
    Y: list[int]
    order: int = dc_field(repr=False)

    @property
    def N(self) -> list[int]:
        return [(-y) % self.order for y in self.Y]

    def target(self, bit: int, j: int) -> int:
        """Indicator for digit ``j`` (1-based) encoding ``bit``."""
        y = self.Y[j - 1]
        return y if bit else (-y) % self.order


def compute_indicators(owner: int, received: dict[int, list[int]], n: int,
                       field: FieldParams) -> Indicators:
    """Sum the code columns ``a_{i,owner,.}`` received from every bidder."""
    for i in range(1, n + 1):
        if i not in received:
            raise MissingShare(i)
    k = len(received[1])
    Y = [field.exp(sum(received[i][j] for i in range(1, n + 1))) for j in range(k)]
    return Indicators(owner, Y, field.order)


def make_bid_shares(bid: Bid, ind: Indicators, n: int, field: FieldParams,
                    rng: random.Random | None = None,
                    draws: list[list[int]] | None = None) -> list[list[int]]:
    """Additive shares ``b_{i,owner,j}``, returned as ``shares[i-1][j-1]``.

    Rows ``1..n-1`` are uniform (or taken from ``draws``); row ``n`` closes the
    sum onto ``Y`` or ``N`` according to the bid bit.
    """
    k = bid.k
    if draws is None:
        draws = [[rng.randrange(field.order) for _ in range(k)] for _ in range(n - 1)]
    shares = [[field.exp(x) for x in row] for row in draws]
    closing = []
    for j, bit in enumerate(bid.bits, start=1):
        partial = sum(row[j - 1] for row in shares)
        closing.append(field.exp(ind.target(bit, j) - partial))
    shares.append(closing)
    return shares


def share_sum(shares: list[list[int]], j: int, field: FieldParams) -> int:
    return field.exp(sum(row[j - 1] for row in shares))


def _retarget(shares, owner, ind, j, bit, field):
    out = [list(row) for row in shares]
    own = out[owner - 1]
    for w in range(j + 1, len(own) + 1):
        others = sum(row[w - 1] for i, row in enumerate(out) if i != owner - 1)
        own[w - 1] = field.exp(ind.target(bit, w) - others)
    return out


def adjust_winner(shares: list[list[int]], owner: int, ind: Indicators, j: int,
                  field: FieldParams) -> list[list[int]]:
    """Replace the owner's own share at every digit after ``j`` so that the
    column sums onto ``Y``.  The old own share is excluded from the sum."""
    return _retarget(shares, owner, ind, j, 1, field)


def adjust_loser(shares: list[list[int]], owner: int, ind: Indicators, j: int,
                 field: FieldParams) -> list[list[int]]:
    """As :func:`adjust_winner`, but onto ``N``: bid 0 from here on."""
    return _retarget(shares, owner, ind, j, 0, field)
