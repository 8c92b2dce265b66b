"""The bidder state machine.

A :class:`Bidder` reacts to bus messages one at a time and is driven
between phases by the coordinator's ``start_*`` / ``after_*`` calls.  All
secret material stays inside the instance; what leaves it goes over the bus
or onto the board.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from .auction import choose_mask_shares, sole_check
from .codes import (Bid, Indicators, MissingShare, SecretCodes, adjust_loser,
                    adjust_winner, compute_indicators, make_bid_shares, share_sum)
from .field import FieldParams
from .keygen import KeySet, column_digest, hash_commit, init_key_triplet
from .ringnet import (BACKWARD, FORWARD, BrokenRing, Message, Network, TransferItem,
                      aggregate_product, advance)
from .verify import WinnerProof

log = logging.getLogger(__name__)

KEY_TAGS = ("K", "F", "C")
ROUND_TAGS = ("B", "P", "D")
CHAIN_TAGS = ("commit", "verify")

# behaviours a scripted bidder may adopt
HONEST = "honest"
INFLATE = "inflate"  # when it should drop out, it adjusts onto Y instead of N
CHEATS = (HONEST, INFLATE)


class FixtureMismatch(AssertionError):
    def __init__(self, quantity: str, expected, actual):
        super().__init__(f"{quantity}: expected {expected}, got {actual}")
        self.quantity = quantity
        self.expected = expected
        self.actual = actual


@dataclass
class BidderFixtures:
    """Injected draws for deterministic replay.

    ``shares`` is the full generated matrix ``b_{i,l,j}`` (row ``n`` is the
    closing share and is checked, not used); ``masks[j]`` is the list of
    ``d_{i,l,j}`` with the same closing convention.
    """

    shares: list[list[int]] | None = None
    masks: dict[int, list[int]] | None = None


class Bidder:
    def __init__(self, index: int, bid: Bid, codes: SecretCodes, field: FieldParams,
                 net: Network, rng: random.Random | None = None,
                 fixtures: BidderFixtures | None = None, behaviour: str = HONEST,
                 drop_tags: frozenset = frozenset()):
        if behaviour not in CHEATS:
            raise ValueError(f"unknown behaviour {behaviour!r}")
        self.l = index
        self.bid = bid
        self.codes = codes
        self.field = field
        self.net = net
        self.n = codes.n
        self.k = codes.k
        self.rng = rng or random.Random()
        self.fixtures = fixtures or BidderFixtures()
        self.behaviour = behaviour
        self.drop_tags = drop_tags
        n, k = self.n, self.k
        self._factors = {t: [[None] * k for _ in range(n)] for t in KEY_TAGS}
        self.keyset: KeySet | None = None
        self.codes_in: dict[int, list[int]] = {}
        self.shares_in: dict[int, list[int]] = {}
        self.masks_in: dict[int, dict[int, int]] = {}
        self.ind: Indicators | None = None
        self.generated: list[list[int]] | None = None
        self.sole: dict[int, bool] = {}
        self.adjustments: list[tuple[int, str]] = []
        net.attach(index, self.receive)

    # -- plumbing -------------------------------------------------------

    def _send(self, phase, receiver, tag, body, j=None):
        self.net.bus.send(phase, self.l, receiver, tag, body, j)

    def _e(self, j: int) -> int:
        return self.codes.e[j - 1]

    def _exponent(self, item: TransferItem) -> int:
        if item.tag in CHAIN_TAGS:
            return self.codes.c[item.hop]
        j = item.index[-1]
        e = self._e(j)
        if item.tag in ("K", "B", "D"):
            return e
        if item.tag in ("F", "C"):
            return e * e
        if item.tag == "P":
            return e ** 3
        raise ValueError(f"no transform for tag {item.tag!r}")

    def _launch(self, phase, tag, index, value, direction, j=None):
        item = TransferItem(self.l, tag, index, 1, value, direction)
        self._send(phase, self.net.topology.step(self.l, direction), tag, item, j)

    def receive(self, msg: Message) -> None:
        body = msg.body
        if isinstance(body, TransferItem):
            self._on_transfer(body, msg)
        elif msg.tag == "keyfactor":
            tag, origin, j, value = body
            self._factors[tag][origin - 1][j - 1] = value
        elif msg.tag == "code":
            self.codes_in[msg.sender] = list(body)
        elif msg.tag == "share":
            self.shares_in[msg.sender] = list(body)
        elif msg.tag == "mask":
            self.masks_in.setdefault(msg.j, {})[msg.sender] = body
        else:
            raise ValueError(f"bidder {self.l} got unexpected {msg.tag!r}")

    def _on_transfer(self, item: TransferItem, msg: Message) -> None:
        if item.tag in self.drop_tags:
            log.debug("bidder %d drops %s", self.l, item.key)
            return
        nxt = advance(item, self._exponent(item), self.field, self.n)
        if nxt.hop < self.n:
            self._send(msg.phase, self.net.topology.step(self.l, item.direction),
                       item.tag, nxt, msg.j)
        elif item.tag in KEY_TAGS:
            target, j = item.index
            body = (item.tag, item.origin, j, nxt.payload)
            if target == self.l:
                self._factors[item.tag][item.origin - 1][j - 1] = nxt.payload
            else:
                self._send(msg.phase, target, "keyfactor", body, msg.j)
        else:
            self.net.board.append(msg.phase, self.l, item.tag, nxt.payload, j=msg.j,
                                  slot=item.origin)

    # -- key generation -------------------------------------------------

    def start_keygen(self) -> None:
        for i in range(1, self.n + 1):
            for j in range(1, self.k + 1):
                k0, f0, c0 = init_key_triplet(self.codes, i, j, self.field)
                self._launch("keygen", "K", (i, j), k0, FORWARD)
                self._launch("keygen", "F", (i, j), f0, FORWARD)
                self._launch("keygen", "C", (i, j), c0, BACKWARD)

    def finish_keygen(self) -> KeySet:
        for tag, table in self._factors.items():
            for u, row in enumerate(table, start=1):
                if None in row:
                    raise BrokenRing(f"bidder {self.l} is missing {tag} factors from {u}")
        f = self.field
        prods = {t: [f.prod(row[j] for row in self._factors[t]) for j in range(self.k)]
                 for t in KEY_TAGS}
        factors = [list(row) for row in self._factors["K"]]
        self.keyset = KeySet(self.l, prods["K"], prods["C"], prods["F"], factors,
                             hash_commit(self.l, factors))
        self._send("keygen", "seller", "commitment", self.keyset.commitment)
        return self.keyset

    # -- commitment and verification chains -----------------------------

    def start_commit(self) -> None:
        v = self.field.gpow(self.bid.value * self.codes.c[0])
        self._launch("commit", "commit", (), v, FORWARD)

    def start_verify(self, price: int) -> None:
        v = self.field.gpow(price * self.codes.c[0])
        self._launch("verify", "verify", (), v, FORWARD)

    # -- bid sharing ----------------------------------------------------

    def send_codes(self) -> None:
        for i in range(1, self.n + 1):
            column = list(self.codes.a[i - 1])
            if i == self.l:
                self.codes_in[i] = column
            else:
                self._send("sharing", i, "code", column)

    def make_shares(self) -> None:
        self.ind = compute_indicators(self.l, self.codes_in, self.n, self.field)
        fixed = self.fixtures.shares
        draws = None if fixed is None else [list(r) for r in fixed[:-1]]
        self.generated = make_bid_shares(self.bid, self.ind, self.n, self.field,
                                         rng=self.rng, draws=draws)
        if fixed is not None:
            want = [self.field.exp(x) for x in fixed[-1]]
            if want != self.generated[-1]:
                raise FixtureMismatch(f"closing shares of bidder {self.l}", want,
                                      self.generated[-1])
        for i in range(1, self.n + 1):
            if i != self.l:
                self._send("sharing", i, "share", list(self.generated[i - 1]))

    def received_sum(self, j: int) -> int:
        """``sum_i b_{l,i,j}``: this bidder's own share plus what it received."""
        total = self.generated[self.l - 1][j - 1]
        for i in range(1, self.n + 1):
            if i == self.l:
                continue
            if i not in self.shares_in:
                raise MissingShare(i)
            total += self.shares_in[i][j - 1]
        return self.field.exp(total)

    # -- price determination --------------------------------------------

    def start_bp(self, j: int) -> None:
        s, e = self.received_sum(j), self._e(j)
        self._launch("round", "B", (j,), self.field.gpow(s * e), FORWARD, j)
        self._launch("round", "P", (j,), self.field.gpow(s * e ** 3), BACKWARD, j)

    def after_bp(self, j: int) -> None:
        board, f = self.net.board, self.field
        B = aggregate_product(board, "B", j, self.n, f)
        sole = sole_check(self.keyset.K[j - 1], B)
        self.sole[j] = sole
        fixed = (self.fixtures.masks or {}).get(j)
        draws = None if fixed is None else list(fixed[:-1])
        d = choose_mask_shares(self.l, j, sole, self.keyset, self.n, f, rng=self.rng,
                               draws=draws)
        if fixed is not None and f.elem(fixed[-1]) != d[-1]:
            raise FixtureMismatch(f"closing mask of bidder {self.l} at j={j}",
                                  fixed[-1], d[-1])
        if sole:
            self.generated = adjust_winner(self.generated, self.l, self.ind, j, f)
            self.adjustments.append((j, "winner"))
        for i in range(1, self.n + 1):
            if i == self.l:
                self.masks_in.setdefault(j, {})[i] = d[i - 1]
            else:
                self._send("round", i, "mask", d[i - 1], j)

    def start_d(self, j: int) -> None:
        got = self.masks_in.get(j, {})
        missing = [i for i in range(1, self.n + 1) if i not in got]
        if missing:
            raise MissingShare(missing[0])
        d0 = self.field.prod(got[i] for i in range(1, self.n + 1))
        self._launch("round", "D", (j,), pow(d0, self._e(j) % self.field.order, self.field.p),
                     FORWARD, j)

    def after_digit(self, j: int, bit: int) -> None:
        if bit != 1 or j >= self.k:
            return
        f = self.field
        if share_sum(self.generated, j, f) != self.ind.N[j - 1]:
            return
        if self.behaviour == INFLATE:
            self.generated = adjust_winner(self.generated, self.l, self.ind, j, f)
            self.adjustments.append((j, "inflate"))
        else:
            self.generated = adjust_loser(self.generated, self.l, self.ind, j, f)
            self.adjustments.append((j, "loser"))

    # -- winner determination -------------------------------------------

    def claim(self, jprime: int) -> WinnerProof | None:
        """Come forward with the key factors at ``jprime`` if this bidder was
        the sole participant there."""
        if not self.sole.get(jprime):
            return None
        proof = self.make_proof(jprime)
        self._send("winner", "seller", "claim", proof.to_json())
        return proof

    def make_proof(self, jprime: int) -> WinnerProof:
        factors = self.keyset.factors
        digests = [column_digest(self.l, j, [row[j - 1] for row in factors])
                   for j in range(1, self.k + 1)]
        return WinnerProof(self.l, jprime, [row[jprime - 1] for row in factors], digests)
