"""Ring transfers, the in-process message bus and the bulletin board.

A ring transfer starts at an origin bidder and visits the other ``n - 1``
bidders once each, forward (``l -> l+1``) or backward (``l -> l-1``); every
visited bidder raises the payload to a secret exponent.  The origin applies
its own exponent when it builds the initial value, so the payload that
leaves the last holder has been transformed ``n`` times.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable

from .field import FieldParams
from .transcript import Transcript

FORWARD = 1
BACKWARD = -1


class BrokenRing(RuntimeError):
    """A transfer did not complete: some bidder failed to forward it."""


class WrongHopCount(RuntimeError):
    pass


class IncompleteFamily(RuntimeError):
    def __init__(self, tag: str, j, missing: list[int]):
        super().__init__(f"{tag} family for j={j} is missing slots {missing}")
        self.tag = tag
        self.j = j
        self.missing = missing


@dataclass(frozen=True)
class RingTopology:
    n: int

    def succ(self, l: int) -> int:
        return l % self.n + 1

    def pred(self, l: int) -> int:
        return (l - 2) % self.n + 1

    def step(self, l: int, direction: int) -> int:
        return self.succ(l) if direction == FORWARD else self.pred(l)

    def path(self, origin: int, direction: int) -> list[int]:
        """The ``n - 1`` non-origin bidders in visiting order."""
        out, cur = [], origin
        for _ in range(self.n - 1):
            cur = self.step(cur, direction)
            out.append(cur)
        return out


@dataclass(frozen=True)
class TransferItem:
    """A value in flight.  ``hop`` counts transforms applied so far."""

    origin: int
    tag: str
    index: tuple
    hop: int
    payload: int
    direction: int

    @property
    def key(self) -> tuple:
        return (self.tag, self.origin, *self.index)


def advance(item: TransferItem, exponent: int, field: FieldParams, n: int) -> TransferItem:
    if not 1 <= item.hop < n:
        raise WrongHopCount(f"{item.key} arrived at hop {item.hop} in a ring of {n}")
    value = pow(item.payload, exponent % field.order, field.p)
    return TransferItem(item.origin, item.tag, item.index, item.hop + 1, value,
                        item.direction)


@dataclass
class Entry:
    id: int
    phase: str
    author: object
    tag: str
    payload: object
    j: int | None = None
    slot: int | None = None


class BulletinBoard:
    """Append-only public log; optionally mirrored into a transcript."""

    def __init__(self, transcript: Transcript | None = None):
        self._entries: list[Entry] = []
        self._by_key: dict[tuple, list[Entry]] = {}
        self.transcript = transcript

    def append(self, phase: str, author, tag: str, payload, j: int | None = None,
               slot: int | None = None) -> int:
        eid = len(self._entries) + 1
        entry = Entry(eid, phase, author, tag, payload, j, slot)
        self._entries.append(entry)
        self._by_key.setdefault((tag, j), []).append(entry)
        if self.transcript is not None:
            self.transcript.record(phase, author, "public", tag, payload, j=j, slot=slot)
        return eid

    @property
    def entries(self) -> tuple[Entry, ...]:
        return tuple(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def find(self, tag: str, j: int | None = None) -> list[Entry]:
        return list(self._by_key.get((tag, j), ()))

    def family(self, tag: str, j: int | None = None) -> dict[int, object]:
        return {e.slot: e.payload for e in self._by_key.get((tag, j), ())}


def aggregate_product(board: BulletinBoard, tag: str, j: int | None, n: int,
                      field: FieldParams) -> int:
    fam = board.family(tag, j)
    missing = [i for i in range(1, n + 1) if i not in fam]
    if missing:
        raise IncompleteFamily(tag, j, missing)
    return field.prod(fam[i] for i in range(1, n + 1))


@dataclass(frozen=True)
class ReturnTo:
    index: int


@dataclass(frozen=True)
class Publish:
    board: BulletinBoard
    phase: str
    tag: str
    j: int | None = None


@dataclass
class TransferResult:
    value: int
    path: list[int]
    entry_id: int | None = None
    delivered_to: int | None = None


def ring_transfer(topology: RingTopology, field: FieldParams, origin: int,
                  initial: int, direction: int,
                  exponent_at: Callable[[int, int], int],
                  terminal: ReturnTo | Publish | None = None,
                  fail_at: int | None = None) -> TransferResult:
    """Run one transfer to completion outside any bus.

    ``exponent_at(holder, hop)`` gives the exponent the holder applies to a
    value that has already been transformed ``hop`` times.  ``fail_at``
    names a bidder that drops the value.
    """
    item = TransferItem(origin, "ring", (), 1, field.elem(initial), direction)
    path = []
    for holder in topology.path(origin, direction):
        if holder == fail_at:
            raise BrokenRing(f"bidder {holder} did not forward the value from {origin}")
        item = advance(item, exponent_at(holder, item.hop), field, topology.n)
        path.append(holder)
    if item.hop != topology.n:
        raise WrongHopCount(f"transfer ended at hop {item.hop}")
    result = TransferResult(item.payload, path)
    if isinstance(terminal, Publish):
        result.entry_id = terminal.board.append(terminal.phase, path[-1], terminal.tag,
                                                item.payload, j=terminal.j, slot=origin)
    elif isinstance(terminal, ReturnTo):
        result.delivered_to = terminal.index
    return result


@dataclass
class Message:
    phase: str
    sender: int
    receiver: object
    tag: str
    body: object
    j: int | None = None


class Bus:
    """Trusted in-process network with global (hence per-edge) FIFO order.

    ``drain`` delivers until the queue is empty, which is the phase barrier.
    Ring hops are remembered in ``hop_log`` so the simulator can check that
    each transfer visited every non-origin bidder exactly once.
    """

    def __init__(self, transcript: Transcript | None = None, keep_hop_log: bool = True):
        self.queue: deque[Message] = deque()
        self.transcript = transcript
        self.keep_hop_log = keep_hop_log
        self.hop_log: dict[tuple, list[int]] = {}
        self.sends_by_phase: dict[str, int] = {}
        self.sends_by_sender: dict[int, int] = {}

    def send(self, phase: str, sender: int, receiver, tag: str, body,
             j: int | None = None) -> None:
        self.sends_by_phase[phase] = self.sends_by_phase.get(phase, 0) + 1
        self.sends_by_sender[sender] = self.sends_by_sender.get(sender, 0) + 1
        if self.transcript is not None:
            extra = {}
            if isinstance(body, TransferItem):
                extra = {"slot": body.origin, "hop": body.hop}
            # only seller-bound messages are public; bidder traffic is sealed
            payload = body if receiver == "seller" else None
            self.transcript.record(phase, sender, receiver, tag, payload, j=j, **extra)
        self.queue.append(Message(phase, sender, receiver, tag, body, j))

    def drain(self, handlers: dict[int, Callable[[Message], None]]) -> int:
        delivered = 0
        while self.queue:
            msg = self.queue.popleft()
            body = msg.body
            if self.keep_hop_log and isinstance(body, TransferItem):
                self.hop_log.setdefault(body.key, []).append(msg.receiver)
            handlers[msg.receiver](msg)
            delivered += 1
        return delivered


class Network:
    """The bus, the board and whoever is listening on them."""

    def __init__(self, n: int, transcript: Transcript | None = None,
                 keep_hop_log: bool = True):
        self.topology = RingTopology(n)
        self.transcript = transcript
        self.bus = Bus(transcript, keep_hop_log=keep_hop_log)
        self.board = BulletinBoard(transcript)
        self.handlers: dict = {}
        self.seller = None

    def attach(self, address, handler: Callable[[Message], None]) -> None:
        self.handlers[address] = handler

    def drain(self) -> int:
        return self.bus.drain(self.handlers)
