"""Runs a whole auction in-process: coordinator, bidders, seller, bus."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field as dc_field

from .auction import COORDINATOR, OutputPrice, RoundState, commit_bids, determine_price
from .codes import Bid, generate_codes, share_sum
from .config import AuctionConfig
from .field import FieldParams
from .keygen import KeySet, run_key_generation
from .party import Bidder
from .ringnet import Network
from .rng import SeedTree
from .transcript import Transcript
from .verify import AuctionOutcome, Seller, determine_winner, verify_price

log = logging.getLogger(__name__)

PHASES = ("keygen", "commit", "sharing", "price", "verify", "winner")


@dataclass
class Collision:
    """A round where a public test disagreed with the plaintext truth."""

    j: int
    kind: str  # "sole" or "digit"
    detail: str


@dataclass
class RunResult:
    outcome: AuctionOutcome
    transcript: Transcript
    field: FieldParams
    parties: dict[int, Bidder]
    seller: Seller
    net: Network
    commitments: list[int]
    verification: list[int]
    rounds: list[RoundState]
    timings: dict[str, float] = dc_field(default_factory=dict)
    collisions: list[Collision] = dc_field(default_factory=list)

    @property
    def keysets(self) -> dict[int, KeySet]:
        return {i: p.keyset for i, p in self.parties.items()}


class Simulation:
    def __init__(self, config: AuctionConfig, keep_hop_log: bool = False,
                 record: bool = True):
        self.config = config
        self.tree = SeedTree(config.seed)
        self.field = config.make_field()
        self.transcript = Transcript() if record else None
        self.net = Network(config.n, self.transcript, keep_hop_log=keep_hop_log)
        self.seller = Seller()
        self.net.seller = self.seller
        self.net.attach("seller", self.seller.receive)
        key_tree = SeedTree(config.key_seed) if config.key_seed is not None else self.tree
        self.parties: dict[int, Bidder] = {}
        for l in range(1, config.n + 1):
            if config.codes is not None:
                codes = config.codes[l].canonical(self.field)
            else:
                codes = generate_codes(l, config.n, config.k, self.field,
                                       key_tree.stream("codes", l))
            codes.validate(self.field)
            self.parties[l] = Bidder(
                l, Bid(config.bids[l - 1], config.k), codes, self.field, self.net,
                rng=self.tree.stream("bidder", l), fixtures=config.fixtures_for(l),
                behaviour=config.cheaters.get(l, "honest"),
                drop_tags=config.drop.get(l, frozenset()))
        self.timings: dict[str, float] = {}
        self.collisions: list[Collision] = []

    def _timed(self, phase, fn, *args):
        t0 = time.perf_counter()
        out = fn(*args)
        self.timings[phase] = self.timings.get(phase, 0.0) + time.perf_counter() - t0
        log.info("phase %s done in %.4fs", phase, self.timings[phase])
        return out

    def _share(self):
        for party in self.parties.values():
            party.send_codes()
        self.net.drain()
        for party in self.parties.values():
            party.make_shares()
        self.net.drain()

    def _live(self, j: int) -> list[int]:
        """Bidders whose shares currently encode 1 at digit ``j``."""
        return [l for l, p in self.parties.items()
                if share_sum(p.generated, j, self.field) == p.ind.Y[j - 1]]

    def _diagnose(self, rounds: list[RoundState], live: dict[int, list[int]]) -> None:
        for st in rounds:
            alive = live[st.j]
            truly = alive[0] if len(alive) == 1 else None
            for l, flag in st.sole_flags.items():
                if flag and l != truly:
                    self.collisions.append(Collision(st.j, "sole", f"K_{l} matched B"))
            if st.digit != (1 if len(alive) >= 2 else 0):
                self.collisions.append(Collision(st.j, "digit", f"live bidders {alive}"))

    def _price(self):
        live = {}

        def snapshot(j):
            live[j] = self._live(j)
        price, rounds = determine_price(self.parties, self.net, self.config.k, on_round=snapshot)
        self._diagnose(rounds, live)
        return price, rounds

    # each phase method may be called on its own, in order, by replay tools

    def setup(self) -> None:
        cfg, f = self.config, self.field
        self.net.board.append("setup", COORDINATOR, "params",
                              {"p": f.p, "g": f.g, "n": cfg.n, "k": cfg.k})

    def keygen(self) -> dict[int, str]:
        return self._timed("keygen", run_key_generation, self.parties, self.net)

    def commit(self) -> list[int]:
        self.commitments = self._timed("commit", commit_bids, self.parties, self.net)
        return self.commitments

    def share(self) -> None:
        self._timed("sharing", self._share)

    def determine(self) -> tuple[OutputPrice, list[RoundState]]:
        self.price, self.rounds = self._timed("price", self._price)
        self.net.board.append("price", COORDINATOR, "price",
                              {"bits": str(self.price), "value": self.price.value})
        return self.price, self.rounds

    def verify(self) -> AuctionOutcome:
        accepted, slots, self.verification = self._timed(
            "verify", verify_price, self.parties, self.net, self.price.value, self.commitments)
        self.outcome = AuctionOutcome(self.price.value, self.price.bits, accepted, slots)
        return self.outcome

    def winner(self) -> AuctionOutcome:
        out = self.outcome
        if out.accepted:
            winner, tie, jp, proof, valid = self._timed(
                "winner", determine_winner, self.parties, self.net, self.seller, self.price,
                out.matching_slots, self.tree.stream("tie"), self.field)
            out.winner, out.tie, out.jprime = winner, tie, jp
            out.proof, out.valid_claims = proof, valid
        return out

    def result(self) -> RunResult:
        return RunResult(self.outcome, self.transcript, self.field, self.parties, self.seller,
                         self.net, self.commitments, self.verification, self.rounds,
                         dict(self.timings), self.collisions)

    def run(self) -> RunResult:
        self.setup()
        self.keygen()
        self.commit()
        self.share()
        self.determine()
        self.verify()
        self.winner()
        return self.result()


def simulate(config: AuctionConfig, **kw) -> RunResult:
    return Simulation(config, **kw).run()


def run_auction(config: AuctionConfig) -> tuple[AuctionOutcome, Transcript]:
    res = simulate(config)
    return res.outcome, res.transcript


__all__ = ["Collision", "OutputPrice", "RunResult", "Simulation", "run_auction", "simulate",
           "PHASES"]
