"""Auction configuration: JSON with field values as decimal strings.

Example::

    {"p": "2063", "g": "5", "n": 5, "k": 8,
     "bids": ["143", "124", "217", "222", "86"], "seed": 7}

``p`` may be ``"random"`` together with ``"bits": [lo, hi]``, in which case a
safe prime in ``[2**lo, 2**hi - 1]`` is drawn from the seed.  Optional keys:
``g``, ``key_seed`` (reuse codes across auctions), ``fixtures`` (explicit
codes, shares and masks for replay), ``cheaters`` (``{index: behaviour}``)
and ``drop`` (``{index: [tags]}``, bidders that stop forwarding).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .codes import MIN_BIDDERS, SecretCodes, TooFewBidders
from .field import FieldParams, make_field, random_safe_prime, smallest_generator
from .party import CHEATS, BidderFixtures
from .rng import SeedTree


class ConfigError(ValueError):
    pass


@dataclass
class AuctionConfig:
    n: int
    k: int
    bids: list[int]
    p: int | str = "random"
    g: int | None = None
    bits: tuple[int, int] = (20, 24)
    seed: int | None = None
    key_seed: int | None = None
    codes: dict[int, SecretCodes] | None = None
    shares: dict[int, list[list[int]]] | None = None
    masks: dict[int, dict[int, list[int]]] | None = None
    cheaters: dict[int, str] = dc_field(default_factory=dict)
    drop: dict[int, frozenset] = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.n < MIN_BIDDERS:
            raise TooFewBidders(f"need at least {MIN_BIDDERS} bidders, got {self.n}")
        if self.k < 1:
            raise ConfigError("k must be positive")
        if len(self.bids) != self.n:
            raise ConfigError(f"{len(self.bids)} bids for {self.n} bidders")
        for b in self.bids:
            if not 0 <= b < 2 ** self.k:
                raise ConfigError(f"bid {b} does not fit in {self.k} bits")
        for i, how in self.cheaters.items():
            if how not in CHEATS or not 1 <= i <= self.n:
                raise ConfigError(f"bad cheater entry {i}: {how}")
        if self.codes is not None:
            if sorted(self.codes) != list(range(1, self.n + 1)):
                raise ConfigError("code fixtures must cover every bidder")
            for c in self.codes.values():
                if c.n != self.n or c.k != self.k or len(c.a) != self.n or \
                        any(len(r) != self.k for r in c.a):
                    raise ConfigError(f"code fixture for bidder {c.owner} has wrong shape")
        for l, m in (self.shares or {}).items():
            if len(m) != self.n or any(len(r) != self.k for r in m):
                raise ConfigError(f"share fixture for bidder {l} is not {self.n}x{self.k}")
        for j, per in (self.masks or {}).items():
            for l, d in per.items():
                if len(d) != self.n:
                    raise ConfigError(f"mask fixture j={j} bidder {l} has {len(d)} entries")

    def make_field(self) -> FieldParams:
        if self.p == "random":
            lo, hi = self.bits
            p, g = random_safe_prime(2 ** lo, 2 ** hi - 1, SeedTree(self.seed).stream("field"))
            return make_field(p, self.g if self.g is not None else g)
        p = int(self.p)
        return make_field(p, self.g if self.g is not None else smallest_generator(p))

    def fixtures_for(self, l: int) -> BidderFixtures:
        masks = None
        if self.masks:
            masks = {j: per[l] for j, per in self.masks.items() if l in per}
        shares = self.shares.get(l) if self.shares else None
        return BidderFixtures(shares=shares, masks=masks)

    # -- (de)serialization ---------------------------------------------

    @classmethod
    def from_dict(cls, d: dict) -> "AuctionConfig":
        try:
            n, k = int(d["n"]), int(d["k"])
            bids = [int(b) for b in d["bids"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"config needs integer n, k and bids ({exc})") from None
        p = d.get("p", "random")
        p = p if p == "random" else int(p)
        fx = d.get("fixtures") or {}
        codes = None
        if "codes" in fx:
            codes = {int(l): SecretCodes(int(l), [[int(x) for x in r] for r in c["a"]],
                                         [int(x) for x in c["c"]], [int(x) for x in c["e"]])
                     for l, c in fx["codes"].items()}
        shares = None
        if "shares" in fx:
            shares = {int(l): [[int(x) for x in r] for r in m] for l, m in fx["shares"].items()}
        masks = None
        if "masks" in fx:
            masks = {int(j): {int(l): [int(x) for x in v] for l, v in per.items()}
                     for j, per in fx["masks"].items()}
        seed = d.get("seed")
        key_seed = d.get("key_seed")
        return cls(
            n=n, k=k, bids=bids, p=p,
            g=int(d["g"]) if d.get("g") is not None else None,
            bits=tuple(int(b) for b in d.get("bits", (20, 24))),
            seed=int(seed) if seed is not None else None,
            key_seed=int(key_seed) if key_seed is not None else None,
            codes=codes, shares=shares, masks=masks,
            cheaters={int(i): str(v) for i, v in (d.get("cheaters") or {}).items()},
            drop={int(i): frozenset(v) for i, v in (d.get("drop") or {}).items()},
        )

    @classmethod
    def load(cls, path) -> "AuctionConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = {"p": self.p if self.p == "random" else str(self.p), "n": self.n, "k": self.k,
             "bids": [str(b) for b in self.bids]}
        if self.p == "random":
            d["bits"] = list(self.bits)
        if self.g is not None:
            d["g"] = str(self.g)
        if self.seed is not None:
            d["seed"] = self.seed
        if self.key_seed is not None:
            d["key_seed"] = self.key_seed
        if self.cheaters:
            d["cheaters"] = {str(i): v for i, v in self.cheaters.items()}
        if self.drop:
            d["drop"] = {str(i): sorted(v) for i, v in self.drop.items()}
        return d
