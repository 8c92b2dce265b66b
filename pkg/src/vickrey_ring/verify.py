"""Price verification, winner determination and the third-party audit."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .auction import COORDINATOR, OutputPrice, decide_digit
from .field import FieldError, FieldParams, make_field
from .keygen import column_digest, combine_digests
from .ringnet import BrokenRing, IncompleteFamily, Message, Network, aggregate_product
from .transcript import MalformedTranscript, Transcript


class NoZeroDigit(ValueError):
    """Every output bit is 1, so there is no digit to prove sole status at."""


class MultipleValidClaims(RuntimeError):
    """Two bidders proved sole status at the same digit: corrupted run."""


@dataclass
class WinnerProof:
    claimant: int
    j: int
    factors: list[int]  # K_{u,claimant,j} for u = 1..n
    column_digests: list[str]  # one per digit; entry j is recomputed on check

    def commitment(self) -> str:
        digests = list(self.column_digests)
        digests[self.j - 1] = column_digest(self.claimant, self.j, self.factors)
        return combine_digests(self.claimant, digests)

    def to_json(self) -> dict:
        return {"claimant": self.claimant, "j": self.j, "factors": list(self.factors),
                "column_digests": list(self.column_digests)}

    @classmethod
    def from_json(cls, d: dict) -> "WinnerProof":
        return cls(int(d["claimant"]), int(d["j"]), [int(x) for x in d["factors"]],
                   [str(x) for x in d["column_digests"]])


def last_zero_digit(bits) -> int:
    zeros = [j for j, b in enumerate(bits, start=1) if b == 0]
    if not zeros:
        raise NoZeroDigit("all output bits are 1")
    return zeros[-1]


def check_winner_proof(proof: WinnerProof, B_jprime: int, commitment: str | None,
                       field: FieldParams) -> bool:
    if commitment is None or len(proof.column_digests) < proof.j:
        return False
    if proof.commitment() != commitment:
        return False
    try:
        return field.prod(field.elem(x) for x in proof.factors) == B_jprime
    except FieldError:
        return False


class Seller:
    """Passive verifier: stores keygen commitments and winner claims."""

    def __init__(self):
        self.commitments: dict[int, str] = {}
        self.claims: list[WinnerProof] = []

    def receive(self, msg: Message) -> None:
        if msg.tag == "commitment":
            self.commitments[msg.sender] = msg.body
        elif msg.tag == "claim":
            self.claims.append(WinnerProof.from_json(msg.body))
        else:
            raise ValueError(f"seller got unexpected {msg.tag!r}")


def verify_price(parties: dict, net: Network, price: int,
                 commitments: list[int]) -> tuple[bool, list[int], list[int]]:
    """Re-run the commitment chains seeded with ``price`` and compare slot by
    slot.  Returns ``(accepted, matching_slots, vector)``."""
    for party in parties.values():
        party.start_verify(price)
    net.drain()
    n = len(parties)
    fam = net.board.family("verify")
    missing = [i for i in range(1, n + 1) if i not in fam]
    if missing:
        raise BrokenRing(f"verification chains from {missing} did not complete")
    vector = [fam[i] for i in range(1, n + 1)]
    slots = [i for i in range(1, n + 1) if vector[i - 1] == commitments[i - 1]]
    net.board.append("verify", COORDINATOR, "accepted",
                     {"accepted": bool(slots), "slots": slots})
    return bool(slots), slots, vector


def break_tie(matching_slots, valid_claims, rng: random.Random) -> tuple[int, bool]:
    """``(winner, tie)``.  Slot ``i`` maps to bidder ``i``."""
    if len(valid_claims) > 1:
        raise MultipleValidClaims(f"bidders {sorted(valid_claims)} all proved sole status")
    if valid_claims:
        return valid_claims[0], False
    if not matching_slots:
        raise ValueError("no matching slot to draw a winner from")
    return rng.choice(sorted(matching_slots)), True


@dataclass
class AuctionOutcome:
    price: int
    bits: tuple[int, ...]
    accepted: bool
    matching_slots: list[int]
    winner: int | None = None
    tie: bool = False
    jprime: int | None = None
    proof: WinnerProof | None = None
    valid_claims: list[int] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"price": self.price, "bits": "".join(map(str, self.bits)),
                "accepted": self.accepted, "matching_slots": self.matching_slots,
                "winner": self.winner, "tie": self.tie, "jprime": self.jprime,
                "valid_claims": self.valid_claims}


def determine_winner(parties: dict, net: Network, seller: Seller, price: OutputPrice,
                     matching_slots: list[int], rng: random.Random,
                     field: FieldParams) -> tuple[int, bool, int | None, WinnerProof | None, list[int]]:
    """Claim window then tie rule.  Returns ``(winner, tie, j', proof, valid)``."""
    n = len(parties)
    try:
        jp = last_zero_digit(price.bits)
    except NoZeroDigit:
        winner, tie = break_tie(matching_slots, [], rng)
        jp, proof, valid = None, None, []
    else:
        B = aggregate_product(net.board, "B", jp, n, field)
        for party in parties.values():
            party.claim(jp)
        net.drain()
        valid = [pr.claimant for pr in seller.claims
                 if pr.j == jp and check_winner_proof(pr, B, seller.commitments.get(pr.claimant), field)]
        winner, tie = break_tie(matching_slots, valid, rng)
        proof = next((pr for pr in seller.claims if pr.claimant == winner and not tie), None)
    net.board.append("winner", COORDINATOR, "winner", {"winner": winner, "tie": tie})
    return winner, tie, jp, proof, valid


# -- audit ------------------------------------------------------------------

def _int(x):
    return int(x) if x is not None else None


class _Report:
    def __init__(self):
        self.checks: list[dict] = []

    def add(self, name, ok, expected=None, actual=None, j=None):
        rec = {"name": name, "pass": bool(ok), "expected": expected, "actual": actual}
        if j is not None:
            rec["j"] = j
        self.checks.append(rec)
        return ok

    def to_json(self) -> dict:
        ok = all(c["pass"] for c in self.checks)
        return {"checks": self.checks, "verdict": "pass" if ok else "fail"}


def _public_board(transcript: Transcript):
    """``{(tag, j): [records]}`` of public entries, plus seller messages."""
    board, seller = {}, []
    for rec in transcript:
        if rec["receiver"] == "public":
            board.setdefault((rec["tag"], rec.get("j")), []).append(rec)
        elif rec["receiver"] == "seller":
            seller.append(rec)
    return board, seller


def _family(board, tag, j, n, field):
    fam = {}
    for rec in board.get((tag, j), []):
        fam[int(rec["slot"])] = field.elem(int(rec["payload"]))
    missing = [i for i in range(1, n + 1) if i not in fam]
    if missing:
        raise IncompleteFamily(tag, j, missing)
    return fam


def _posted(board, tag, j=None):
    recs = [r for r in board.get((tag, j), []) if r["sender"] == COORDINATOR]
    return recs[-1]["payload"] if recs else None


def audit_transcript(transcript: Transcript) -> dict:
    """Recompute everything public from the transcript.

    Needs no secrets.  Returns ``{checks: [...], verdict}``.
    """
    if not len(transcript):
        raise MalformedTranscript(0, "empty transcript")
    board, seller_msgs = _public_board(transcript)
    rep = _Report()
    params = _posted(board, "params")
    if params is None:
        rep.add("params", False, "params record", None)
        return rep.to_json()
    try:
        field = make_field(int(params["p"]), int(params["g"]))
        n, k = int(params["n"]), int(params["k"])
    except (FieldError, KeyError, TypeError, ValueError) as exc:
        rep.add("params", False, "valid field", str(exc))
        return rep.to_json()
    rep.add("params", True, None, {"p": field.p, "g": field.g, "n": n, "k": k})

    commitments = {int(r["sender"]): r["payload"] for r in seller_msgs if r["tag"] == "commitment"}
    rep.add("seller_commitments", sorted(commitments) == list(range(1, n + 1)),
            list(range(1, n + 1)), sorted(commitments))

    def family(name, tag, j=None):
        try:
            return _family(board, tag, j, n, field)
        except IncompleteFamily as exc:
            rep.add(name, False, list(range(1, n + 1)), f"missing {exc.missing}", j=j)
        except (TypeError, ValueError, FieldError) as exc:
            rep.add(name, False, "group elements", str(exc), j=j)
        return None

    committed = family("commit_family", "commit")
    if committed is not None:
        rep.add("commit_family", True, None, [committed[i] for i in range(1, n + 1)])

    bits, B_values = [], {}
    for j in range(1, k + 1):
        agg = {}
        for tag in ("B", "P", "D"):
            fam = family(f"{tag}_aggregate", tag, j)
            if fam is None:
                continue
            value = field.prod(fam.values())
            posted = _int(_posted(board, f"{tag}_agg", j))
            rep.add(f"{tag}_aggregate", value == posted, value, posted, j=j)
            agg[tag] = value
        B_values[j] = agg.get("B")
        posted_digit = _int(_posted(board, "digit", j))
        if "D" in agg and "P" in agg:
            digit = decide_digit(agg["D"], agg["P"], n, field)
            rep.add("digit_decision", digit == posted_digit, digit, posted_digit, j=j)
        bits.append(posted_digit)

    price = _posted(board, "price")
    expected_bits = "".join(str(b) for b in bits)
    actual_bits = None if price is None else price.get("bits")
    value = int(expected_bits, 2) if None not in bits and bits else None
    rep.add("price_bits", actual_bits == expected_bits and price is not None
            and _int(price.get("value")) == value, expected_bits, actual_bits)

    verified = family("verify_family", "verify")
    slots = []
    if verified is not None and committed is not None:
        slots = [i for i in range(1, n + 1) if verified[i] == committed[i]]
        posted = _posted(board, "accepted")
        posted_slots = None if posted is None else [int(s) for s in posted.get("slots", [])]
        rep.add("acceptance", bool(slots) and posted_slots == slots, slots, posted_slots)

    claims = []
    for r in seller_msgs:
        if r["tag"] != "claim":
            continue
        try:
            claims.append(WinnerProof.from_json(r["payload"]))
        except (KeyError, TypeError, ValueError):
            rep.add("winner_proof", False, "well-formed claim", r["payload"])
    win = _posted(board, "winner")
    winner = None if win is None else _int(win.get("winner"))
    tie = None if win is None else win.get("tie")
    if None in bits or not slots:
        return rep.to_json()
    if 0 in bits:
        jp = last_zero_digit(bits)
        valid = []
        for pr in claims:
            ok = (pr.j == jp and B_values.get(jp) is not None
                  and check_winner_proof(pr, B_values[jp], commitments.get(pr.claimant), field))
            rep.add("winner_proof", ok, B_values.get(jp), pr.claimant, j=jp)
            if ok:
                valid.append(pr.claimant)
        if len(valid) == 1:
            rep.add("winner", winner == valid[0] and not tie, valid[0], winner)
        else:
            rep.add("winner", len(valid) == 0 and bool(tie) and winner in slots,
                    f"tie among {slots}", winner)
    else:
        rep.add("winner", bool(tie) and winner in slots and not claims,
                f"tie among {slots}", winner)
    return rep.to_json()
