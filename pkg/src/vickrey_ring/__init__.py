"""Auctioneer-free private second-price auction over a ring of bidders."""

from .auction import OutputPrice, decide_digit, sole_check
from .codes import Bid, SecretCodes
from .config import AuctionConfig
from .field import FieldParams, finv, fpow, make_field, random_safe_prime
from .oracle import brute_force_oracle
from .simulate import RunResult, Simulation, run_auction, simulate
from .transcript import Transcript
from .verify import AuctionOutcome, WinnerProof, audit_transcript

__all__ = [
    "AuctionConfig", "AuctionOutcome", "Bid", "FieldParams", "OutputPrice", "RunResult",
    "SecretCodes", "Simulation", "Transcript", "WinnerProof", "audit_transcript",
    "brute_force_oracle", "decide_digit", "finv", "fpow", "make_field", "random_safe_prime",
    "run_auction", "simulate", "sole_check",
]
