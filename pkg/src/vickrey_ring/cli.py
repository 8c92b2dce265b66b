"""Command line: ``vickrey-ring run|verify|demo|bench``.

Exit codes for ``run``: 0 price accepted, 1 price rejected, 2 protocol
violation (broken ring, conflicting claims, bad fixtures or config).
``verify`` exits 0 when every audit check passes, 1 otherwise, 2 when the
transcript cannot be parsed.  ``AUCTION_LOG`` sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .bench import bench, write_csv
from .codes import MissingShare, TooFewBidders
from .config import AuctionConfig, ConfigError
from .field import FieldError
from .party import FixtureMismatch
from .ringnet import BrokenRing, IncompleteFamily, WrongHopCount
from .simulate import simulate
from .transcript import MalformedTranscript, Transcript
from .verify import MultipleValidClaims, audit_transcript

PROTOCOL_ERRORS = (BrokenRing, IncompleteFamily, WrongHopCount, MissingShare,
                   MultipleValidClaims, FixtureMismatch)
CONFIG_ERRORS = (ConfigError, TooFewBidders, FieldError, OSError)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def cmd_run(args) -> int:
    try:
        cfg = AuctionConfig.load(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        res = simulate(cfg)
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PROTOCOL_ERRORS as exc:
        print(f"protocol violation: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.transcript:
        res.transcript.write(args.transcript)
    print(json.dumps(res.outcome.to_json(), indent=2))
    return 0 if res.outcome.accepted else 1


def cmd_verify(args) -> int:
    try:
        report = audit_transcript(Transcript.load(args.transcript))
    except (MalformedTranscript, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2)
    if args.report:
        Path(args.report).write_text(text + "\n")
    print(text)
    return 0 if report["verdict"] == "pass" else 1


def cmd_demo(args) -> int:
    from .replay import replay_appendix

    try:
        rep = replay_appendix()
    except FixtureMismatch as exc:
        print(f"FAIL {exc}")
        return 1
    for name in rep["checked"]:
        print(f"ok   {name}")
    out = rep["result"].outcome
    print(f"price {out.price} ({''.join(map(str, out.bits))}), winner {out.winner}")
    return 0


def cmd_bench(args) -> int:
    from .plotting import plot_bench

    rows = bench(args.n, args.k, reps=args.reps, seed=args.seed)
    out = Path(args.out)
    write_csv(rows, out)
    png = plot_bench(rows, out.with_suffix(".png"))
    print(out.read_text(), end="")
    print(f"wrote {out} and {png}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vickrey-ring", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one auction from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--transcript", help="write the JSON-lines transcript here")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="audit a transcript without secrets")
    p.add_argument("--transcript", required=True)
    p.add_argument("--report", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="replay the bundled worked example")
    p.add_argument("--appendix", action="store_true", required=True)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("bench", help="time each phase over an (n, k) grid")
    p.add_argument("--n", type=_int_list, required=True, help="e.g. 4,6,8")
    p.add_argument("--k", type=_int_list, required=True, help="e.g. 4,8,16")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="CSV path; the PNG goes next to it")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    level = os.environ.get("AUCTION_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
