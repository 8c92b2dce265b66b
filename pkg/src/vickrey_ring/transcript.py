"""Append-only JSON-lines log of every send and publish.

Records are dicts with the keys ``seq, phase, sender, receiver, tag,
payload`` plus optional ``j``, ``slot`` and ``hop``.  Field values are
decimal strings so they survive any JSON reader.  Point-to-point traffic
between bidders is logged with ``payload: null``: the bus is assumed to be a
private channel, and its contents (codes, shares, returned key factors)
would otherwise hand every secret to the auditor.
"""

from __future__ import annotations

import json
from pathlib import Path

REQUIRED_KEYS = ("seq", "phase", "sender", "receiver", "tag", "payload")


class MalformedTranscript(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


def _encode(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {str(key): _encode(v) for key, v in value.items()}
    return value


class Transcript:
    def __init__(self, records: list[dict] | None = None):
        self.records: list[dict] = records if records is not None else []

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def record(self, phase: str, sender, receiver, tag: str, payload=None,
               j: int | None = None, **extra) -> int:
        seq = len(self.records) + 1
        rec = {"seq": seq, "phase": phase, "sender": sender, "receiver": receiver,
               "tag": tag, "payload": _encode(payload)}
        if j is not None:
            rec["j"] = j
        for key, value in extra.items():
            if value is not None:
                rec[key] = value
        self.records.append(rec)
        return seq

    def public(self) -> list[dict]:
        return [r for r in self.records if r["receiver"] in ("public", "seller")]

    def to_jsonl(self) -> str:
        out = []
        for r in self.records:
            clean = {key: v for key, v in r.items() if not key.startswith("_")}
            out.append(json.dumps(clean, sort_keys=True, separators=(",", ":")) + "\n")
        return "".join(out)

    def write(self, path) -> None:
        Path(path).write_text(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> "Transcript":
        records = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedTranscript(lineno, f"invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict):
                raise MalformedTranscript(lineno, "record is not an object")
            missing = [key for key in REQUIRED_KEYS if key not in rec]
            if missing:
                raise MalformedTranscript(lineno, f"missing keys {missing}")
            rec["_line"] = lineno
            records.append(rec)
        if not records:
            raise MalformedTranscript(0, "empty transcript")
        return cls(records)

    @classmethod
    def load(cls, path) -> "Transcript":
        return cls.from_jsonl(Path(path).read_text())
