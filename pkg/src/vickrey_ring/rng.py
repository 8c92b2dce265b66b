"""Named, splittable random streams.

Every consumer asks for its own stream by label (``tree.stream("codes", 3)``)
so adding a draw in one place never shifts the draws of another.  With no
seed the streams come from the OS entropy pool.
"""

from __future__ import annotations

import hashlib
import random


class SeedTree:
    def __init__(self, seed: int | None = None):
        self.seed = seed

    def stream(self, *labels) -> random.Random:
        if self.seed is None:
            return random.SystemRandom()
        key = ":".join([str(self.seed), *map(str, labels)]).encode()
        return random.Random(int.from_bytes(hashlib.sha256(key).digest()[:16], "big"))

    def child(self, *labels) -> "SeedTree":
        if self.seed is None:
            return SeedTree(None)
        key = ":".join([str(self.seed), "child", *map(str, labels)]).encode()
        return SeedTree(int.from_bytes(hashlib.sha256(key).digest()[:8], "big"))
