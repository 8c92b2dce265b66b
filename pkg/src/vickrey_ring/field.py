"""Prime-field and exponent-ring arithmetic.

Group elements are plain ints in ``[1, p-1]`` validated against a
:class:`FieldParams`; exponents live in the ring of integers mod ``p-1`` and
are canonicalised to ``[0, p-2]`` so that signed representatives compare
equal.  Nothing here is constant-time: this is simulation-grade arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

# Above this bound primality switches from trial division to Miller-Rabin.
TRIAL_DIVISION_LIMIT = 2**32
MILLER_RABIN_ROUNDS = 40


class FieldError(ValueError):
    """Base class for invalid field parameters or elements."""


class NotPrime(FieldError):
    pass


class NotSafePrime(FieldError):
    pass


class NotGenerator(FieldError):
    pass


class ZeroElement(FieldError):
    pass


class RangeExhausted(FieldError):
    pass


class ContextMismatch(FieldError):
    pass


def _trial_division(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5):
        if n % d == 0:
            return n == d
    # wheel over residues coprime to 30
    d, steps = 7, (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d * d <= n:
        if n % d == 0:
            return False
        d += steps[i]
        i = (i + 1) & 7
    return True


def _miller_rabin(n: int, rounds: int) -> bool:
    if n % 2 == 0:
        return n == 2
    s, d = 0, n - 1
    while d % 2 == 0:
        s += 1
        d //= 2
    # bases are seeded by n so the answer is reproducible
    rng = random.Random(n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Deterministic below 2**32, Miller-Rabin (40 rounds) above."""
    if n < TRIAL_DIVISION_LIMIT:
        return _trial_division(n)
    for d in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % d == 0:
            return False
    return _miller_rabin(n, MILLER_RABIN_ROUNDS)


def is_safe_prime(p: int) -> bool:
    return p > 4 and p % 2 == 1 and is_prime((p - 1) // 2) and is_prime(p)


@dataclass(frozen=True)
class FieldParams:
    """A safe prime ``p = 2q + 1`` and a generator ``g`` of order ``p - 1``.

    Build instances with :func:`make_field`; the constructor itself does not
    validate.
    """

    p: int
    g: int

    @property
    def q(self) -> int:
        return (self.p - 1) // 2

    @property
    def order(self) -> int:
        """Modulus of the exponent ring."""
        return self.p - 1

    def exp(self, z: int) -> int:
        """Canonical exponent residue of ``z`` in ``[0, p-2]``."""
        return z % (self.p - 1)

    def elem(self, x: int) -> int:
        """Validate ``x`` as a group element and return it."""
        if x % self.p == 0:
            raise ZeroElement(f"{x} is zero mod {self.p}")
        if not 0 < x < self.p:
            raise ContextMismatch(f"{x} is not reduced mod {self.p}")
        return x

    def gpow(self, e: int) -> int:
        """``g ** e`` with the exponent reduced mod ``p - 1``."""
        return pow(self.g, e % (self.p - 1), self.p)

    def mul(self, *xs: int) -> int:
        acc = 1
        for x in xs:
            acc = acc * x % self.p
        return acc

    def prod(self, xs) -> int:
        acc = 1
        for x in xs:
            acc = acc * x % self.p
        return acc

    def to_json(self) -> dict:
        return {"p": str(self.p), "g": str(self.g)}


def make_field(p: int, g: int) -> FieldParams:
    if p < 7:
        raise NotPrime(f"modulus {p} is below the minimum of 7")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    q = (p - 1) // 2
    if not is_prime(q):
        raise NotSafePrime(f"{p} is prime but (p-1)/2 = {q} is not")
    if not 2 <= g <= p - 2:
        raise NotGenerator(f"generator {g} outside [2, {p - 2}]")
    if pow(g, 2, p) == 1 or pow(g, q, p) == 1:
        raise NotGenerator(f"{g} does not generate the full group mod {p}")
    return FieldParams(p, g)


def smallest_generator(p: int) -> int:
    q = (p - 1) // 2
    for g in range(2, p - 1):
        if pow(g, 2, p) != 1 and pow(g, q, p) != 1:
            return g
    raise NotGenerator(f"no generator found mod {p}")


def fpow(field: FieldParams, base: int, exp: int) -> int:
    """``base ** exp mod p``; the exponent is reduced mod ``p - 1`` first."""
    if not 0 < base < field.p:
        raise ContextMismatch(f"base {base} is not an element of F_{field.p}")
    return pow(base, exp % (field.p - 1), field.p)


def finv(field: FieldParams, x: int) -> int:
    """Multiplicative inverse by the extended Euclidean algorithm."""
    x %= field.p
    if x == 0:
        raise ZeroElement("zero has no inverse")
    old_r, r = x, field.p
    old_s, s = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
    return old_s % field.p


def random_safe_prime(lo: int, hi: int, rng: random.Random) -> tuple[int, int]:
    """Pick a safe prime in ``[lo, hi]`` (inclusive) and its smallest generator.

    The scan starts at a random offset and wraps, so every safe prime in
    range is reachable and an empty range is detected.
    """
    if lo >= hi:
        raise ValueError("need lo < hi")
    lo = max(lo, 7)
    if lo > hi:
        raise RangeExhausted(f"no safe prime in [{lo}, {hi}]")
    span = hi - lo + 1
    start = rng.randrange(span)
    for off in range(span):
        cand = lo + (start + off) % span
        # safe primes > 7 are 11 mod 12
        if cand != 7 and cand % 12 != 11:
            continue
        if is_safe_prime(cand):
            return cand, smallest_generator(cand)
    raise RangeExhausted(f"no safe prime in [{lo}, {hi}]")
