"""Key values, check keys and fake keys.

Every bidder ``l`` seeds ``3 n k`` ring transfers (one K, F and C value per
target bidder ``i`` and digit ``j``).  K and F travel forward with each hop
raising to ``e_j`` and ``e_j**2``; C travels backward raising to ``e_j**2``.
After ``n`` transforms the value is returned to bidder ``i``, who keeps the
factors ``K_{u,i,j}`` and multiplies them into ``K_{i,j}`` (likewise for F,
C).  The factors are hash-committed to the seller because the winner later
opens one digit column of them.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import prod

from .codes import SecretCodes
from .field import FieldParams


@dataclass
class KeySet:
    owner: int
    K: list[int]
    C: list[int]
    F: list[int]
    factors: list[list[int]]  # factors[u-1][j-1] = K_{u,owner,j}
    commitment: str


def init_key_triplet(codes: SecretCodes, i: int, j: int,
                     field: FieldParams) -> tuple[int, int, int]:
    """Initial ``(K, F, C)`` values bidder ``codes.owner`` sends for target
    ``i`` at digit ``j``."""
    n = codes.n
    col = [codes.a[u][j - 1] for u in range(n)]
    own = col[i - 1]
    rest = sum(col) - own
    e = codes.e[j - 1]
    k0 = field.gpow((own - rest) * e)
    f0 = field.gpow(((2 * n - 3) * own - rest) * e * e)
    c0 = field.gpow((own - rest) * e * e)
    return k0, f0, c0


def closed_form_keys(all_codes: dict[int, SecretCodes],
                     field: FieldParams) -> dict[int, tuple[list[int], list[int], list[int]]]:
    """``{l: (K, C, F)}`` straight from everyone's codes, no ring involved.

    Uses the indicator form: with ``Y_{l,j} = sum_u a_{u,l,j}`` and
    ``E_j = prod_u e_{u,j}``,
    ``K = g^((Y_l - sum_{h!=l} Y_h) E)``, ``C`` the same with ``E**2`` and
    ``F`` with coefficient ``2n - 3`` on ``Y_l`` and ``E**2``.
    """
    n = len(all_codes)
    k = all_codes[1].k
    order = field.order
    Y = {l: [sum(all_codes[u].a[l - 1][j] for u in range(1, n + 1)) % order
             for j in range(k)] for l in range(1, n + 1)}
    E = [prod(all_codes[u].e[j] for u in range(1, n + 1)) % order for j in range(k)]
    out = {}
    for l in range(1, n + 1):
        K, C, F = [], [], []
        for j in range(k):
            rest = sum(Y[h][j] for h in range(1, n + 1) if h != l)
            K.append(field.gpow((Y[l][j] - rest) * E[j]))
            C.append(field.gpow((Y[l][j] - rest) * E[j] * E[j]))
            F.append(field.gpow(((2 * n - 3) * Y[l][j] - rest) * E[j] * E[j]))
        out[l] = (K, C, F)
    return out


def column_lines(owner: int, j: int, column: list[int]) -> str:
    """Canonical text of one digit column: ``owner:u:j:value`` per line."""
    return "".join(f"{owner}:{u}:{j}:{v}\n" for u, v in enumerate(column, start=1))


def column_digest(owner: int, j: int, column: list[int]) -> str:
    return hashlib.sha256(column_lines(owner, j, column).encode()).hexdigest()


def combine_digests(owner: int, digests: list[str]) -> str:
    text = "".join(f"{owner}:{j}:{d}\n" for j, d in enumerate(digests, start=1))
    return hashlib.sha256(text.encode()).hexdigest()


def hash_commit(owner: int, factors: list[list[int]]) -> str:
    """SHA-256 commitment to all ``K_{u,owner,j}``.

    Two levels: one digest per digit column, then a digest over those, so a
    claimant can open a single column and hand over the others' digests.
    """
    k = len(factors[0])
    digests = [column_digest(owner, j, [row[j - 1] for row in factors])
               for j in range(1, k + 1)]
    return combine_digests(owner, digests)


def run_key_generation(parties, net) -> dict[int, str]:
    """Drive the keygen phase over ``net``; returns the seller's commitments."""
    for party in parties.values():
        party.start_keygen()
    net.drain()
    for party in parties.values():
        party.finish_keygen()
    net.drain()
    return dict(net.seller.commitments)
