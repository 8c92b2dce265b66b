import random

import pytest
from hypothesis import given, strategies as st

from vickrey_ring.codes import (Bid, MissingShare, SecretCodes, TooFewBidders,
                                adjust_loser, adjust_winner, compute_indicators,
                                generate_codes, make_bid_shares, share_sum)
from vickrey_ring.field import make_field

F7 = make_field(7, 3)
F23 = make_field(23, 5)


def worked_codes(worked, field):
    out = {}
    for l, c in worked["fixtures"]["codes"].items():
        out[int(l)] = SecretCodes(int(l), [[int(x) for x in r] for r in c["a"]],
                                  [int(x) for x in c["c"]], [int(x) for x in c["e"]]).canonical(field)
    return out


def received_columns(codes, l):
    return {i: list(codes[i].a[l - 1]) for i in codes}


def worked_shares(worked, l):
    return [[int(x) for x in r] for r in worked["fixtures"]["shares"][str(l)]]


def test_bid_bits():
    assert Bid(217, 8).bits == [1, 1, 0, 1, 1, 0, 0, 1]
    assert Bid.from_bits([1, 1, 0, 1, 1, 0, 0, 1]).value == 217
    with pytest.raises(ValueError):
        Bid(256, 8)


@given(st.integers(1, 16).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, 2**k - 1))))
def test_bid_roundtrip(kv):
    k, v = kv
    bits = Bid(v, k).bits
    assert sum(b << (k - j) for j, b in enumerate(bits, start=1)) == v
    assert Bid.from_bits(bits) == Bid(v, k)


def test_generate_codes_shapes():
    c = generate_codes(1, 3, 1, F7, random.Random(0))
    assert len(c.a) == 3 and all(len(r) == 1 for r in c.a) and len(c.c) == 3 and len(c.e) == 1
    assert all(1 <= x <= 5 for x in (*c.a[0], *c.a[1], *c.a[2], *c.c, *c.e))
    c.validate(F7)


def test_too_few_bidders():
    with pytest.raises(TooFewBidders):
        generate_codes(1, 2, 8, F23, random.Random(0))


def test_validate_rejects_zero_code():
    c = SecretCodes(1, [[1], [2], [2061]], [1, 2, 3], [4])
    make = make_field(2063, 5)
    with pytest.raises(ValueError):
        SecretCodes(1, [[1], [2], [2062 * 2]], [1, 2, 3], [4]).validate(make)
    c.validate(make)


def test_indicators_worked_example(worked, F2063):
    codes = worked_codes(worked, F2063)
    ind1 = compute_indicators(1, received_columns(codes, 1), 5, F2063)
    assert ind1.Y[0] == 5870 % 2062
    ind4 = compute_indicators(4, received_columns(codes, 4), 5, F2063)
    assert ind4.Y[7] == 4519 % 2062
    assert ind4.N[7] == -4519 % 2062


def test_indicators_missing_share(F2063):
    with pytest.raises(MissingShare) as exc:
        compute_indicators(1, {1: [1], 2: [1]}, 3, F2063)
    assert exc.value.sender == 3


def test_make_bid_shares_worked_example(worked, F2063):
    codes = worked_codes(worked, F2063)
    for l, bid in ((4, 222), (1, 143)):
        ind = compute_indicators(l, received_columns(codes, l), 5, F2063)
        fixed = worked_shares(worked, l)
        shares = make_bid_shares(Bid(bid, 8), ind, 5, F2063, draws=fixed[:-1])
        assert shares[-1] == [F2063.exp(x) for x in fixed[-1]]
    # bidder 4, digit 8: [1334, 1514, 1313, 1977, -10657] sums to N_{4,8}
    assert [r[7] for r in worked_shares(worked, 4)] == [1334, 1514, 1313, 1977, -10657]
    assert sum([1334, 1514, 1313, 1977, -10657]) == -4519
    assert sum([1050, 1779, 1431, 258, 1352]) % 2062 == 5870 % 2062


def test_adjust_winner_worked_example(worked, F2063):
    codes = worked_codes(worked, F2063)
    ind = compute_indicators(4, received_columns(codes, 4), 5, F2063)
    shares = [[F2063.exp(x) for x in r] for r in worked_shares(worked, 4)]
    out = adjust_winner(shares, 4, ind, 6, F2063)
    assert out[3][7] == 11015 % 2062
    assert out[3][6] == 1759  # digit 7 already sums to Y
    assert out[3][:6] == shares[3][:6]
    assert adjust_winner(out, 4, ind, 6, F2063) == out


def test_adjust_loser_worked_example(worked, F2063):
    codes = worked_codes(worked, F2063)
    ind = compute_indicators(2, received_columns(codes, 2), 5, F2063)
    shares = [[F2063.exp(x) for x in r] for r in worked_shares(worked, 2)]
    out = adjust_loser(shares, 2, ind, 1, F2063)
    want = [221, -12019, -11114, -6646, -9702, -11688, 866, 1801]
    assert out[1] == [F2063.exp(x) for x in want]
    assert adjust_loser(out, 2, ind, 1, F2063) == out


@st.composite
def sharing_setup(draw):
    n = draw(st.integers(3, 6))
    k = draw(st.integers(1, 8))
    seed = draw(st.integers(0, 2**32))
    rng = random.Random(seed)
    codes = {l: generate_codes(l, n, k, F23, rng) for l in range(1, n + 1)}
    l = draw(st.integers(1, n))
    ind = compute_indicators(l, {i: codes[i].a[l - 1] for i in codes}, n, F23)
    bid = Bid(draw(st.integers(0, 2**k - 1)), k)
    return n, k, l, ind, bid, rng


@given(sharing_setup())
def test_share_sum_law(setup):
    n, k, l, ind, bid, rng = setup
    shares = make_bid_shares(bid, ind, n, F23, rng=rng)
    for j, bit in enumerate(bid.bits, start=1):
        assert share_sum(shares, j, F23) == ind.target(bit, j)


@given(sharing_setup(), st.integers(0, 8), st.booleans())
def test_adjustment_correctness(setup, j, winner):
    n, k, l, ind, bid, rng = setup
    j = min(j, k)
    shares = make_bid_shares(bid, ind, n, F23, rng=rng)
    fn = adjust_winner if winner else adjust_loser
    out = fn(shares, l, ind, j, F23)
    for w in range(1, k + 1):
        want = ind.target(int(winner), w) if w > j else ind.target(bid.bits[w - 1], w)
        assert share_sum(out, w, F23) == want
    assert fn(out, l, ind, j, F23) == out
    # only the owner's row changes
    assert [r for i, r in enumerate(out) if i != l - 1] == \
           [r for i, r in enumerate(shares) if i != l - 1]


def test_all_zero_bidder_unchanged_by_loser_adjustment():
    rng = random.Random(4)
    codes = {l: generate_codes(l, 3, 4, F23, rng) for l in (1, 2, 3)}
    ind = compute_indicators(2, {i: codes[i].a[1] for i in codes}, 3, F23)
    shares = make_bid_shares(Bid(0, 4), ind, 3, F23, rng=rng)
    assert adjust_loser(shares, 2, ind, 1, F23) == shares


def test_uniformity_smoke():
    rng = random.Random(9)
    codes = {l: generate_codes(l, 4, 3, F23, rng) for l in range(1, 5)}
    ind = compute_indicators(1, {i: codes[i].a[0] for i in codes}, 4, F23)
    seen = [set() for _ in range(3)]
    for _ in range(50):
        shares = make_bid_shares(Bid(5, 3), ind, 4, F23, rng=rng)
        for i in range(3):
            seen[i].add(shares[i][0])
    assert all(len(s) >= 2 for s in seen)
