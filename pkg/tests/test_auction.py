import random

import pytest
from hypothesis import given, settings, strategies as st

from vickrey_ring.auction import OutputPrice, choose_mask_shares, decide_digit, sole_check
from vickrey_ring.config import AuctionConfig
from vickrey_ring.keygen import KeySet
from vickrey_ring.oracle import brute_force_oracle
from vickrey_ring.simulate import Simulation, simulate

P20 = 1856507  # safe prime, generator 2


def test_commitments_worked_example(appendix_run):
    assert appendix_run.commitments == [681, 528, 718, 32, 9]


def chain_oracle(parties, origin, value, field):
    """Exponent product along the forward chain from ``origin``."""
    n = len(parties)
    exp = value * parties[origin].codes.c[0]
    cur = origin
    for r in range(1, n):
        cur = cur % n + 1
        exp *= parties[cur].codes.c[r]
    return field.gpow(exp)


def test_commitment_chain_closed_form():
    cfg = AuctionConfig(n=3, k=4, bids=[9, 0, 14], p=23, g=5, seed=3)
    res = simulate(cfg)
    for l in (1, 2, 3):
        assert res.commitments[l - 1] == chain_oracle(res.parties, l, cfg.bids[l - 1], res.field)
    assert res.commitments[1] == 1  # bid 0 commits g^0


def test_rounds_worked_example(appendix_run, worked):
    by_j = {st.j: st for st in appendix_run.rounds}
    assert (by_j[1].B, by_j[1].P) == (1621, 675)
    assert (by_j[6].B, by_j[6].P) == (346, 820)
    assert (by_j[8].B, by_j[8].P) == (1843, 567)
    assert [by_j[j].D for j in (3, 6, 7, 4, 5, 8)] == [1211, 305, 592, 1772, 599, 725]
    assert by_j[1].D == 1407
    for want in worked["expected"]["rounds"]:
        st_ = by_j[want["j"]]
        assert (st_.B, st_.P, st_.digit) == (int(want["B"]), int(want["P"]), want["digit"])


def test_sole_check_worked_example(appendix_run):
    ks = appendix_run.keysets
    rounds = {st.j: st for st in appendix_run.rounds}
    assert sole_check(ks[4].K[5], rounds[6].B)
    assert not sole_check(ks[1].K[0], rounds[1].B)
    assert sole_check(ks[4].K[6], rounds[7].B)
    assert {j: [l for l, f in st.sole_flags.items() if f] for j, st in rounds.items()} == \
        {1: [], 2: [], 3: [], 4: [], 5: [], 6: [4], 7: [4], 8: []}


def test_mask_shares_worked_example(appendix_run, worked, F2063):
    ks = appendix_run.keysets
    d46 = [int(x) for x in worked["fixtures"]["masks"]["6"]["4"]]
    got = choose_mask_shares(4, 6, True, ks[4], 5, F2063, draws=d46[:-1])
    assert got == d46 and F2063.prod(got) == 946
    d11 = [int(x) for x in worked["fixtures"]["masks"]["1"]["1"]]
    got = choose_mask_shares(1, 1, False, ks[1], 5, F2063, draws=d11[:-1])
    assert got == d11 and F2063.prod(got) == 849


def test_mask_shares_trivial(F2063):
    ks = KeySet(1, [1], [1], [1], [[1]], "")
    assert choose_mask_shares(1, 1, False, ks, 3, F2063, draws=[1, 1]) == [1, 1, 1]


@given(st.booleans(), st.integers(3, 8), st.integers(0, 2**32))
def test_mask_product_invariant(sole, n, seed):
    from vickrey_ring.field import make_field
    f = make_field(2063, 5)
    ks = KeySet(1, [17], [1234], [777], [[1]], "")
    d = choose_mask_shares(1, 1, sole, ks, n, f, rng=random.Random(seed))
    assert len(d) == n and all(1 <= x < 2063 for x in d)
    assert f.prod(d) == (777 if sole else 1234)


def test_decide_digit_worked_example(F2063):
    assert pow(534, 3, 2063) == 1211
    assert decide_digit(1211, 534, 5, F2063) == 0
    assert decide_digit(1772, 163, 5, F2063) == 1 and pow(163, 3, 2063) == 510
    assert decide_digit(725, 567, 5, F2063) == 1 and pow(567, 3, 2063) == 1709
    assert decide_digit(1, 1, 5, F2063) == 0


def test_output_price(appendix_run):
    assert appendix_run.outcome.bits == (1, 1, 0, 1, 1, 0, 0, 1)
    assert OutputPrice((1, 1, 0, 1, 1, 0, 0, 1)).value == 217
    assert str(OutputPrice((0, 1))) == "01"


def test_all_zero_bids():
    res = simulate(AuctionConfig(n=4, k=5, bids=[0] * 4, p=P20, g=2, seed=1))
    assert res.outcome.price == 0 and res.outcome.accepted
    for st_ in res.rounds:
        assert st_.D == pow(st_.P, 2, P20)


def test_all_zero_round_closed_form():
    # B_j with every bidder at N: g^{(-sum_l Y_l) * prod e}
    from math import prod
    cfg = AuctionConfig(n=3, k=2, bids=[0, 0, 0], p=P20, g=2, seed=5)
    res = simulate(cfg)
    f = res.field
    for j in (1, 2):
        Y = [sum(res.parties[u].codes.a[l - 1][j - 1] for u in res.parties) for l in (1, 2, 3)]
        E = prod(p.codes.e[j - 1] for p in res.parties.values())
        assert res.rounds[j - 1].B == f.gpow(-sum(Y) * E)


@settings(max_examples=25)
@given(st.integers(3, 6), st.integers(4, 8), st.data())
def test_price_matches_oracle(n, k, data):
    bids = data.draw(st.lists(st.integers(0, 2**k - 1), min_size=n, max_size=n))
    seed = data.draw(st.integers(0, 2**32))
    res = simulate(AuctionConfig(n=n, k=k, bids=bids, seed=seed, p=P20, g=2))
    winners, second = brute_force_oracle(bids)
    if res.collisions:
        pytest.skip("statistical collision")
    assert res.outcome.price == second
    assert res.outcome.accepted and res.outcome.winner in winners


@settings(max_examples=20)
@given(st.integers(3, 6), st.integers(2, 7), st.data())
def test_digit_soundness(n, k, data):
    """Digit 1 iff at least two bidders effectively hold a 1 there."""
    bids = data.draw(st.lists(st.integers(0, 2**k - 1), min_size=n, max_size=n))
    sim = Simulation(AuctionConfig(n=n, k=k, bids=bids, seed=data.draw(st.integers(0, 999)),
                                   p=P20, g=2))
    res = sim.run()
    assert res.collisions == []
    # plaintext model: a sole 1-bidder bids 1 from then on, a bidder holding
    # 0 at a 1-digit bids 0 from then on
    eff = {l: [(bids[l - 1] >> (k - j)) & 1 for j in range(1, k + 1)] for l in range(1, n + 1)}
    for j, st_ in enumerate(res.rounds, start=1):
        ones = sorted(l for l in eff if eff[l][j - 1])
        assert st_.digit == (1 if len(ones) >= 2 else 0)
        assert [l for l, f in st_.sole_flags.items() if f] == (ones if len(ones) == 1 else [])
        for l in eff:
            if len(ones) == 1 and l in ones:
                eff[l][j:] = [1] * (k - j)
            if st_.digit == 1 and l not in ones:
                eff[l][j:] = [0] * (k - j)


def test_rerandomization():
    bids = [11, 29, 7, 20]
    a = simulate(AuctionConfig(n=4, k=5, bids=bids, seed=1, p=P20, g=2))
    b = simulate(AuctionConfig(n=4, k=5, bids=bids, seed=2, p=P20, g=2))
    assert a.commitments != b.commitments
    assert [s.B for s in a.rounds] != [s.B for s in b.rounds]
    assert (a.outcome.price, a.outcome.winner) == (b.outcome.price, b.outcome.winner) == (20, 2)


def test_winner_adjustment_at_several_digits(appendix_run):
    assert [a for a in appendix_run.parties[4].adjustments if a[1] == "winner"] == \
        [(6, "winner"), (7, "winner")]
    assert (1, "loser") in appendix_run.parties[2].adjustments
