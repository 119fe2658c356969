"""Generators: determinism, exact profiles, and Chernoff-justified frequency checks.

Fixed seeds make every statistical check deterministic.  Thresholds are chosen
so that the probability of failure for a fresh seed is below 1e-6 by the
binomial Chernoff bound 2 exp(-2 d^2 n).
"""
import bisect
import itertools
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fringesort.core import InputSequence, Profile, ValidationError, uniform, normalize_distribution
from fringesort.inputgen import (
    DegeneracyParams,
    SplitMix64,
    is_profile_degenerate,
    mix64,
    profile_of,
    random_distribution,
    sample_iid,
    sample_iid_array,
    shuffle_multiset,
    trial_seed,
)


def test_splitmix_reference_vector():
    # first outputs of SplitMix64 seeded with 0, as published with the algorithm
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]


def test_block_matches_scalar():
    a, b = SplitMix64(12345), SplitMix64(12345)
    block = a.u64_block(1000)
    assert [int(x) for x in block] == [b.next_u64() for _ in range(1000)]
    assert a.state == b.state
    assert a.random() == b.random()


def test_seed_validation():
    with pytest.raises(ValidationError):
        SplitMix64(-1)
    with pytest.raises(ValidationError):
        SplitMix64(2**64)


def test_trial_seed_distinct():
    seeds = {trial_seed(7, i) for i in range(10000)}
    assert len(seeds) == 10000
    assert trial_seed(7, 3) == mix64(7 ^ ((4 * 0x9E3779B97F4A7C15) & (2**64 - 1)))


def test_bounded_is_in_range():
    rng = SplitMix64(4)
    vals = [rng.bounded(7) for _ in range(7000)]
    assert min(vals) == 0 and max(vals) == 6
    # each cell ~ Bin(7000, 1/7); |freq - 1/7| <= 0.03 fails w.p. < 2 exp(-12.6)
    for c in Counter(vals).values():
        assert abs(c / 7000 - 1 / 7) <= 0.03


def test_sample_iid_degenerate():
    assert sample_iid(normalize_distribution([3.0]), 5, 9).values == (1, 1, 1, 1, 1)


def test_sample_iid_frequency_half():
    seq = sample_iid(normalize_distribution([1, 1]), 10**5, 1)
    # Chernoff: P(|f - 1/2| >= 0.01) <= 2 exp(-20) ~ 4e-9
    assert abs(seq.values.count(1) / 10**5 - 0.5) <= 0.01


def test_sample_iid_mean():
    seq = sample_iid(normalize_distribution([0.25, 0.75]), 10**5, 2)
    assert abs(sum(seq.values) / 10**5 - 1.75) <= 0.01


@pytest.mark.parametrize("u", [1, 2, 5, 16, 64])
def test_sample_iid_profile_converges(u):
    q = random_distribution(u, 100 + u)
    x = profile_of(sample_iid(q, 10**5, 7 + u), u)
    # per value 2 exp(-2 * 0.02^2 * 1e5) = 2 exp(-80)
    assert max(abs(c / 10**5 - w) for c, w in zip(x.counts, q.weights)) <= 0.02


def test_sample_iid_deterministic():
    q = random_distribution(10, 3)
    assert sample_iid(q, 500, 42).values == sample_iid(q, 500, 42).values
    assert sample_iid(q, 500, 42).values != sample_iid(q, 500, 43).values


def test_sample_iid_matches_bisect_oracle():
    # inverse CDF: smallest v with F(v) >= u, computed independently with bisect
    q = random_distribution(12, 9)
    cdf = list(itertools.accumulate(q.weights))
    cdf[-1] = 1.0
    rng = SplitMix64(2024)
    us = [rng.random() for _ in range(5000)]
    expected = tuple(min(bisect.bisect_left(cdf, x), len(cdf) - 1) + 1 for x in us)
    assert sample_iid(q, 5000, 2024).values == expected


def test_shuffle_single_value():
    assert shuffle_multiset(Profile((3,)), 1).values == (1, 1, 1)


def test_shuffle_zero_total():
    with pytest.raises(ValidationError):
        shuffle_multiset(Profile((0, 0)), 1)


def test_shuffle_two_arrangements_uniform():
    rng = SplitMix64(5)
    counts = Counter(shuffle_multiset(Profile((1, 1)), rng).values for _ in range(10**4))
    assert set(counts) == {(1, 2), (2, 1)}
    for c in counts.values():
        assert abs(c / 10**4 - 0.5) <= 0.02


def test_shuffle_multiset_arrangements_uniform():
    rng = SplitMix64(6)
    counts = Counter(shuffle_multiset(Profile((2, 1)), rng).values for _ in range(3 * 10**4))
    assert set(counts) == {(1, 1, 2), (1, 2, 1), (2, 1, 1)}
    for c in counts.values():
        assert abs(c / (3 * 10**4) - 1 / 3) <= 0.02


@given(st.lists(st.integers(0, 5), min_size=1, max_size=6).filter(lambda c: sum(c) > 0),
       st.integers(0, 2**64 - 1))
def test_shuffle_preserves_profile(counts, seed):
    x = Profile(tuple(counts))
    assert profile_of(shuffle_multiset(x, seed), x.u) == x


def test_profile_of_examples():
    assert profile_of((1, 2, 1), 2).counts == (2, 1)
    assert profile_of((), 3).counts == (0, 0, 0)
    assert profile_of((3, 3, 3), 3).counts == (0, 0, 3)
    with pytest.raises(ValidationError):
        profile_of((4,), 3)


def test_degeneracy_prefix_length():
    assert DegeneracyParams(0.8, 3, 10**4).n_T == 1585
    assert DegeneracyParams(0.0, 3, 100).n_T == 1
    with pytest.raises(ValidationError):
        DegeneracyParams(1.0, 3, 10)


def test_degeneracy_examples():
    seq = InputSequence((1, 1, 1, 2, 2, 2))
    full = DegeneracyParams(0.95, 3, 6)
    half = DegeneracyParams(0.6, 3, 6)
    assert full.n_T == 6 and half.n_T == 3
    assert not is_profile_degenerate(seq, full, 2)
    assert is_profile_degenerate(seq, half, 2)


def test_degeneracy_rare_for_uniform():
    q = uniform(4)
    params = DegeneracyParams(0.8, 3, 10**4)
    rng = SplitMix64(8)
    hits = sum(is_profile_degenerate(sample_iid_array(q, 10**4, rng), params, 4) for _ in range(1000))
    assert hits / 1000 < 0.01


def test_random_distribution_valid():
    for u in (1, 2, 40):
        q = random_distribution(u, u)
        assert q.u == u and abs(sum(q.weights) - 1) < 1e-12
    assert random_distribution(5, 1) == random_distribution(5, 1)
