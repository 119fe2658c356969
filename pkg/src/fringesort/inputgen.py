"""Seeded input generators for the multiset and the iid input models.

All randomness comes from SplitMix64 (Steele, Lea & Flood 2014).  The generator
is counter based: output ``i`` (0-based) of a stream with seed ``s`` is
``mix64(s + (i + 1) * GAMMA)`` modulo 2**64, so a whole block of outputs can be
produced with vectorised uint64 arithmetic and still agree bit for bit with the
scalar path.

Uniform doubles are ``(x >> 11) * 2**-53``.  Per-trial streams are derived with
:func:`trial_seed`, ``mix64(seed ^ ((index + 1) * GAMMA))``; the derivation is
part of the reproducibility contract and must not change.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import kernels
from .core import InputSequence, Profile, UniverseDistribution, ValidationError, normalize_distribution

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def trial_seed(seed: int, index: int) -> int:
    """Seed of the stream owned by trial ``index`` of an experiment."""
    return mix64((seed & MASK64) ^ (((index + 1) * GAMMA) & MASK64))


class SplitMix64:
    """Portable 64-bit generator; ``state`` is the only mutable field."""

    def __init__(self, seed: int = 0):
        if not isinstance(seed, (int, np.integer)) or seed < 0 or seed > MASK64:
            raise ValidationError("seed must be an unsigned 64-bit integer")
        self.state = int(seed)

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def bounded(self, bound: int) -> int:
        """Unbiased integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValidationError("bound must be positive")
        threshold = ((1 << 64) - bound) % bound
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % bound

    def u64_block(self, n: int) -> np.ndarray:
        """Next ``n`` outputs as a uint64 array (same bits as ``next_u64``)."""
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            states = np.uint64(self.state) + steps * np.uint64(GAMMA)
            out = _mix64_array(states)
        self.state = (self.state + n * GAMMA) & MASK64
        return out

    def random_block(self, n: int) -> np.ndarray:
        return (self.u64_block(n) >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


SeedLike = Union[int, SplitMix64]


def _rng(seed: SeedLike) -> SplitMix64:
    return seed if isinstance(seed, SplitMix64) else SplitMix64(seed)


def cumulative(q: UniverseDistribution) -> np.ndarray:
    cdf = np.cumsum(np.asarray(q.weights, dtype=np.float64))
    cdf[-1] = 1.0
    return cdf


def sample_iid_array(q: Optional[UniverseDistribution], n: int, seed: SeedLike, cdf=None) -> np.ndarray:
    """``n`` iid draws as an int64 array (inverse CDF, ties go to the lower value)."""
    rng = _rng(seed)
    if cdf is None:
        cdf = cumulative(q)
    return kernels.inverse_cdf(cdf, rng.random_block(n))


def sample_iid(q: UniverseDistribution, n: int, seed: SeedLike) -> InputSequence:
    if n < 1:
        raise ValidationError("n must be positive")
    return InputSequence(tuple(sample_iid_array(q, n, seed).tolist()), u=q.u)


def shuffle_multiset(x: Profile, seed: SeedLike) -> InputSequence:
    """Uniformly random arrangement of the multiset with profile ``x``."""
    if x.total < 1:
        raise ValidationError("profile must contain at least one element")
    rng = _rng(seed)
    vals = [v for v, c in enumerate(x.counts, start=1) for _ in range(c)]
    for i in range(len(vals) - 1, 0, -1):
        j = rng.bounded(i + 1)
        vals[i], vals[j] = vals[j], vals[i]
    return InputSequence(tuple(vals), u=x.u)


def profile_of(seq, u: int) -> Profile:
    counts = [0] * u
    for v in seq:
        if v < 1 or v > u:
            raise ValidationError(f"value {v} outside 1..{u}")
        counts[v - 1] += 1
    return Profile(tuple(counts))


@dataclass(frozen=True)
class DegeneracyParams:
    nu: float
    k: int
    n: int

    def __post_init__(self):
        if not 0.0 <= self.nu < 1.0:
            raise ValidationError("nu must lie in [0, 1)")
        if self.k < 1:
            raise ValidationError("k must be positive")
        if self.n < 1:
            raise ValidationError("n must be positive")

    @property
    def n_T(self) -> int:
        return min(self.n, max(1, math.ceil(self.n ** self.nu)))


def is_profile_degenerate(seq, params: DegeneracyParams, u: int) -> bool:
    """True iff some value of ``1..u`` occurs fewer than ``k`` times in the prefix."""
    values = seq.values if isinstance(seq, InputSequence) else seq
    if len(values) == 0:
        raise ValidationError("sequence must be non-empty")
    prefix = np.asarray(values[: params.n_T], dtype=np.int64)
    counts = np.bincount(prefix, minlength=u + 1)[1 : u + 1]
    return bool((counts < params.k).any())


def load_weights(path) -> UniverseDistribution:
    """Read whitespace-separated positive raw weights and normalize them."""
    with open(path) as fh:
        raw = [float(tok) for tok in fh.read().split()]
    return normalize_distribution(raw)


def random_distribution(u: int, seed: SeedLike) -> UniverseDistribution:
    """Uniformly random point of the probability simplex (flat Dirichlet)."""
    rng = _rng(seed)
    raw = [-math.log(((rng.next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0)) for _ in range(u)]
    return normalize_distribution(raw)
