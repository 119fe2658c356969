"""Closed forms, bound constants and exact oracles for median-of-k Quicksort.

Floating-point functions work in double precision.  The brute-force oracle
returns :class:`fractions.Fraction` values so that closed-form checks can be
exact equalities.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np
from scipy import integrate

from .core import (
    BudgetError,
    Profile,
    SampleParams,
    UniverseDistribution,
    ValidationError,
)

LN2 = math.log(2.0)

Weights = Union[UniverseDistribution, Profile, Sequence[float]]


def _weights(w: Weights) -> np.ndarray:
    if isinstance(w, UniverseDistribution):
        return np.asarray(w.weights, dtype=np.float64)
    if isinstance(w, Profile):
        return np.asarray(w.counts, dtype=np.float64)
    return np.asarray(w, dtype=np.float64)


def _params(k_or_params) -> SampleParams:
    if isinstance(k_or_params, SampleParams):
        return k_or_params
    return SampleParams(int(k_or_params))


def harmonic(m: int) -> float:
    if m < 0:
        raise ValidationError("harmonic numbers need m >= 0")
    return math.fsum(1.0 / i for i in range(1, m + 1))


def entropy(q: Weights, base: float = 2) -> float:
    """Shannon entropy; zero entries contribute nothing."""
    w = _weights(q)
    w = w[w > 0]
    h = float(-np.sum(w * np.log(w)))
    h = max(h, 0.0)
    if base == 2:
        return h / LN2
    if base == math.e or base == "e":
        return h
    raise ValidationError("base must be 2 or e")


def entropy_ln(q: Weights) -> float:
    return entropy(q, base=math.e)


def qs_entropy(w: Weights) -> float:
    """Quicksort entropy: sum over i < j of w_i w_j / (w_i + ... + w_j)."""
    x = _weights(w)
    u = len(x)
    if u < 2:
        return 0.0
    prefix = np.concatenate(([0.0], np.cumsum(x)))
    total = 0.0
    for i in range(u - 1):
        if x[i] == 0:
            continue  # all its terms vanish; skipping also avoids 0/0
        denom = prefix[i + 2 :] - prefix[i]
        total += float(np.sum(x[i] * x[i + 1 :] / denom))
    return total


def qs_entropy_exact(x: Profile) -> Fraction:
    c = x.counts
    q = Fraction(0)
    for i in range(len(c)):
        run = c[i]
        for j in range(i + 1, len(c)):
            run += c[j]
            if run:
                q += Fraction(c[i] * c[j], run)
    return q


def alpha_k(k: int) -> float:
    """ln 2 / (H_{k+1} - H_{(k+1)/2}): leading-term ratio to the entropy bound."""
    if not isinstance(k, int) or k < 1 or k % 2 == 0:
        raise ValidationError("alpha_k needs an odd positive integer k")
    return LN2 / (harmonic(k + 1) - harmonic((k + 1) // 2))


@lru_cache(maxsize=None)
def _binom_row(k: int) -> np.ndarray:
    return np.array([math.comb(k, j) for j in range(k + 1)], dtype=np.float64)


def beta_median_cdf(x, t: int):
    """CDF of the median of ``2t+1`` iid uniforms, i.e. I_x(t+1, t+1).

    Exact binomial-tail polynomial; accepts scalars or arrays.
    """
    if t < 0:
        raise ValidationError("t must be non-negative")
    k = 2 * t + 1
    scalar = np.isscalar(x)
    xa = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
    row = _binom_row(k)
    j = np.arange(t + 1, k + 1)
    xs = xa[..., None]
    terms = row[t + 1 :] * xs**j * (1.0 - xs) ** (k - j)
    out = np.clip(terms.sum(axis=-1), 0.0, 1.0)
    return float(out) if scalar else out


@dataclass(frozen=True)
class BetaMedianLaw:
    """Beta(t+1, t+1), the law of the median of 2t+1 iid uniforms."""

    t: int

    @property
    def norm(self) -> float:
        # 1 / B(t+1, t+1) = (2t+1)! / (t!)^2
        return math.factorial(2 * self.t + 1) / math.factorial(self.t) ** 2

    def density(self, x):
        x = np.asarray(x, dtype=np.float64)
        return self.norm * x**self.t * (1.0 - x) ** self.t

    def cdf(self, x):
        return beta_median_cdf(x, self.t)

    def total_mass(self) -> float:
        return integrate.quad(lambda z: float(self.density(z)), 0.0, 1.0, epsabs=1e-14)[0]


def pivot_pmf(q: UniverseDistribution, params) -> np.ndarray:
    """Distribution of the median-of-k pivot drawn from ``q``."""
    p = _params(params)
    cdf = np.cumsum(_weights(q))
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    hi = beta_median_cdf(cdf, p.t)
    lo = beta_median_cdf(np.concatenate(([0.0], cdf[:-1])), p.t)
    return hi - lo


@dataclass(frozen=True)
class PivotSplit:
    v: int
    V1: float
    V2: float
    hit: float
    Z1: Optional[UniverseDistribution]
    Z2: Optional[UniverseDistribution]


def pivot_split(q: UniverseDistribution, v: int) -> PivotSplit:
    """Probability mass left of, at, and right of pivot ``v`` plus zoomed-in halves."""
    if not 1 <= v <= q.u:
        raise ValidationError(f"pivot {v} outside 1..{q.u}")
    w = q.weights
    left, right = w[: v - 1], w[v:]
    V1, V2 = math.fsum(left), math.fsum(right)
    Z1 = UniverseDistribution(tuple(x / V1 for x in left)) if left else None
    Z2 = UniverseDistribution(tuple(x / V2 for x in right)) if right else None
    if Z1 is not None and Z1.u == 1:
        Z1 = UniverseDistribution((1.0,))
    if Z2 is not None and Z2.u == 1:
        Z2 = UniverseDistribution((1.0,))
    return PivotSplit(v, V1, V2, w[v - 1], Z1, Z2)


def entropy_aggregation_residual(q: UniverseDistribution, v: int) -> float:
    """H(q) minus the entropy of the three-way split plus weighted sub-entropies."""
    s = pivot_split(q, v)
    rhs = entropy_ln([s.V1, s.hit, s.V2])
    if s.Z1 is not None:
        rhs += s.V1 * entropy_ln(s.Z1)
    if s.Z2 is not None:
        rhs += s.V2 * entropy_ln(s.Z2)
    return entropy_ln(q) - rhs


def expected_search_cost_dp(q: Weights, params) -> float:
    """Expected node depth of a q-random value in a saturated k-fringe-balanced tree.

    Memoized over contiguous value ranges ``[i, j)``: O(u^2) states, O(u^3) time.
    """
    p = _params(params)
    w = _weights(q)
    if len(w) == 0:
        return 0.0
    if np.any(w <= 0):
        raise ValidationError("all weights in range must be positive")
    u = len(w)
    E = np.zeros((u + 1, u + 1))
    for length in range(1, u + 1):
        for i in range(0, u - length + 1):
            j = i + length
            seg = w[i:j]
            s = np.cumsum(seg) / seg.sum()
            s[-1] = 1.0
            s_prev = np.concatenate(([0.0], s[:-1]))
            pmf = beta_median_cdf(s, p.t) - beta_median_cdf(s_prev, p.t)
            left = E[i, i:j]
            right = E[i + 1 : j + 1, j]
            E[i, j] = 1.0 + float(np.sum(pmf * (s_prev * left + (1.0 - s) * right)))
    return float(E[0, u])


def allen_munro_cost(q: Weights) -> float:
    return 2.0 * qs_entropy(q) + 1.0


def sedgewick_exact_multiset(x: Profile, exact: bool = False):
    """Average partition comparisons (pivot not self-compared), k = 1: 2Q(x) + n - u."""
    if any(c < 1 for c in x.counts):
        raise ValidationError("every value needs multiplicity >= 1")
    if exact:
        return 2 * qs_entropy_exact(x) + x.total - x.u
    return 2.0 * qs_entropy(x) + x.total - x.u


def beta_function_int(a: int, b: int) -> Fraction:
    return Fraction(math.factorial(a - 1) * math.factorial(b - 1), math.factorial(a + b - 1))


@dataclass(frozen=True)
class BoundConstants:
    kind: str
    k: int
    eps: float
    c: float
    d: float
    tildeH: float
    tildeh: Optional[float]
    valid: bool

    def evaluate(self, h_ln: float) -> float:
        if not self.valid:
            raise ValidationError(f"{self.kind} constants for eps={self.eps} are invalid")
        if self.kind == "upper":
            return self.c * h_ln + self.d
        return self.c * h_ln - self.d


def bound_constants(kind: str, params, eps: float) -> BoundConstants:
    """Constants of the entropy sandwich for the expected search cost.

    upper: E <= c H_ln(q) + d, valid iff c >= 0; eps in (0, 1).
    lower: E >= c H_ln(q) - d, valid iff d >= 0; eps in (0, 1/e).
    """
    p = _params(params)
    k, t = p.k, p.t
    tH = harmonic(k + 1) - harmonic(t + 1)
    beta = float(beta_function_int(t + 1, t + 1))
    base_d = (t + 1) * beta / (eps ** (t + 2) * (1.0 - eps) ** t) if 0 < eps < 1 else math.nan
    if kind == "upper":
        if not 0.0 < eps < 1.0:
            raise ValidationError("upper bound needs eps in (0, 1)")
        th = harmonic(k) - harmonic(t)
        denom = tH - 4.0 * eps * th
        c = 1.0 / denom if denom != 0 else math.inf
        return BoundConstants("upper", k, eps, c, base_d, tH, th, bool(denom > 0))
    if kind == "lower":
        if not 0.0 < eps < 1.0 / math.e:
            raise ValidationError("lower bound needs eps in (0, 1/e)")
        c = 1.0 / (tH + 4.0 * eps + eps * math.log(1.0 / eps))
        d = (c * math.log(3.0) - 1.0) * base_d
        return BoundConstants("lower", k, eps, c, d, tH, None, bool(d >= 0))
    raise ValidationError("kind must be 'upper' or 'lower'")


def sorting_lower_bound(q: Weights, n: int) -> float:
    """Leading terms of the expected ternary comparisons any sorter needs.

    The error term is not included; for u = 1 the value is negative and vacuous.
    """
    return entropy(q, 2) * n - n / LN2


def expected_beta_entropy(t: int) -> float:
    """E[H_ln(P, 1 - P)] for P ~ Beta(t+1, t+1), equal to H_{2t+2} - H_{t+1}."""
    return harmonic(2 * t + 2) - harmonic(t + 1)


def expected_beta_entropy_quad(t: int) -> float:
    law = BetaMedianLaw(t)

    def f(z):
        if z <= 0.0 or z >= 1.0:
            return 0.0
        h = -z * math.log(z) - (1.0 - z) * math.log1p(-z)
        return h * float(law.density(z))

    return integrate.quad(f, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)[0]


def hoelder_constant(h: float) -> float:
    """(integral_0^1 |ln t + 1|^(1/(1-h)) dt)^(1-h).

    With t = exp(-s) the integrand becomes |1 - s|^p exp(-s) on [0, inf).  The
    tail piece is integrated relative to its peak value at s = 1 + p so that
    large exponents do not overflow.
    """
    if not 0.0 < h < 1.0:
        raise ValidationError("h must lie in (0, 1)")
    p = 1.0 / (1.0 - h)
    head = integrate.quad(lambda s: (1.0 - s) ** p * math.exp(-s), 0.0, 1.0, epsrel=1e-12)[0]
    log_peak = p * math.log(p) - (1.0 + p)

    def tail(s):
        r = s - 1.0
        if r <= 0.0:
            return 0.0
        return math.exp(p * math.log(r) - s - log_peak)

    mid = 1.0 + p
    width = 40.0 * math.sqrt(p) + 40.0
    pieces = [
        integrate.quad(tail, 1.0, mid, epsrel=1e-12, limit=200)[0],
        integrate.quad(tail, mid, mid + width, epsrel=1e-12, limit=200)[0],
        integrate.quad(tail, mid + width, math.inf, epsrel=1e-12, limit=200)[0],
    ]
    scaled_tail = math.fsum(pieces)
    log_total = log_peak + math.log(scaled_tail + head * math.exp(-log_peak))
    return math.exp((1.0 - h) * log_total)


def chernoff_binomial_bound(n: int, delta: float) -> float:
    """Bound on P(|X/n - p| >= delta) for X ~ Bin(n, p)."""
    return 2.0 * math.exp(-2.0 * delta * delta * n)


def chernoff_multinomial_bound(n: int, delta: float) -> float:
    """Bound on P(sum |X_i/n - p_i| >= delta); needs delta >= sqrt(20u/n), checked by callers.

    Values above 1 are vacuous but returned unchanged.
    """
    return 3.0 * math.exp(-delta * delta * n / 25.0)


def entropy_concentration_rho(u: int, n: int, delta: float, h: float) -> float:
    """Bound on |E[H_ln(X/n)] - H_ln(q)| for X ~ Multinomial(n, q) over u values."""
    if not 0.0 < delta < 1.0:
        raise ValidationError("delta must lie in (0, 1)")
    if delta < math.sqrt(20.0 * u / n):
        raise ValidationError("delta must be at least sqrt(20 u / n)")
    if not 0.0 < h < 1.0:
        raise ValidationError("h must lie in (0, 1)")
    tail = math.exp(-delta * delta * n / 25.0)
    return hoelder_constant(h) * delta**h * (1.0 - 3.0 * tail) + 3.0 * u * math.log(u) * tail


@dataclass(frozen=True)
class HeightBoundConstants:
    k: int
    c: float
    alpha: float
    p: float
    delta: float
    eta: float

    @property
    def valid(self) -> bool:
        return self.delta > 0


def height_constants(params, c: float, alpha: float) -> HeightBoundConstants:
    """Constants of the tail bound P(height >= c ln n) <= 2 n^eta."""
    pr = _params(params)
    if not 0.51 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0.51, 1)")
    upper_tail = 1.0 - beta_median_cdf(alpha - 0.01, pr.t)
    p = 0.99 - 2.0 * upper_tail
    delta = p - (1.0 / c) * (1.0 / math.log(1.0 / alpha) + 1.0)
    eta = 1.0 - 2.0 * c * delta * delta
    return HeightBoundConstants(pr.k, c, alpha, p, delta, eta)


def optimize_height_alpha(params, c: float, grid: Optional[Sequence[float]] = None):
    """Valid constants with the smallest eta over an alpha grid, or None."""
    if grid is None:
        grid = np.linspace(0.5105, 0.9995, 979)
    best = None
    for a in grid:
        hc = height_constants(params, c, float(a))
        if hc.valid and (best is None or hc.eta < best.eta):
            best = hc
    return best


def binomial_lower_tail(n: int, p: float, k: int) -> float:
    """P(Bin(n, p) < k), summed term by term in log space."""
    if k <= 0:
        return 0.0
    if p >= 1.0:
        return 1.0 if n < k else 0.0
    total = 0.0
    lq = math.log1p(-p)
    lp = math.log(p)
    for j in range(0, min(k, n + 1)):
        total += math.exp(math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1) + j * lp + (n - j) * lq)
    return min(total, 1.0)


# --- exhaustive oracle -------------------------------------------------------

BRUTE_FORCE_MAX_N = 9
BRUTE_FORCE_MAX_U = 4


@dataclass(frozen=True)
class MultisetModel:
    x: Profile


@dataclass(frozen=True)
class IidModel:
    q: UniverseDistribution
    n: int


def multiset_arrangements(counts: Sequence[int]):
    """All distinct arrangements of the multiset, each once."""
    counts = list(counts)
    n = sum(counts)
    out = [0] * n

    def rec(pos):
        if pos == n:
            yield tuple(out)
            return
        for v, c in enumerate(counts):
            if c:
                counts[v] -= 1
                out[pos] = v + 1
                yield from rec(pos + 1)
                counts[v] += 1

    yield from rec(0)


def brute_force_expected_cost(model, params, convention: str = "algorithm1") -> Fraction:
    """Exact expected partition comparisons by full enumeration of the model."""
    from .quicksort import quicksort_k, sedgewick_count

    p = _params(params)
    if convention not in ("algorithm1", "sedgewick"):
        raise ValidationError("convention must be 'algorithm1' or 'sedgewick'")

    def cost(values):
        led = quicksort_k(values, p, record_events=False).ledger
        return sedgewick_count(led) if convention == "sedgewick" else led.partition_cmps

    if isinstance(model, Profile):
        model = MultisetModel(model)
    if isinstance(model, MultisetModel):
        x = model.x
        if x.total > BRUTE_FORCE_MAX_N or x.u > BRUTE_FORCE_MAX_U:
            raise BudgetError("multiset exceeds enumeration budget (n <= 9, u <= 4)")
        if x.total == 0:
            return Fraction(0)
        total, count = 0, 0
        for arr in multiset_arrangements(x.counts):
            total += cost(arr)
            count += 1
        return Fraction(total, count)
    if isinstance(model, IidModel):
        q, n = model.q, model.n
        if n > BRUTE_FORCE_MAX_N or q.u > BRUTE_FORCE_MAX_U:
            raise BudgetError("iid model exceeds enumeration budget (n <= 9, u <= 4)")
        w = [Fraction(x) for x in q.weights]
        acc = Fraction(0)
        for seq in itertools.product(range(1, q.u + 1), repeat=n):
            prob = Fraction(1)
            for v in seq:
                prob *= w[v - 1]
            acc += prob * cost(seq)
        return acc
    raise ValidationError("model must be a MultisetModel, IidModel or Profile")
