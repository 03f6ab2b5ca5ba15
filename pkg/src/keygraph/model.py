"""Closed-form theory for keyed sensor networks over unreliable channels.

A network of n nodes is split into r classes by a probability vector mu;
a class-i node holds a ring of K[i] keys drawn uniformly without
replacement from a pool of P keys, and every wireless channel is on
independently with probability alpha.  Two nodes can talk securely iff
their rings intersect and the channel between them is on.

This module holds the parameterization plus everything that can be
computed without sampling: pairwise and mean edge probabilities, the
k-connectivity threshold solver for the minimum ring size, deviation
of a parameter point from the critical scaling, and a ready-made
parameter family that satisfies the asymptotic design conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

__all__ = [
    "NetworkParams",
    "ScalingEvaluation",
    "OneLawChecks",
    "ExampleScalingParams",
    "UnsatisfiableError",
    "edge_prob",
    "mean_edge_prob",
    "mean_link_prob",
    "lambda1_approx",
    "critical_k1",
    "check_scaling_admissible",
    "evaluate_scaling",
    "example_scaling",
]

_MU_SUM_TOL = 1e-12


class UnsatisfiableError(ValueError):
    """No parameter value can satisfy the requested threshold inequality."""


@dataclass(frozen=True)
class NetworkParams:
    """Full parameterization of the network model.

    n      -- number of sensor nodes
    mu     -- class distribution, one positive entry per class, sums to 1
    K      -- per-class key ring sizes, nondecreasing, K[-1] <= P
    P      -- key pool size
    alpha  -- probability that a wireless channel is on, in (0, 1]

    Class indices are 0-based throughout the package.
    """

    n: int
    mu: tuple[float, ...]
    K: tuple[int, ...]
    P: int
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(x) for x in self.mu))
        object.__setattr__(self, "K", tuple(int(x) for x in self.K))
        if self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not self.mu:
            raise ValueError("mu must have at least one class")
        if len(self.K) != len(self.mu):
            raise ValueError(
                f"K and mu must have equal length, got {len(self.K)} and {len(self.mu)}"
            )
        if any(m <= 0 for m in self.mu):
            raise ValueError(f"mu entries must be positive, got {self.mu}")
        if abs(math.fsum(self.mu) - 1.0) > _MU_SUM_TOL:
            raise ValueError(f"mu must sum to 1 within {_MU_SUM_TOL}, got sum {math.fsum(self.mu)!r}")
        if self.P < 1:
            raise ValueError(f"P must be a positive integer, got {self.P}")
        if any(k < 0 for k in self.K):
            raise ValueError(f"K entries must be non-negative, got {self.K}")
        if any(a > b for a, b in zip(self.K, self.K[1:])):
            raise ValueError(f"K must be sorted nondecreasing, got {self.K}")
        if self.K[-1] > self.P:
            raise ValueError(f"K must satisfy K[-1] <= P, got K[-1]={self.K[-1]} > P={self.P}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")

    @property
    def r(self) -> int:
        return len(self.mu)


@dataclass(frozen=True)
class OneLawChecks:
    """Finite-n proxies for the asymptotic side conditions of the one-law.

    An asymptotic condition cannot be decided at a single n, so the raw
    ratios are reported next to a verdict against caller-supplied (or
    default) finite-n thresholds.
    """

    pool_to_n: float            # P / n             (want large pools)
    max_ring_to_pool: float     # K[-1] / P         (want small rings)
    ring_spread_to_log: float   # K[-1] / (K[0] log n)
    pool_to_n_ok: bool
    max_ring_to_pool_ok: bool
    ring_spread_to_log_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.pool_to_n_ok and self.max_ring_to_pool_ok and self.ring_spread_to_log_ok


@dataclass(frozen=True)
class ScalingEvaluation:
    """One parameter point measured against the k-connectivity scaling.

    gamma_n is the deviation of the class-0 mean degree from the critical
    scaling: gamma_n = n * Lambda1 - log n - (k-1) log log n.
    """

    n: int
    k: int
    lambda1: float
    Lambda1: float
    gamma_n: float
    admissible: bool
    one_law_flags: OneLawChecks


@dataclass(frozen=True)
class ExampleScalingParams:
    """Knobs for the bundled parameter family (see example_scaling).

    alpha_fn maps n to the channel-on probability; the family is designed
    for alpha_fn(n) decaying no faster than log(n)/n.  mu_r is the
    probability mass of the largest (best-provisioned) class.
    """

    epsilon: float
    alpha_fn: Callable[[int], float]
    mu_r: float

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0.0 < self.mu_r <= 1.0:
            raise ValueError(f"mu_r must lie in (0, 1], got {self.mu_r}")


def edge_prob(ki: int, kj: int, pool: int, method: str = "product") -> float:
    """Probability that two random key rings of sizes ki, kj intersect.

    Rings are drawn uniformly without replacement from a pool of `pool`
    keys, so the miss probability is the binomial ratio
    C(pool-ki, kj) / C(pool, kj).  The ratio is evaluated as a running
    product of per-draw factors, which cannot overflow; method="log"
    accumulates log1p terms instead and is the path of choice for pools
    beyond ~1e6 keys.
    """
    pool = int(pool)
    ki, kj = int(ki), int(kj)
    if pool < 1:
        raise ValueError(f"pool must be a positive integer, got {pool}")
    if not 0 <= ki <= pool:
        raise ValueError(f"ki must lie in [0, pool], got ki={ki}, pool={pool}")
    if not 0 <= kj <= pool:
        raise ValueError(f"kj must lie in [0, pool], got kj={kj}, pool={pool}")
    if ki + kj > pool:
        return 1.0
    small, big = min(ki, kj), max(ki, kj)
    if small == 0:
        return 0.0
    if method == "product":
        ratio = 1.0
        for l in range(small):
            ratio *= (pool - big - l) / (pool - l)
        return min(max(1.0 - ratio, 0.0), 1.0)
    if method == "log":
        log_ratio = math.fsum(math.log1p(-big / (pool - l)) for l in range(small))
        return min(max(-math.expm1(log_ratio), 0.0), 1.0)
    raise ValueError(f"method must be 'product' or 'log', got {method!r}")


def _mean_edge_prob(mu: Sequence[float], K: Sequence[int], pool: int, cls: int) -> float:
    return math.fsum(m * edge_prob(K[cls], kj, pool) for m, kj in zip(mu, K))


def mean_edge_prob(params: NetworkParams, cls: int) -> float:
    """Mean key-graph edge probability for a class-`cls` node (lambda_i).

    Averages the pairwise intersection probability over the class of the
    partner node.
    """
    if not 0 <= cls < params.r:
        raise ValueError(f"cls must lie in [0, {params.r - 1}], got {cls}")
    return _mean_edge_prob(params.mu, params.K, params.P, cls)


def mean_link_prob(params: NetworkParams, cls: int) -> float:
    """Mean secure-link probability for a class-`cls` node (Lambda_i).

    A usable link needs both a shared key and an on channel, so this is
    alpha times the key-graph value.
    """
    return params.alpha * mean_edge_prob(params, cls)


def lambda1_approx(params: NetworkParams) -> float:
    """Linearized stand-in for lambda_1: K[0] * K_avg / P.

    K_avg is the mean ring size over the class distribution.  Accurate
    only while lambda_1 is small; the exact value from mean_edge_prob
    runs below this by roughly lambda_1 / 2.
    """
    k_avg = math.fsum(m * k for m, k in zip(params.mu, params.K))
    return params.K[0] * k_avg / params.P


def _connectivity_bound(n: int, k: int, alpha: float) -> float:
    return (math.log(n) + (k - 1) * math.log(math.log(n))) / (alpha * n)


def critical_k1(
    n: int,
    k: int,
    alpha: float,
    mu: Sequence[float],
    offsets: Sequence[int],
    pool: int,
) -> int:
    """Smallest ring size K1 whose mean edge probability clears the
    k-connectivity threshold (log n + (k-1) log log n) / (alpha n).

    Class j receives ring size K1 + offsets[j]; offsets must start at 0
    and be nondecreasing so the ring sizes stay sorted.  lambda_1 is
    nondecreasing in K1, so the minimum is found by bisection.

    Raises UnsatisfiableError when no K1 with K1 + max(offsets) <= pool
    clears the bound.
    """
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    offsets = tuple(int(o) for o in offsets)
    if len(offsets) != len(mu):
        raise ValueError(
            f"offsets and mu must have equal length, got {len(offsets)} and {len(mu)}"
        )
    if offsets[0] != 0:
        raise ValueError(f"offsets must start at 0, got {offsets}")
    if any(a > b for a, b in zip(offsets, offsets[1:])):
        raise ValueError(f"offsets must be nondecreasing, got {offsets}")
    mu = tuple(float(m) for m in mu)
    if any(m <= 0 for m in mu) or abs(math.fsum(mu) - 1.0) > _MU_SUM_TOL:
        raise ValueError(f"mu must be a positive probability vector, got {mu}")

    bound = _connectivity_bound(n, k, alpha)
    k1_max = pool - offsets[-1]

    def lam1(k1: int) -> float:
        return _mean_edge_prob(mu, tuple(k1 + o for o in offsets), pool, 0)

    if k1_max < 1 or lam1(k1_max) <= bound:
        raise UnsatisfiableError(
            f"no K1 <= {k1_max} reaches the k={k} threshold {bound:.6g} "
            f"(n={n}, alpha={alpha}, pool={pool})"
        )
    lo, hi = 0, k1_max  # invariant: lam1(lo) <= bound < lam1(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if lam1(mid) > bound:
            hi = mid
        else:
            lo = mid
    assert lam1(hi) > bound
    assert hi == 1 or lam1(hi - 1) <= bound
    return hi


def check_scaling_admissible(params: NetworkParams) -> bool:
    """Ring-size window required of a scaling: 2 <= K[0] and K[-1] <= P/2.

    (Sortedness is already a NetworkParams invariant.)
    """
    return params.K[0] >= 2 and 2 * params.K[-1] <= params.P


def evaluate_scaling(
    params: NetworkParams,
    k: int,
    *,
    pool_to_n_min: float = 1.0,
    max_ring_to_pool_max: float = 0.1,
    ring_spread_to_log_max: float = 1.0,
) -> ScalingEvaluation:
    """Measure one parameter point against the k-connectivity scaling.

    Reports exact lambda_1 and Lambda_1, the deviation gamma_n from the
    critical scaling, the admissibility window, and finite-n proxies for
    the one-law side conditions (raw ratios plus verdicts against the
    keyword thresholds).
    """
    if params.n < 3:
        raise ValueError(f"n must be at least 3 to evaluate the scaling, got {params.n}")
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    lam1 = mean_edge_prob(params, 0)
    Lam1 = params.alpha * lam1
    n = params.n
    gamma = n * Lam1 - math.log(n) - (k - 1) * math.log(math.log(n))
    pool_to_n = params.P / n
    max_ring_to_pool = params.K[-1] / params.P
    # K[0] = 0 only in degenerate parameterizations; report an infinite spread.
    spread = params.K[-1] / (params.K[0] * math.log(n)) if params.K[0] > 0 else math.inf
    flags = OneLawChecks(
        pool_to_n=pool_to_n,
        max_ring_to_pool=max_ring_to_pool,
        ring_spread_to_log=spread,
        pool_to_n_ok=pool_to_n >= pool_to_n_min,
        max_ring_to_pool_ok=max_ring_to_pool <= max_ring_to_pool_max,
        ring_spread_to_log_ok=spread <= ring_spread_to_log_max,
    )
    return ScalingEvaluation(
        n=n,
        k=k,
        lambda1=lam1,
        Lambda1=Lam1,
        gamma_n=gamma,
        admissible=check_scaling_admissible(params),
        one_law_flags=flags,
    )


def example_scaling(n: int, scaling: ExampleScalingParams, r: int) -> NetworkParams:
    """Instantiate the bundled parameter family at network size n.

    Sets P = round(n log n), the smallest ring to
    round((log n)^(1/2+eps) / sqrt(alpha_n)) and the largest to
    round((1+eps) (log n)^(3/2-eps) / (mu_r sqrt(alpha_n))); intermediate
    ring sizes are free in the design, so they are filled by linear
    interpolation and clamped nondecreasing.  The class distribution puts
    mu_r on the top class and spreads the rest uniformly.
    """
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if r < 1:
        raise ValueError(f"r must be a positive integer, got {r}")
    alpha_n = scaling.alpha_fn(n)
    if not 0.0 < alpha_n <= 1.0:
        raise ValueError(f"alpha_fn(n) must lie in (0, 1], got {alpha_n} at n={n}")
    if r == 1 and abs(scaling.mu_r - 1.0) > _MU_SUM_TOL:
        raise ValueError(f"mu_r must be 1 when r=1, got {scaling.mu_r}")
    if r > 1 and scaling.mu_r >= 1.0:
        raise ValueError(f"mu_r must be below 1 when r={r}, got {scaling.mu_r}")

    log_n = math.log(n)
    eps = scaling.epsilon
    root_alpha = math.sqrt(alpha_n)
    pool = round(n * log_n)
    k1 = round(log_n ** (0.5 + eps) / root_alpha)
    kr = round((1.0 + eps) * log_n ** (1.5 - eps) / (scaling.mu_r * root_alpha))
    if k1 > kr:
        raise ValueError(
            f"rounded ring sizes are inconsistent (K1={k1} > Kr={kr}); "
            f"epsilon={eps} is too aggressive at n={n}"
        )
    if r == 1:
        K = (k1,)
        mu = (1.0,)
    else:
        K = [round(k1 + (kr - k1) * i / (r - 1)) for i in range(r)]
        for i in range(1, r):
            K[i] = max(K[i], K[i - 1])
        K = tuple(K)
        mu = ((1.0 - scaling.mu_r) / (r - 1),) * (r - 1) + (scaling.mu_r,)
    return NetworkParams(n=n, mu=mu, K=K, P=pool, alpha=alpha_n)
