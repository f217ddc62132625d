"""Monte Carlo harness and hypothesis tests for Born-rule deviations.

The question this module answers quantitatively: when an agent's will
strength sigma distorts the sampling distribution away from the baseline
(Born) statistics, can the distortion be detected from outcome counts, at
what sample size, and how badly does classical noise mask it?

Detectors are frequency-based: ``simulate_trials`` draws seeded multinomial
counts, ``chi_squared_test`` runs Pearson's goodness-of-fit against a null
distribution, ``detection_power`` Monte-Carlo-estimates the rejection rate
under a sigma-distorted alternative, and ``apply_noise`` mixes in a uniform
component (the simplest depolarizing-style stand-in for decoherence and
measurement noise, which degrades distinguishability symmetrically).
``lln_concentration`` demonstrates the weak-law squeeze on sample means
that motivates the whole exercise.

Seeding: replication r of any estimate uses the derived stream
``derive_seed(seed, r)``, so replications are order-independent and
parallel-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import ProbabilityVector, WillStrength, exercise_will
from .errors import DimensionMismatch, InsufficientExpected
from .seeding import derive_seed, validate_seed
from .special import chi_squared_sf

# Pearson cells need expected count >= POOL_THRESHOLD; smaller ones pool.
POOL_THRESHOLD = 5.0

CONSISTENT = "consistent"
DEVIATION = "deviation"


@dataclass(frozen=True)
class TrialCounts:
    """Outcome tallies from one seeded multinomial run."""

    counts: tuple[int, ...]
    total: int
    seed: int

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError(f"counts must be nonnegative, got {counts}")
        if sum(counts) != self.total or self.total < 1:
            raise ValueError(f"total {self.total} does not match counts summing to {sum(counts)}")
        object.__setattr__(self, "counts", counts)

    def frequencies(self) -> ProbabilityVector:
        return ProbabilityVector(tuple(c / self.total for c in self.counts))


@dataclass(frozen=True)
class TestReport:
    """Outcome of one goodness-of-fit test."""

    __test__ = False  # keep pytest from collecting this as a test class

    statistic: float
    p_value: float
    dof: int
    verdict: str

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")
        if self.dof < 1:
            raise ValueError(f"dof must be >= 1, got {self.dof}")
        if self.verdict not in (CONSISTENT, DEVIATION):
            raise ValueError(f"verdict must be consistent/deviation, got {self.verdict!r}")


@dataclass(frozen=True)
class NoiseLevel:
    """Mixing weight of the uniform distribution, in [0, 1]."""

    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not math.isfinite(lam) or not 0.0 <= lam <= 1.0:
            raise ValueError(f"noise level must lie in [0, 1], got {self.lam!r}")
        object.__setattr__(self, "lam", lam)


def simulate_trials(dist: ProbabilityVector, n: int, seed: int) -> TrialCounts:
    """Draw n multinomial trials from ``dist`` with an explicit seed.

    Identical (dist, n, seed) always reproduces identical counts.
    """
    if n < 1:
        raise ValueError(f"trial count must be >= 1, got {n}")
    seed = validate_seed(seed)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n, dist.weights)
    return TrialCounts(counts=tuple(int(c) for c in counts), total=n, seed=seed)


def chi_squared_test(
    observed: TrialCounts, expected: ProbabilityVector, alpha: float
) -> TestReport:
    """Pearson goodness-of-fit of observed counts against a null distribution.

    Cells whose expected count falls below POOL_THRESHOLD are pooled into a
    single cell; zero-expected cells are dropped (any observation landing in
    one makes the statistic infinite and the p-value 0).  dof is the number
    of cells actually tested minus one.  Verdict is ``deviation`` iff
    p-value < alpha.
    """
    if len(observed.counts) != expected.dimension:
        raise DimensionMismatch(
            f"counts have {len(observed.counts)} cells, expected vector {expected.dimension}"
        )
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"significance level must lie in (0, 1), got {alpha}")

    impossible_hits = 0
    cells: list[tuple[float, float]] = []  # (expected, observed)
    pooled_e = pooled_o = 0.0
    for o, p in zip(observed.counts, expected.weights):
        e = p * observed.total
        if e == 0.0:
            impossible_hits += o
        elif e < POOL_THRESHOLD:
            pooled_e += e
            pooled_o += o
        else:
            cells.append((e, float(o)))
    if pooled_e > 0.0:
        cells.append((pooled_e, pooled_o))
    if len(cells) < 2:
        raise InsufficientExpected(
            f"only {len(cells)} cell(s) left after pooling below {POOL_THRESHOLD}; "
            "need at least 2"
        )

    dof = len(cells) - 1
    if impossible_hits > 0:
        statistic, p_value = math.inf, 0.0
    else:
        statistic = math.fsum((o - e) ** 2 / e for e, o in cells)
        p_value = chi_squared_sf(statistic, dof)
    verdict = DEVIATION if p_value < alpha else CONSISTENT
    return TestReport(statistic=statistic, p_value=p_value, dof=dof, verdict=verdict)


def apply_noise(dist: ProbabilityVector, noise: NoiseLevel | float) -> ProbabilityVector:
    """Mix a uniform component into a distribution: (1-lam)*dist + lam*uniform."""
    lam = noise.lam if isinstance(noise, NoiseLevel) else NoiseLevel(float(noise)).lam
    n = dist.dimension
    u = 1.0 / n
    return ProbabilityVector(tuple((1.0 - lam) * w + lam * u for w in dist.weights))


def detection_power(
    nature: ProbabilityVector,
    understanding: ProbabilityVector,
    will: WillStrength | float,
    n: int,
    alpha: float,
    reps: int,
    seed: int,
    noise: NoiseLevel | float = 0.0,
) -> float:
    """Monte Carlo power of the chi-squared detector against a willed blend.

    Each replication samples n trials from the blended distribution and
    tests them against the baseline (the Born null); the return value is
    the fraction of replications declaring deviation.  At sigma = 0 this
    estimates the type-I error rate, so it calibrates to roughly alpha.

    ``noise`` mixes the same uniform component into both the sampling
    distribution and the null, modeling a detector that sees the blend
    only through a noisy channel.
    """
    if reps < 100:
        raise ValueError(f"need at least 100 replications for a stable estimate, got {reps}")
    null = apply_noise(nature, noise)
    alternative = apply_noise(exercise_will(nature, understanding, will), noise)
    seed = validate_seed(seed)
    hits = 0
    for r in range(reps):
        counts = simulate_trials(alternative, n, derive_seed(seed, r))
        if chi_squared_test(counts, null, alpha).verdict == DEVIATION:
            hits += 1
    return hits / reps


def payoff_mean_variance(dist: ProbabilityVector, payoff) -> tuple[float, float]:
    """Mean and variance of a payoff random variable under ``dist``."""
    values = [float(v) for v in payoff]
    if len(values) != dist.dimension:
        raise DimensionMismatch(
            f"payoff has {len(values)} entries, distribution {dist.dimension}"
        )
    mean = math.fsum(w * v for w, v in zip(dist.weights, values))
    second = math.fsum(w * v * v for w, v in zip(dist.weights, values))
    return mean, max(0.0, second - mean * mean)


def chebyshev_bound(dist: ProbabilityVector, payoff, epsilon: float, n: int) -> float:
    """Chebyshev cap Var/(n*eps^2) on Pr[|sample mean - mean| > eps]."""
    _, var = payoff_mean_variance(dist, payoff)
    return var / (n * epsilon * epsilon)


def lln_concentration(
    dist: ProbabilityVector,
    payoff,
    epsilon: float,
    n_schedule,
    reps: int,
    seed: int,
) -> list[tuple[int, float]]:
    """Estimate Pr[|sample mean - mean| > eps] across a schedule of n.

    For each n the probability is the Monte Carlo fraction of ``reps``
    seeded runs whose payoff sample mean strays more than epsilon from the
    exact mean.  Estimates are nonincreasing in n up to Monte Carlo error
    (the weak-law squeeze) and sit below the Chebyshev cap Var/(n*eps^2).
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if reps < 1:
        raise ValueError(f"need at least one replication, got {reps}")
    values = [float(v) for v in payoff]
    mean, _ = payoff_mean_variance(dist, values)
    seed = validate_seed(seed)
    out = []
    for i, n in enumerate(n_schedule):
        n = int(n)
        hits = 0
        for r in range(reps):
            counts = simulate_trials(dist, n, derive_seed(seed, i, r))
            sample_mean = math.fsum(c * v for c, v in zip(counts.counts, values)) / n
            if abs(sample_mean - mean) > epsilon:
                hits += 1
        out.append((n, hits / reps))
    return out
