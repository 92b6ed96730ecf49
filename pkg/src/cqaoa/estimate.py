"""Expectation of the measure in an evolved state: exact or by sampling.

Sampling emulates repeated preparation and measurement. Draws come from the
inverse CDF of the Born-rule probabilities and the sample size is chosen so
that, for any distribution supported on ``[0, measure_max]``, the mean is
within ``epsilon`` at the confidence set by ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evolve import StateVector

__all__ = [
    "SamplePlan",
    "EstimateResult",
    "exact_expectation",
    "sample_measurement",
    "sample_indices",
    "estimate_expectation",
    "estimate_from_probabilities",
]


@dataclass(frozen=True)
class SamplePlan:
    """Sample count for an ``epsilon``-accurate mean at z-score ``z``.

    The variance of a distribution on ``[0, M]`` is at most ``M**2 / 4``, so
    ``ceil(z**2 (M / 2)**2 / epsilon**2)`` draws suffice.
    """

    measure_max: int
    epsilon: float = 0.1
    z: float = 1.96

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.z <= 0:
            raise ValueError("z must be positive")
        if self.measure_max < 0:
            raise ValueError("measure_max must be non-negative")

    @property
    def variance_bound(self) -> float:
        return (self.measure_max / 2.0) ** 2

    @property
    def n_samples(self) -> int:
        raw = self.z**2 * self.variance_bound / self.epsilon**2
        # round first so 2400.9999999999995 does not become 2401 + 1
        return max(1, math.ceil(round(raw, 9)))


@dataclass(frozen=True)
class EstimateResult:
    f_estimate: float
    best_x: int
    best_c: int
    n_samples_used: int


def exact_expectation(state: StateVector, measure_table) -> float:
    return float(state.probabilities() @ np.asarray(measure_table, dtype=float))


def _cdf(probs: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    if cdf[-1] <= 0:
        raise ValueError("cannot sample from a zero state")
    return cdf / cdf[-1]


def sample_indices(probs: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` indices with probability proportional to ``probs``.

    ``side="right"`` guarantees zero-probability entries are never returned.
    """
    cdf = _cdf(np.asarray(probs, dtype=float))
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    return np.minimum(idx, cdf.size - 1)


def sample_measurement(state: StateVector, rng: np.random.Generator) -> int:
    """Measure ``state`` once in the computational basis."""
    return int(sample_indices(state.probabilities(), 1, rng)[0])


def estimate_from_probabilities(probs, labels, measures, n_samples, rng) -> EstimateResult:
    """Sampled estimate over an arbitrary list of basis states.

    ``labels[k]`` is the bitstring with probability ``probs[k]`` and measure
    ``measures[k]``. Used directly by the optimiser on compact feasible-only
    amplitude arrays.
    """
    draws = sample_indices(probs, n_samples, rng)
    values = np.asarray(measures)[draws]
    k = int(np.argmax(values))
    return EstimateResult(
        f_estimate=float(values.mean()),
        best_x=int(np.asarray(labels)[draws[k]]),
        best_c=int(values[k]),
        n_samples_used=int(n_samples),
    )


def estimate_expectation(state: StateVector, measure_table, plan: SamplePlan, rng) -> EstimateResult:
    measure_table = np.asarray(measure_table)
    labels = np.arange(measure_table.size)
    return estimate_from_probabilities(state.probabilities(), labels, measure_table, plan.n_samples, rng)
