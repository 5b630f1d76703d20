"""Seeded per-trial randomness and binomial rate estimates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Z95 = 1.959963984540054


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial ``index``; depends only on (seed, index)."""
    return np.random.default_rng([int(seed), int(index)])


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class RateEstimate:
    successes: int
    trials: int

    @property
    def estimate(self) -> float:
        return self.successes / self.trials

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def ci_radius(self) -> float:
        return Z95 * self.stderr

    @property
    def wilson(self) -> tuple[float, float]:
        return wilson_interval(self.successes, self.trials)


def rate_estimate(successes: int, trials: int) -> RateEstimate:
    return RateEstimate(int(successes), int(trials))


def binomial_stderr(p: float, trials: int) -> float:
    """Standard error of a rate at true probability ``p``."""
    return math.sqrt(p * (1 - p) / trials)


def mean_and_stderr(samples) -> tuple[float, float]:
    x = np.asarray(samples, dtype=float)
    if len(x) < 2:
        return float(x.mean()), 0.0
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(len(x)))


def _run_range(fn, seed: int, start: int, stop: int) -> list:
    return [fn(trial_rng(seed, t)) for t in range(start, stop)]


def map_trials(fn, trials: int, seed: int, workers: int = 1) -> list:
    """Apply ``fn(rng)`` for each trial index, results in index order.

    Trial t always sees the stream ``trial_rng(seed, t)``, so the output
    does not depend on ``workers``.  With workers > 1, ``fn`` must pickle.
    """
    if workers <= 1 or trials < 2:
        return _run_range(fn, seed, 0, trials)
    from concurrent.futures import ProcessPoolExecutor

    bounds = np.linspace(0, trials, min(workers, trials) + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(
            _run_range, [fn] * (len(bounds) - 1), [seed] * (len(bounds) - 1),
            bounds[:-1].tolist(), bounds[1:].tolist(),
        )
        return [r for part in parts for r in part]
