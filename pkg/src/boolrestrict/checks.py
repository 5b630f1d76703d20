"""Exact and sampled checks of the probabilistic inequalities used as tools.

Each helper computes both sides of an inequality for a concrete input so
that callers (tests, the ``verify`` command) can compare them.  Nothing
here asserts an unnamed universal constant; constants are arguments.
"""
from __future__ import annotations

import numpy as np

from .sensitivity import influential_set, junta_distance
from .spectral import FourierExpansion, full_mask, weight_above_level, wht_inverse


def reverse_markov(samples, upper: float) -> tuple[float, float]:
    """(Pr[X >= mu/2], mu/(2M)) for samples of X <= M with positive mean."""
    x = np.asarray(samples, dtype=float)
    if x.max() > upper:
        raise ValueError("samples exceed the stated upper bound")
    mu = float(x.mean())
    return float((x >= mu / 2).mean()), mu / (2 * upper)


def linear_form_values(a) -> np.ndarray:
    """All 2^n values of sum_i a_i x_i over x in {-1, 1}^n."""
    vals = np.zeros(1)
    for ai in np.asarray(a, dtype=float):
        vals = np.concatenate([vals + ai, vals - ai])
    return vals


def linear_form_tail_exact(a, threshold: float) -> float:
    return float((linear_form_values(a) >= threshold).mean())


def linear_form_tail_mc(a, threshold: float, samples: int, rng: np.random.Generator) -> float:
    a = np.asarray(a, dtype=float)
    signs = rng.choice(np.array([-1.0, 1.0]), size=(samples, len(a)))
    return float((signs @ a >= threshold).mean())


def anticoncentration_admissible(a, K: float, t: float) -> bool:
    """Whether every |a_i| <= sigma/(K t)."""
    a = np.asarray(a, dtype=float)
    sigma = float(np.sqrt(a @ a))
    return bool(np.abs(a).max() <= sigma / (K * t))


def truncated_moment_ratio(f: FourierExpansion, W: float, k: int | None = None) -> float:
    """E[f^2 1{f^2 <= W^k E f^2}] / E[f^2], by enumeration."""
    if k is None:
        k = f.degree
    vals = wht_inverse(f).values ** 2
    sigma2 = float(vals.mean())
    if sigma2 == 0:
        return 1.0
    return float((vals * (vals <= W ** k * sigma2)).mean() / sigma2)


def noise_distribution(n: int, x0: int, rho: float, S: int | None = None) -> np.ndarray:
    """Probability of every point under N_{rho,S}(x0)."""
    if S is None:
        S = full_mask(n)
    idx = np.arange(1 << n, dtype=np.int64)
    diff = idx ^ x0
    keep, flip = (1 + rho) / 2, (1 - rho) / 2
    prob = np.ones(1 << n)
    for i in range(n):
        bit = (diff >> i) & 1
        if (S >> i) & 1:
            prob *= np.where(bit == 1, flip, keep)
        else:
            prob *= np.where(bit == 1, 0.0, 1.0)
    return prob


def noisy_exceedance_exact(f: FourierExpansion, rho: float, x0: int) -> tuple[float, float]:
    """(Pr[f(z) - f(x0) >= mu], mu) with z ~ N_rho(x0) and mu the mean increment."""
    vals = wht_inverse(f).values
    prob = noise_distribution(f.n, x0, rho)
    inc = vals - vals[x0]
    mu = float(prob @ inc)
    return float(prob[inc >= mu - 1e-12].sum()), mu


def tail_and_junta_mass(f: FourierExpansion, theta: float, k: int) -> tuple[float, float]:
    """(weight outside the theta-influential junta, weight above level k)."""
    J = influential_set(f, theta)
    return junta_distance(f, J), weight_above_level(f, k)

