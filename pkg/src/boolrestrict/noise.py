"""Noisy sampling, interpolation nodes and the block-noise exceedance procedure.

The pieces here are the executable ingredients of the distance argument
for bounded low-degree functions: correlated resampling inside a subset,
node sets from which the linear coefficient of a polynomial can be read
off stably, classification of coordinates with small restricted linear
coefficients, and a randomized procedure that sums the changes caused by
resampling disjoint blocks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy.optimize import linprog

from .errors import CapacityError, DomainError, InvalidConfigError
from .partition import balanced_partition
from .restrictions import Restriction, restrict
from .spectral import FourierExpansion, evaluate, full_mask, influences, mask_of
from .stats import RateEstimate, map_trials, rate_estimate, trial_rng

NODE_LIMIT = 12

# defaults for the unnamed universal constants
DEFAULT_B = 4.0
DEFAULT_K = 1.0
DEFAULT_W = 4.0


@dataclass(frozen=True)
class InterpolationNodes:
    k: int
    nodes: np.ndarray
    extraction_weights: np.ndarray

    def extract_linear(self, node_values) -> float:
        return float(np.asarray(node_values, dtype=float) @ self.extraction_weights)

    @property
    def weight_norm(self) -> float:
        return float(np.abs(self.extraction_weights).sum())


def lobatto_points(m: int) -> np.ndarray:
    """Extrema of the Chebyshev polynomial T_m on [-1, 1], ascending."""
    return np.cos(np.pi * np.arange(m, -1, -1) / m)


def interpolation_nodes(k: int, limit: int = NODE_LIMIT) -> InterpolationNodes:
    """k+1 nodes in [-1/2, 1/2] that recover a_1 of any degree-k p with p(0) = 0.

    Nodes are the Chebyshev extrema of the largest odd degree m <= k scaled
    by 1/2, plus the origin when k is even.  Weights solve the full
    Vandermonde system for a_1; the weight sitting on the origin is then
    dropped, which is exact on polynomials vanishing at 0.  The resulting
    weight norm is 2m <= 2(k+1).
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    if k > limit:
        raise CapacityError(f"k={k} exceeds the conditioning limit {limit}")
    m = k if k % 2 else k - 1
    nodes = 0.5 * lobatto_points(m)
    if k % 2 == 0:
        nodes = np.sort(np.append(nodes, 0.0))
    vander = np.vander(nodes, k + 1, increasing=True)
    rhs = np.zeros(k + 1)
    rhs[1] = 1.0
    weights = np.linalg.solve(vander.T, rhs)
    weights[nodes == 0.0] = 0.0
    return InterpolationNodes(k, nodes, weights)


def minimax_linear_extraction(nodes, k: int, two_sided: bool = False) -> float:
    """Optimum of min over p of max_j p(rho_j), p of degree k, p(0)=0, a_1=1.

    With ``two_sided`` the objective is max_j |p(rho_j)| instead.  Solved as a
    linear program in (a_2..a_k, t); returns -inf when the program is
    unbounded below.
    """
    nodes = np.asarray(nodes, dtype=float)
    powers = np.column_stack([nodes ** e for e in range(2, k + 1)]) if k >= 2 else np.zeros((len(nodes), 0))
    ones = -np.ones((len(nodes), 1))
    a_ub = np.hstack([powers, ones])
    b_ub = -nodes
    if two_sided:
        a_ub = np.vstack([a_ub, np.hstack([-powers, ones])])
        b_ub = np.concatenate([b_ub, nodes])
    cost = np.zeros(k)
    cost[-1] = 1.0
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * k, method="highs")
    if res.status == 3:
        return -math.inf
    if res.status != 0:
        raise RuntimeError(f"minimax program failed: {res.message}")
    return float(res.fun)


def sample_noisy(x: int, rho: float, S: int, rng: np.random.Generator, n: int | None = None) -> int:
    """Draw from N_{rho,S}(x): coordinates in S keep their value w.p. (1+rho)/2."""
    if not -1.0 <= rho <= 1.0:
        raise DomainError(f"rho={rho} outside [-1, 1]")
    if n is None:
        n = max(S.bit_length(), 1)
    flips = rng.random(n) < (1.0 - rho) / 2.0
    flip_mask = int(np.left_shift(np.int64(1), np.flatnonzero(flips).astype(np.int64)).sum())
    return int(x) ^ (flip_mask & S)


def sample_noisy_batch(
    x: int, rho: float, S: int, rng: np.random.Generator, size: int, n: int
) -> np.ndarray:
    if not -1.0 <= rho <= 1.0:
        raise DomainError(f"rho={rho} outside [-1, 1]")
    flips = rng.random((size, n)) < (1.0 - rho) / 2.0
    weights = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    flip_mask = (flips * weights).sum(axis=1)
    return np.int64(x) ^ (flip_mask & np.int64(S))


def linear_part(f: FourierExpansion, S: int, x0: int) -> float:
    """ell(x0) = sum over i in S of f^({i}) x0_i."""
    total = 0.0
    for i in range(f.n):
        if (S >> i) & 1:
            total += f[1 << i] * (-1.0 if (x0 >> i) & 1 else 1.0)
    return total


def noise_lemma_sample(
    f: FourierExpansion, S: int, x0: int, nodes: InterpolationNodes, rng: np.random.Generator
) -> float:
    """One draw of f(z) - f(x0) with rho uniform on the nodes and z ~ N_{rho,S}(x0)."""
    rho = float(nodes.nodes[rng.integers(len(nodes.nodes))])
    z = sample_noisy(x0, rho, S, rng, n=f.n)
    return evaluate(f, z) - evaluate(f, x0)


def noise_lemma_exceedance(
    f: FourierExpansion,
    S: int,
    x0: int,
    nodes: InterpolationNodes,
    trials: int,
    seed: int,
    gamma: float | None = None,
) -> RateEstimate:
    """Rate at which f(z) - f(x0) reaches gamma/(2(k+1)); gamma defaults to ell(x0)."""
    if trials <= 0:
        raise DomainError("trials must be positive")
    if gamma is None:
        gamma = linear_part(f, S, x0)
    bar = gamma / (2 * (nodes.k + 1))
    hits = 0
    for t in range(trials):
        if noise_lemma_sample(f, S, x0, nodes, trial_rng(seed, t)) >= bar:
            hits += 1
    return rate_estimate(hits, trials)


def classify_small(
    f_y: FourierExpansion, alive: int, inf_f, W: float, k: int
) -> int:
    """Alive j with f_y^({j})^2 <= W^k Inf_j[f] (influences of the unrestricted f)."""
    if W <= 0:
        raise DomainError("W must be positive")
    bar = W ** k
    out = 0
    for j in range(f_y.n):
        if (alive >> j) & 1 and f_y[1 << j] ** 2 <= bar * inf_f[j]:
            out |= 1 << j
    return out


def small_linear_mass(f_y: FourierExpansion, small: int) -> float:
    return float(sum(f_y[1 << j] ** 2 for j in range(f_y.n) if (small >> j) & 1))


def good_threshold(mu: float, k: int, denominator: float = 80.0) -> float:
    """mu / (denominator * log2 k), with log2 k floored at 1."""
    return mu / (denominator * max(math.log2(max(k, 1)), 1.0))


@dataclass(frozen=True)
class ProcedureOneConfig:
    """Inputs of the block-resampling procedure for a fixed good assignment y.

    ``U`` is the alive set, ``y`` the assignment off ``U``; ``blocks`` are
    disjoint masks inside ``small`` which lies inside ``U``.
    """

    f: FourierExpansion
    U: int
    y: int
    blocks: tuple[int, ...]
    nodes: InterpolationNodes
    threshold: float
    small: int | None = None
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = self.f.n
        if self.U & ~full_mask(n) or self.y & ~full_mask(n):
            raise InvalidConfigError("masks exceed the cube")
        if self.U & self.y:
            raise InvalidConfigError("assignment overlaps the alive set")
        small = self.U if self.small is None else self.small
        if small & ~self.U:
            raise InvalidConfigError("SMALL set not inside U")
        seen = 0
        for b in self.blocks:
            if b & ~small:
                raise InvalidConfigError(f"block {b:#x} leaves the SMALL set")
            if b & seen:
                raise InvalidConfigError("blocks are not disjoint")
            seen |= b
        if not self.blocks:
            raise InvalidConfigError("need at least one block")


def procedure_one(cfg: ProcedureOneConfig, rng: np.random.Generator) -> float:
    """One run: sum over blocks of |f(y, z) - f(y, z~_i)|.

    rho is uniform on the nodes, z uniform on U, and z~_i ~ N_{rho,B_i}(z).
    """
    n = cfg.f.n
    rho = float(cfg.nodes.nodes[rng.integers(len(cfg.nodes.nodes))])
    z_bits = rng.integers(0, 2, size=n).astype(bool)
    z = int(np.left_shift(np.int64(1), np.flatnonzero(z_bits).astype(np.int64)).sum())
    z = (z & cfg.U) | cfg.y
    points = [z]
    for b in cfg.blocks:
        zt = sample_noisy(z, rho, b, rng, n=n)
        assert (zt ^ z) & ~b == 0
        points.append(zt)
    vals = evaluate(cfg.f, np.array(points, dtype=np.int64))
    return float(np.abs(vals[0] - vals[1:]).sum())


def exceedance_rate(
    cfg: ProcedureOneConfig, trials: int, seed: int, workers: int = 1
) -> RateEstimate:
    """Fraction of runs whose return exceeds ``cfg.threshold``; trial t uses rng (seed, t)."""
    if trials <= 0:
        raise DomainError("trials must be positive")
    returns = map_trials(partial(procedure_one, cfg), trials, seed, workers)
    return rate_estimate(sum(r > cfg.threshold for r in returns), trials)


def build_procedure_config(
    f: FourierExpansion,
    U: int,
    y: int,
    L: int,
    d: int,
    k: int | None = None,
    W: float = DEFAULT_W,
    threshold: float | None = None,
) -> ProcedureOneConfig:
    """Assemble a config from an alive set and assignment.

    SMALL_y is computed from the restriction of f, then split into L blocks
    of near-equal linear weight with the balanced partition.  ``k`` defaults
    to the degree of f and ``threshold`` to 15 d^2.
    """
    if k is None:
        k = max(f.degree, 1)
    r = Restriction(f.n, U, y)
    f_y = restrict(f, r)
    small = classify_small(f_y, U, influences(f), W, k)
    coords = [j for j in range(f.n) if (small >> j) & 1]
    weights = [f_y[1 << j] ** 2 for j in coords]
    part = balanced_partition(weights, L)
    blocks = tuple(mask_of(coords[i] for i in b) for b in part.buckets)
    if threshold is None:
        threshold = 15.0 * d * d
    return ProcedureOneConfig(
        f, U, y, blocks, interpolation_nodes(k), threshold, small,
        params={"L": L, "d": d, "k": k, "W": W},
    )

