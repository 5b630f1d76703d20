"""Block sensitivity, junta projections and sensitive-input fractions."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError
from .spectral import (
    FourierExpansion,
    TruthTable,
    influences,
)

BS_LIMIT = 14
_CHUNK_ENTRIES = 1 << 22


@dataclass(frozen=True)
class BlockSensitivityResult:
    value: float
    witness_blocks: tuple[int, ...]


@lru_cache(maxsize=4)
def _dp_layers(n: int):
    """Transition pairs of the submask DP grouped by popcount of the target mask.

    For each mask m the candidates are: leave the lowest coordinate of m
    unused (block 0, remainder m minus that bit), or put it in a block B with
    low(m) in B subset of m (remainder m minus B).  Remainders always have
    smaller popcount, so processing layers in order is a valid schedule.
    """
    layers = []
    size = 1 << n
    pc = [m.bit_count() for m in range(size)]
    by_pc: list[list[int]] = [[] for _ in range(n + 1)]
    for m in range(1, size):
        by_pc[pc[m]].append(m)
    for c in range(1, n + 1):
        targets, blocks, rests = [], [], []
        for m in by_pc[c]:
            low = m & -m
            targets.append(m)
            blocks.append(0)
            rests.append(m ^ low)
            others = m ^ low
            sub = others
            while True:
                b = sub | low
                targets.append(m)
                blocks.append(b)
                rests.append(m ^ b)
                if sub == 0:
                    break
                sub = (sub - 1) & others
        t = np.array(targets, dtype=np.int64)
        starts = np.flatnonzero(np.r_[True, t[1:] != t[:-1]])
        layers.append(
            (t[starts], starts, np.array(blocks, dtype=np.int64), np.array(rests, dtype=np.int64))
        )
    return layers


def _check_bs(t: TruthTable) -> None:
    if t.n > BS_LIMIT:
        raise CapacityError(f"block sensitivity DP limited to n <= {BS_LIMIT}, got {t.n}")


def _best_tables(t: TruthTable, xs: np.ndarray) -> np.ndarray:
    """best[m, j]: max over disjoint blocks inside m of summed |f(x_j) - f(x_j ^ B)|."""
    size = 1 << t.n
    idx = np.arange(size, dtype=np.int64)
    vals = t.values
    delta = np.abs(vals[xs][None, :] - vals[idx[:, None] ^ xs[None, :]])
    best = np.zeros((size, len(xs)))
    for targets, starts, blocks, rests in _dp_layers(t.n):
        cand = delta[blocks] + best[rests]
        best[targets] = np.maximum.reduceat(cand, starts, axis=0)
    return best


def block_sensitivity_at(t: TruthTable, x: int) -> BlockSensitivityResult:
    """Exact bs(f, x) by DP over submasks, O(3^n)."""
    _check_bs(t)
    if t.n == 0:
        return BlockSensitivityResult(0.0, ())
    x = int(x)
    best = _best_tables(t, np.array([x], dtype=np.int64))[:, 0]
    size = 1 << t.n
    delta = np.abs(t.values[x] - t.values[np.arange(size) ^ x])
    blocks = []
    m = size - 1
    while m and best[m] > 0:
        low = m & -m
        if best[m ^ low] == best[m]:
            m ^= low
            continue
        others = m ^ low
        sub = others
        while True:
            b = sub | low
            if delta[b] + best[m ^ b] == best[m]:
                break
            sub = (sub - 1) & others
        blocks.append(b)
        m ^= b
    return BlockSensitivityResult(float(best[size - 1]), tuple(blocks))


def block_sensitivity_profile(t: TruthTable) -> np.ndarray:
    """bs(f, x) for every point x."""
    _check_bs(t)
    size = 1 << t.n
    if t.n == 0:
        return np.zeros(1)
    out = np.empty(size)
    widest = max(len(blocks) for _, _, blocks, _ in _dp_layers(t.n))
    chunk = max(1, _CHUNK_ENTRIES // max(widest, size))
    xs = np.arange(size, dtype=np.int64)
    for start in range(0, size, chunk):
        part = xs[start:start + chunk]
        out[start:start + chunk] = _best_tables(t, part)[size - 1]
    return out


def block_sensitivity(t: TruthTable) -> float:
    return float(block_sensitivity_profile(t).max())


def junta_project(f: FourierExpansion, J: int) -> FourierExpansion:
    """Keep exactly the terms whose set lies inside J (average out the rest)."""
    keep = (f.masks & ~J) == 0
    return f.with_coeffs(dict(zip(f.masks[keep].tolist(), f.values[keep].tolist())))


def junta_distance(f: FourierExpansion, J: int) -> float:
    """Squared L2 distance from f to its projection on J: weight on sets not inside J."""
    out = f.values[(f.masks & ~J) != 0]
    return float(out @ out)


def influential_set(f: FourierExpansion, theta: float) -> int:
    """Mask of coordinates whose influence is at least theta.

    With ``theta == 0`` only coordinates carrying some Fourier mass count.
    """
    if theta < 0:
        raise DomainError("theta must be nonnegative")
    inf = influences(f)
    sel = (inf >= theta) & (inf > 0) if theta == 0 else inf >= theta
    return int(sum(1 << int(i) for i in np.flatnonzero(sel)))


def sensitive_fraction(t: TruthTable, eps: float) -> float:
    """Fraction of points x with some y at Hamming distance <= 1 and |f(x)-f(y)| >= eps."""
    if eps < 0:
        raise DomainError("eps must be nonnegative")
    if eps == 0:
        return 1.0
    idx = np.arange(1 << t.n, dtype=np.int64)
    hit = np.zeros(1 << t.n, dtype=bool)
    for i in range(t.n):
        hit |= np.abs(t.values - t.values[idx ^ (1 << i)]) >= eps
    return float(hit.mean())
