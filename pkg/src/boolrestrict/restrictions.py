"""Restrictions of functions on the cube and exact expectations over random ones.

A restriction keeps an *alive* set of coordinates free and fixes the rest
according to an assignment mask (bit set means the coordinate is fixed to
-1).  Restricted functions keep the ambient dimension ``n``; they simply do
not depend on dead coordinates, so coordinate indices stay meaningful.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

from .errors import DomainError, InvalidRestrictionError
from .spectral import (
    PRUNE_TOL,
    FourierExpansion,
    TruthTable,
    chi,
    full_mask,
    popcount,
)


@dataclass(frozen=True)
class Restriction:
    n: int
    alive: int
    assignment: int = 0

    def __post_init__(self):
        top = full_mask(self.n)
        if self.alive & ~top or self.assignment & ~top:
            raise InvalidRestrictionError("masks have bits outside the cube")
        if self.alive & self.assignment:
            raise InvalidRestrictionError(
                f"alive {self.alive:#x} overlaps assignment {self.assignment:#x}"
            )

    @property
    def dead(self) -> int:
        return full_mask(self.n) & ~self.alive

    @property
    def n_alive(self) -> int:
        return popcount(self.alive)

    def point(self, free_bits: int) -> int:
        """Full cube point agreeing with the assignment off the alive set."""
        return (free_bits & self.alive) | self.assignment

    def to_line(self) -> str:
        return f"restriction alive={self.alive:#x} y={self.assignment:#x}"

    @classmethod
    def from_line(cls, n: int, line: str) -> "Restriction":
        m = re.fullmatch(r"\s*restriction\s+alive=(\S+)\s+y=(\S+)\s*", line)
        if not m:
            raise ValueError(f"cannot parse restriction line: {line!r}")
        return cls(n, int(m.group(1), 16), int(m.group(2), 16))

    @classmethod
    def identity(cls, n: int) -> "Restriction":
        return cls(n, full_mask(n), 0)


@dataclass(frozen=True)
class RestrictionDistribution:
    """Each coordinate outside ``frozen`` survives independently w.p. ``survival_p``.

    Frozen coordinates are always dead.  Dead coordinates receive uniform
    independent signs.
    """

    n: int
    survival_p: float
    frozen: int = 0

    def __post_init__(self):
        if not 0.0 <= self.survival_p <= 1.0:
            raise DomainError(f"survival probability {self.survival_p} outside [0, 1]")
        if self.frozen & ~full_mask(self.n):
            raise InvalidRestrictionError("frozen set has bits outside the cube")

    @property
    def free(self) -> int:
        return full_mask(self.n) & ~self.frozen


def _bit_weights(n: int) -> np.ndarray:
    return np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))


def sample_restriction(dist: RestrictionDistribution, rng: np.random.Generator) -> Restriction:
    n = dist.n
    weights = _bit_weights(n)
    survive = rng.random(n) < dist.survival_p
    signs = rng.integers(0, 2, size=n).astype(bool)
    alive = int(weights[survive].sum()) & dist.free
    assignment = int(weights[signs].sum()) & ~alive & full_mask(n)
    return Restriction(n, alive, assignment)


def sample_restrictions(
    dist: RestrictionDistribution, rng: np.random.Generator, size: int
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised sampler returning (alive, assignment) int64 arrays."""
    n = dist.n
    weights = _bit_weights(n)
    survive = rng.random((size, n)) < dist.survival_p
    signs = rng.integers(0, 2, size=(size, n)).astype(bool)
    alive = (survive * weights).sum(axis=1) & dist.free
    assignment = (signs * weights).sum(axis=1) & ~alive & full_mask(n)
    return alive.astype(np.int64), assignment.astype(np.int64)


def restrict(f: FourierExpansion, r: Restriction, prune: float = PRUNE_TOL) -> FourierExpansion:
    """Fourier expansion of f with the dead coordinates fixed.

    Each term f^(V) chi_V contributes f^(V) chi_{V \\ S}(y) to the coefficient
    of V & S.
    """
    if r.n != f.n:
        raise InvalidRestrictionError(f"restriction on n={r.n} applied to n={f.n}")
    if not len(f):
        return f.with_coeffs({})
    targets = f.masks & r.alive
    contrib = f.values * chi(f.masks, r.assignment)
    keys, inverse = np.unique(targets, return_inverse=True)
    sums = np.bincount(inverse, weights=contrib, minlength=len(keys))
    keep = np.abs(sums) >= prune
    return f.with_coeffs(dict(zip(keys[keep].tolist(), sums[keep].tolist())))


def fix_coordinate(f: FourierExpansion, i: int, value: int) -> FourierExpansion:
    """Restrict a single coordinate to ``value`` in {+1, -1}."""
    bit = 1 << i
    return restrict(f, Restriction(f.n, full_mask(f.n) & ~bit, bit if value == -1 else 0))


def restrict_table(t: TruthTable, r: Restriction) -> TruthTable:
    """Truth table of the restricted function, still on n coordinates."""
    idx = np.arange(1 << t.n, dtype=np.int64)
    return TruthTable(t.n, t.values[(idx & r.alive) | r.assignment], t.bounded)


def binomial_tail(m: int, p: float, k: int) -> float:
    """Pr[Bin(m, p) > k] by direct summation of the upper terms."""
    if k >= m:
        return 0.0
    if k < 0:
        return 1.0
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    q = 1.0 - p
    term = q ** m  # pmf(0); running product below gives pmf(j)
    ratio = p / q
    total = 0.0
    for j in range(m + 1):
        if j > k:
            total += term
        term = term * (m - j) / (j + 1) * ratio
    return min(total, 1.0)


def expected_tail_above(f: FourierExpansion, p: float, k: int) -> float:
    """E over a p-random restriction of the restricted weight above level k."""
    if not 0.0 <= p <= 1.0:
        raise DomainError("p outside [0, 1]")
    if k < 0:
        raise DomainError("k must be nonnegative")
    sq = f.values ** 2
    table = {m: binomial_tail(m, p, k) for m in np.unique(f.sizes).tolist()}
    return float(sum(table[s] * w for s, w in zip(f.sizes.tolist(), sq)))


def expected_restricted_variance(f: FourierExpansion, p: float) -> float:
    """E[Var f_rho] = sum over nonempty T of (1 - (1-p)^|T|) f^(T)^2."""
    if not 0.0 <= p <= 1.0:
        raise DomainError("p outside [0, 1]")
    factor = 1.0 - np.power(1.0 - p, f.sizes)
    return float(factor @ (f.values ** 2))


def expected_level_one_mass(
    f: FourierExpansion, frozen: int, k: int, p: float | None = None
) -> float:
    """E[sum_{i in S} f_y^({i})^2] with ``frozen`` dead and survival 2^-k elsewhere.

    Only sets T meeting the free coordinates in exactly one alive point
    contribute, giving m p (1-p)^(m-1) per term with m = |T minus frozen|.
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    if p is None:
        p = 2.0 ** (-k)
    free = full_mask(f.n) & ~frozen
    m = popcount(f.masks & free)
    factor = np.where(m > 0, m * p * np.power(1.0 - p, np.maximum(m - 1, 0)), 0.0)
    return float(factor @ (f.values ** 2))


def level_band_mass(f: FourierExpansion, frozen: int, k: int) -> float:
    """Weight on sets with 2^k <= |T minus frozen| < 2^(k+1)."""
    free = full_mask(f.n) & ~frozen
    m = popcount(f.masks & free)
    sel = (m >= 1 << k) & (m < 1 << (k + 1))
    return float((f.values[sel] ** 2).sum())


def iter_restrictions(
    n: int, p: float, frozen: int = 0
) -> Iterator[tuple[Restriction, float]]:
    """Every restriction with its probability under the distribution.

    There are at most 3^n of them, so this is for small n only.
    """
    free = [i for i in range(n) if not (frozen >> i) & 1]
    for choice in product((0, 1), repeat=len(free)):
        alive = 0
        for i, c in zip(free, choice):
            if c:
                alive |= 1 << i
        k = popcount(alive)
        w_alive = (p ** k) * ((1.0 - p) ** (len(free) - k))
        if w_alive == 0.0:
            continue
        dead = full_mask(n) & ~alive
        n_dead = n - k
        w = w_alive / float(1 << n_dead)
        sub = dead
        while True:
            yield Restriction(n, alive, sub), w
            if sub == 0:
                break
            sub = (sub - 1) & dead
