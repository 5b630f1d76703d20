"""Dense and sparse Fourier representations of functions on {-1, +1}^n.

Points of the cube are encoded as integers: bit ``i`` of an index is 1 when
coordinate ``i`` equals -1 and 0 when it equals +1.  With this encoding the
character of a subset mask ``S`` is ``chi_S(x) = (-1) ** popcount(S & x)``.
Coordinates are numbered from 0.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import CapacityError, DomainError

DENSE_LIMIT = 24
MAX_N = 62  # masks must fit in int64 for the vectorised paths
PRUNE_TOL = 1e-14


def popcount(a):
    """Population count of an int or an integer ndarray."""
    if isinstance(a, (int, np.integer)):
        return int(a).bit_count()
    return np.bitwise_count(np.asarray(a, dtype=np.int64)).astype(np.int64)


def chi(mask, x):
    """Character chi_S evaluated at the encoded point(s) ``x``."""
    if isinstance(mask, (int, np.integer)) and isinstance(x, (int, np.integer)):
        return -1 if (int(mask) & int(x)).bit_count() & 1 else 1
    return 1 - 2 * (popcount(np.bitwise_and(mask, x)) & 1)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_of(coords: Iterable[int]) -> int:
    m = 0
    for i in coords:
        m |= 1 << int(i)
    return m


def coords_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _check_dense(n: int, limit: int = DENSE_LIMIT) -> None:
    if n > limit:
        raise CapacityError(f"n={n} exceeds the dense limit {limit}")


@dataclass(frozen=True)
class TruthTable:
    """The 2**n values of a function, indexed by encoded point."""

    n: int
    values: np.ndarray
    bounded: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("n must be nonnegative")
        _check_dense(self.n)
        vals = np.array(self.values, dtype=float)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} values, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.bounded and (vals.min() < -1e-12 or vals.max() > 1 + 1e-12):
            raise DomainError("table flagged bounded has values outside [0, 1]")

    @classmethod
    def from_callable(cls, n: int, func, bounded: bool = False) -> "TruthTable":
        """Tabulate ``func`` which receives a tuple of +-1 ints."""
        _check_dense(n)
        vals = [func(point_to_signs(idx, n)) for idx in range(1 << n)]
        return cls(n, np.array(vals, dtype=float), bounded)

    def __getitem__(self, idx):
        return self.values[idx]

    def mean(self) -> float:
        return float(self.values.mean())


def point_to_signs(idx: int, n: int) -> tuple[int, ...]:
    return tuple(-1 if (idx >> i) & 1 else 1 for i in range(n))


def signs_to_point(signs: Iterable[int]) -> int:
    return mask_of(i for i, s in enumerate(signs) if s == -1)


@dataclass(frozen=True)
class FourierExpansion:
    """Sparse map from subset masks to Fourier coefficients.

    Absent masks have coefficient zero.  Instances are immutable; the
    ``bounded`` flag records that the caller vouches for f(x) in [0, 1].
    """

    n: int
    coeffs: Mapping[int, float] = field(default_factory=dict)
    bounded: bool = False

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise CapacityError(f"n={self.n} outside supported range [0, {MAX_N}]")
        limit = 1 << self.n
        clean = {}
        for m, c in dict(self.coeffs).items():
            m = int(m)
            if m < 0 or m >= limit:
                raise ValueError(f"mask {m:#x} has bits outside n={self.n}")
            c = float(c)
            if c != 0.0:
                clean[m] = c
        object.__setattr__(self, "coeffs", MappingProxyType(dict(sorted(clean.items()))))

    def __reduce__(self):
        return (FourierExpansion, (self.n, dict(self.coeffs), self.bounded))

    @cached_property
    def masks(self) -> np.ndarray:
        return np.fromiter(self.coeffs.keys(), dtype=np.int64, count=len(self.coeffs))

    @cached_property
    def values(self) -> np.ndarray:
        return np.fromiter(self.coeffs.values(), dtype=float, count=len(self.coeffs))

    @cached_property
    def sizes(self) -> np.ndarray:
        return popcount(self.masks)

    def __getitem__(self, mask: int) -> float:
        return self.coeffs.get(int(mask), 0.0)

    def __len__(self):
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        return int(self.sizes.max()) if len(self.coeffs) else 0

    @property
    def mean(self) -> float:
        return self.coeffs.get(0, 0.0)

    def support(self) -> int:
        """Mask of coordinates appearing in some nonzero term."""
        out = 0
        for m in self.coeffs:
            out |= m
        return out

    def with_coeffs(self, coeffs: Mapping[int, float], bounded: bool | None = None):
        return FourierExpansion(self.n, coeffs, self.bounded if bounded is None else bounded)

    def scaled(self, a: float) -> "FourierExpansion":
        return self.with_coeffs({m: a * c for m, c in self.coeffs.items()}, bounded=False)

    def __add__(self, other: "FourierExpansion") -> "FourierExpansion":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0.0) + c
        return FourierExpansion(self.n, out)

    def __sub__(self, other: "FourierExpansion") -> "FourierExpansion":
        return self + other.scaled(-1.0)

    def max_abs_diff(self, other: "FourierExpansion") -> float:
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self[m] - other[m]) for m in keys), default=0.0)

    def pruned(self, tol: float = PRUNE_TOL) -> "FourierExpansion":
        return self.with_coeffs({m: c for m, c in self.coeffs.items() if abs(c) >= tol})


def fwht(a) -> np.ndarray:
    """Unnormalised Walsh-Hadamard butterfly along the last axis.

    Returns a new array; the butterfly runs in place on that copy.
    """
    out = np.array(a, dtype=float, copy=True)
    size = out.shape[-1]
    if size & (size - 1):
        raise ValueError("last axis length must be a power of two")
    lead = out.shape[:-1]
    h = 1
    while h < size:
        v = out.reshape(*lead, size // (2 * h), 2, h)
        lo = v[..., 0, :].copy()
        v[..., 0, :] += v[..., 1, :]
        v[..., 1, :] = lo - v[..., 1, :]
        h *= 2
    return out


def _from_dense(n: int, spectrum: np.ndarray, bounded: bool, prune: float) -> FourierExpansion:
    idx = np.flatnonzero(np.abs(spectrum) >= prune) if prune > 0 else np.flatnonzero(spectrum)
    return FourierExpansion(n, dict(zip(idx.tolist(), spectrum[idx].tolist())), bounded)


def wht_forward(t: TruthTable, prune: float = PRUNE_TOL) -> FourierExpansion:
    """Fourier coefficients f^(S) = 2^-n sum_x f(x) chi_S(x)."""
    _check_dense(t.n)
    spectrum = fwht(t.values) / float(1 << t.n)
    return _from_dense(t.n, spectrum, t.bounded, prune)


def dense_spectrum(f: FourierExpansion) -> np.ndarray:
    _check_dense(f.n)
    out = np.zeros(1 << f.n)
    out[f.masks] = f.values
    return out


def wht_inverse(f: FourierExpansion) -> TruthTable:
    """Tabulate sum_S f^(S) chi_S(x) at every point of the cube."""
    return TruthTable(f.n, fwht(dense_spectrum(f)))


def evaluate(f: FourierExpansion, x) -> float:
    """Evaluate at one encoded point, or at an array of points."""
    if isinstance(x, (int, np.integer)):
        if not len(f):
            return 0.0
        return float(chi(f.masks, int(x)) @ f.values)
    return evaluate_many(f, x)


def evaluate_many(f: FourierExpansion, xs, chunk: int = 1 << 20) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.int64).ravel()
    if not len(f):
        return np.zeros(len(xs))
    out = np.empty(len(xs))
    step = max(1, chunk // max(1, len(f)))
    for start in range(0, len(xs), step):
        block = xs[start:start + step]
        out[start:start + step] = chi(f.masks[None, :], block[:, None]) @ f.values
    return out


def variance(f: FourierExpansion) -> float:
    v = f.values[f.masks != 0]
    return float(v @ v)


def second_moment(f: FourierExpansion) -> float:
    return float(f.values @ f.values)


def influence(f: FourierExpansion, i: int) -> float:
    """Sum of squared coefficients over sets containing ``i``."""
    if not 0 <= i < f.n:
        raise IndexError(f"coordinate {i} out of range for n={f.n}")
    sel = (f.masks >> i) & 1 == 1
    v = f.values[sel]
    return float(v @ v)


def influences(f: FourierExpansion) -> np.ndarray:
    """All n coordinate influences as an array."""
    out = np.zeros(f.n)
    sq = f.values ** 2
    for i in range(f.n):
        out[i] = sq[(f.masks >> i) & 1 == 1].sum()
    return out


def total_influence(f: FourierExpansion) -> float:
    return float(f.sizes @ (f.values ** 2))


def level_weights(f: FourierExpansion) -> np.ndarray:
    """Entry k is the Fourier weight on sets of size exactly k."""
    return np.bincount(f.sizes, weights=f.values ** 2, minlength=f.n + 1)


def weight_above_level(f: FourierExpansion, k: int) -> float:
    v = f.values[f.sizes > k]
    return float(v @ v)


def noise_operator(f: FourierExpansion, rho: float) -> FourierExpansion:
    """T_rho: scale the coefficient on S by rho ** |S|."""
    if not -1.0 <= rho <= 1.0:
        raise DomainError(f"rho={rho} outside [-1, 1]")
    scaled = f.values * np.power(float(rho), f.sizes)
    bounded = f.bounded and rho >= 0
    return FourierExpansion(f.n, dict(zip(f.masks.tolist(), scaled.tolist())), bounded)


# function-spec text format -------------------------------------------------

_HEAD = re.compile(r"^\s*(truthtable|fourier)\s+n\s*=\s*(\d+)\s+(values|terms)\s*=\s*(.*)$", re.S)


def parse_function_spec(text: str) -> FourierExpansion | TruthTable:
    """Parse ``truthtable n=.. values=..`` or ``fourier n=.. terms=mask:coeff,..``.

    Masks in the fourier form are hexadecimal, with or without ``0x``.
    Blank lines and ``#`` comments are ignored.
    """
    body = " ".join(
        line.split("#", 1)[0].strip() for line in text.splitlines()
    ).strip()
    m = _HEAD.match(body)
    if not m:
        raise ValueError("unrecognised function spec")
    kind, n, key, rest = m.group(1), int(m.group(2)), m.group(3), m.group(4)
    items = [s for s in re.split(r"[,\s]+", rest.strip()) if s]
    if kind == "truthtable":
        if key != "values":
            raise ValueError("truthtable spec needs values=")
        return TruthTable(n, np.array([float(s) for s in items]))
    if key != "terms":
        raise ValueError("fourier spec needs terms=")
    coeffs: dict[int, float] = {}
    for item in items:
        mask, coeff = item.split(":")
        key_mask = int(mask, 16)
        coeffs[key_mask] = coeffs.get(key_mask, 0.0) + float(coeff)
    return FourierExpansion(n, coeffs)


def format_function_spec(obj: FourierExpansion | TruthTable) -> str:
    if isinstance(obj, TruthTable):
        vals = ",".join(repr(float(v)) for v in obj.values)
        return f"truthtable n={obj.n} values={vals}"
    terms = ",".join(f"{m:x}:{c!r}" for m, c in obj.coeffs.items())
    return f"fourier n={obj.n} terms={terms}"


def as_expansion(obj: FourierExpansion | TruthTable) -> FourierExpansion:
    return wht_forward(obj) if isinstance(obj, TruthTable) else obj


def is_bounded(f: FourierExpansion, tol: float = 1e-9) -> bool:
    """Scan all 2^n points and check f(x) in [0, 1]."""
    vals = wht_inverse(f).values
    return bool(vals.min() >= -tol and vals.max() <= 1 + tol)
