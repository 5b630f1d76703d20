"""Bounded test functions with known degree bounds.

Every generator builds a truth table with values in [0, 1] from a
boundedness-preserving construction (Boolean indicators, convex mixtures,
noise smoothing) and transforms it.  Boolean gates read coordinate i as
*true* when x_i = -1 (bit i set in the point index).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .spectral import DENSE_LIMIT, FourierExpansion, TruthTable, noise_operator, wht_forward

FAMILIES = (
    "constant",
    "dictator",
    "parity_scaled",
    "tribes",
    "and_or_tree",
    "recursive_maj3",
    "random_dtree",
    "smoothed_random",
    "convex_mixture",
)


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    components: tuple = ()  # (weight, FamilySpec) pairs for convex_mixture

    def __str__(self):
        if self.name == "convex_mixture":
            return "convex_mixture:" + " + ".join(f"{w!r}*{c}" for w, c in self.components)
        body = ",".join(f"{k}={v}" for k, v in self.params.items())
        if self.seed:
            body = f"{body},seed={self.seed}" if body else f"seed={self.seed}"
        return f"{self.name}:{body}" if body else self.name


def _number(s: str):
    try:
        return int(s)
    except ValueError:
        return float(s)


def parse_family(text: str) -> FamilySpec:
    """Parse strings such as ``tribes:w=2,t=2`` or
    ``convex_mixture:0.5*dictator:n=4 + 0.5*parity_scaled:n=4,m=2``."""
    text = text.strip()
    name, _, body = text.partition(":")
    name = name.strip()
    if name not in FAMILIES:
        raise DomainError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    if name == "convex_mixture":
        parts = []
        for chunk in body.split("+"):
            w, star, sub = chunk.strip().partition("*")
            if not star:
                raise DomainError("mixture components look like weight*family:params")
            parts.append((float(w), parse_family(sub)))
        return FamilySpec(name, components=tuple(parts))
    params = {}
    seed = 0
    for item in filter(None, (s.strip() for s in body.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise DomainError(f"malformed parameter {item!r}")
        if key.strip() == "seed":
            seed = int(val)
        else:
            params[key.strip()] = _number(val.strip())
    return FamilySpec(name, params, seed)


def _bits(n: int) -> np.ndarray:
    """Row j holds the Boolean value (x_i = -1) of every coordinate at point j."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(bool)


def _need(params: dict, key: str, default=None, lo=None, hi=None):
    v = params.get(key, default)
    if v is None:
        raise DomainError(f"missing parameter {key!r}")
    if (lo is not None and v < lo) or (hi is not None and v > hi):
        raise DomainError(f"parameter {key}={v} outside [{lo}, {hi}]")
    return v


def _check_n(n: int) -> None:
    if not 1 <= n <= DENSE_LIMIT:
        raise DomainError(f"n={n} outside [1, {DENSE_LIMIT}]")


def _table(n: int, values) -> FourierExpansion:
    return wht_forward(TruthTable(n, values, bounded=True))


def constant(n: int = 1, c: float = 0.5) -> tuple[FourierExpansion, int]:
    if not 0 <= c <= 1:
        raise DomainError("constant must lie in [0, 1]")
    return FourierExpansion(n, {0: c} if c else {}, bounded=True), 0


def dictator(n: int = 1, i: int = 0, signed: bool = False) -> tuple[FourierExpansion, int]:
    """{0,1} indicator of x_i = -1, or the +-1 character x_i when ``signed``."""
    if not 0 <= i < n:
        raise DomainError("dictator coordinate outside range")
    if signed:
        return FourierExpansion(n, {1 << i: 1.0}), 1
    return FourierExpansion(n, {0: 0.5, 1 << i: -0.5}, bounded=True), 1


def parity_scaled(n: int, m: int | None = None) -> tuple[FourierExpansion, int]:
    """(1 + chi_S)/2 with S the first m coordinates."""
    m = n if m is None else m
    if not 1 <= m <= n:
        raise DomainError("parity size outside [1, n]")
    return FourierExpansion(n, {0: 0.5, (1 << m) - 1: 0.5}, bounded=True), m


def tribes(w: int, t: int) -> tuple[FourierExpansion, int]:
    """OR of t disjoint ANDs of width w."""
    n = w * t
    _check_n(n)
    b = _bits(n).reshape(-1, t, w)
    return _table(n, b.all(axis=2).any(axis=1).astype(float)), n


def and_or_tree(h: int, fanin: int = 2) -> tuple[FourierExpansion, int]:
    """Alternating AND/OR formula of depth h, AND at the root."""
    n = fanin ** h
    _check_n(n)
    vals = _bits(n)
    for level in range(h):
        grouped = vals.reshape(vals.shape[0], -1, fanin)
        use_and = (h - 1 - level) % 2 == 0
        vals = grouped.all(axis=2) if use_and else grouped.any(axis=2)
    return _table(n, vals[:, 0].astype(float)), n


def recursive_maj3(h: int) -> tuple[FourierExpansion, int]:
    n = 3 ** h
    _check_n(n)
    vals = _bits(n).astype(np.int8)
    for _ in range(h):
        vals = (vals.reshape(vals.shape[0], -1, 3).sum(axis=2) >= 2).astype(np.int8)
    return _table(n, vals[:, 0].astype(float)), n


def random_dtree(depth: int, n: int, seed: int = 0) -> tuple[FourierExpansion, int]:
    """Random decision tree of the given depth with {0,1} leaves; degree <= depth."""
    _check_n(n)
    if not 0 <= depth <= n:
        raise DomainError("depth outside [0, n]")
    rng = np.random.default_rng(seed)
    bits = _bits(n)
    out = np.zeros(1 << n)

    def grow(rows: np.ndarray, used: list[int], left: int):
        if left == 0:
            out[rows] = float(rng.integers(0, 2))
            return
        free = [i for i in range(n) if i not in used]
        i = int(rng.choice(free))
        grow(rows[~bits[rows, i]], used + [i], left - 1)
        grow(rows[bits[rows, i]], used + [i], left - 1)

    grow(np.arange(1 << n), [], depth)
    return _table(n, out), depth


def smoothed_random(n: int, rho: float = 0.5, seed: int = 0) -> tuple[FourierExpansion, int]:
    """T_rho applied to a uniformly random {0,1}-valued function."""
    _check_n(n)
    if not 0.0 <= rho <= 1.0:
        raise DomainError("rho outside [0, 1]")
    rng = np.random.default_rng(seed)
    base = _table(n, rng.integers(0, 2, size=1 << n).astype(float))
    return noise_operator(base, rho), n


def convex_mixture(fs, weights) -> FourierExpansion:
    """Coefficientwise sum_i w_i f_i; bounded inputs give a bounded output."""
    fs = list(fs)
    weights = [float(w) for w in weights]
    if len(fs) != len(weights) or not fs:
        raise DomainError("need one weight per function")
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-12:
        raise DomainError("weights must be nonnegative and sum to 1")
    n = fs[0].n
    if any(f.n != n for f in fs):
        raise DomainError("mixture components must share n")
    out: dict[int, float] = {}
    for f, w in zip(fs, weights):
        for m, c in f.coeffs.items():
            out[m] = out.get(m, 0.0) + w * c
    return FourierExpansion(n, out, bounded=all(f.bounded for f in fs))


def generate(spec: FamilySpec | str) -> tuple[FourierExpansion, int]:
    """Build the family member and its declared degree bound."""
    if isinstance(spec, str):
        spec = parse_family(spec)
    p = dict(spec.params)
    name = spec.name
    if name == "constant":
        return constant(int(p.get("n", 1)), float(p.get("c", 0.5)))
    if name == "dictator":
        n = _need(p, "n", 1, 1, 62)
        return dictator(n, _need(p, "i", 0, 0, n - 1), bool(p.get("signed", 0)))
    if name == "parity_scaled":
        n = _need(p, "n", None, 1, 62)
        return parity_scaled(n, p.get("m"))
    if name == "tribes":
        return tribes(_need(p, "w", None, 1), _need(p, "t", None, 1))
    if name == "and_or_tree":
        return and_or_tree(_need(p, "h", None, 1), _need(p, "fanin", 2, 2))
    if name == "recursive_maj3":
        return recursive_maj3(_need(p, "h", None, 1))
    if name == "random_dtree":
        return random_dtree(_need(p, "depth", None, 0), _need(p, "n", None, 1), spec.seed)
    if name == "smoothed_random":
        return smoothed_random(_need(p, "n", None, 1), float(p.get("rho", 0.5)), spec.seed)
    if name == "convex_mixture":
        built = [generate(c) for _, c in spec.components]
        f = convex_mixture([b[0] for b in built], [w for w, _ in spec.components])
        return f, max(b[1] for b in built)
    raise DomainError(f"unknown family {name!r}")

