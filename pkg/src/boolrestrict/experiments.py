"""Seeded restriction experiments, exact enumeration cross-checks and reports."""
from __future__ import annotations

import csv
import io
import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, field
from functools import partial

import numpy as np

from .errors import DomainError
from .querytree import max_influence
from .restrictions import (
    RestrictionDistribution,
    expected_restricted_variance,
    expected_tail_above,
    iter_restrictions,
    restrict,
    sample_restriction,
)
from .sensitivity import influential_set, junta_distance
from .spectral import FourierExpansion, TruthTable, fwht, popcount, variance, weight_above_level
from .stats import Z95, map_trials, mean_and_stderr, rate_estimate

CSV_COLUMNS = (
    "experiment", "statistic", "family", "n", "d", "p", "tau/eps",
    "estimate", "ci_radius", "trials", "seed",
)
EXACT_LIMIT = 8


@dataclass
class Statistic:
    name: str
    estimate: float
    ci_radius: float
    trials: int
    threshold: float | None = None


@dataclass
class ExperimentReport:
    experiment: str
    family: str
    n: int
    d: int
    p: float
    seed: int
    statistics: list[Statistic] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    duration: float = 0.0

    def get(self, name: str) -> Statistic:
        for s in self.statistics:
            if s.name == name:
                return s
        raise KeyError(name)

    def rows(self) -> list[dict]:
        out = []
        for s in self.statistics:
            out.append({
                "experiment": self.experiment,
                "statistic": s.name,
                "family": self.family,
                "n": self.n,
                "d": self.d,
                "p": repr(float(self.p)),
                "tau/eps": "" if s.threshold is None else repr(float(s.threshold)),
                "estimate": repr(float(s.estimate)),
                "ci_radius": repr(float(s.ci_radius)),
                "trials": s.trials,
                "seed": self.seed,
            })
        return out

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        if header:
            writer.writeheader()
        writer.writerows(self.rows())
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=float)


def survival_probability(d: int, survival_c: float) -> float:
    """log(d) / (c d) with the natural log, clipped to [0, 1]."""
    if d < 1 or survival_c <= 0:
        raise DomainError("need d >= 1 and survival_c > 0")
    return min(1.0, max(0.0, math.log(d) / (survival_c * d)))


def _sample_restricted(f: FourierExpansion, dist: RestrictionDistribution, rng):
    return restrict(f, sample_restriction(dist, rng))


def _junta_trial(f, dist, theta, tail_level, rng):
    g = _sample_restricted(f, dist, rng)
    J = influential_set(g, theta)
    return junta_distance(g, J), popcount(J), weight_above_level(g, tail_level)


def _top_influence(g: FourierExpansion) -> float:
    return max_influence(g)[1] if g.n else 0.0


def has_influential(g: FourierExpansion, tau: float) -> bool:
    """Some coordinate has influence at least tau, and strictly positive."""
    top = _top_influence(g)
    return top > 0 and top >= tau


def _aa_trial(f, dist, rng):
    g = _sample_restricted(f, dist, rng)
    return _top_influence(g), variance(g)


def exact_restriction_average(f: FourierExpansion, p: float, fn, frozen: int = 0) -> float:
    """Sum over every restriction of probability * fn(f restricted)."""
    if f.n > EXACT_LIMIT:
        raise DomainError(f"exhaustive enumeration limited to n <= {EXACT_LIMIT}")
    return math.fsum(w * float(fn(restrict(f, r))) for r, w in iter_restrictions(f.n, p, frozen))


def _rate_stat(name, hits, trials, threshold=None) -> Statistic:
    est = rate_estimate(int(hits), trials)
    return Statistic(name, est.estimate, est.ci_radius, trials, threshold)


def _mean_stat(name, samples, threshold=None) -> Statistic:
    m, se = mean_and_stderr(samples)
    return Statistic(name, m, Z95 * se, len(samples), threshold)


def junta_experiment(
    f: FourierExpansion,
    d: int,
    *,
    family: str = "custom",
    survival_c: float = 1.0,
    theta: float = 1e-3,
    eps: float = 1e-2,
    trials: int = 10_000,
    seed: int = 0,
    p: float | None = None,
    tail_level: int | None = None,
    workers: int = 1,
    exact: bool = True,
) -> ExperimentReport:
    """Fraction of random restrictions within eps of their theta-influential junta."""
    if trials <= 0:
        raise DomainError("trials must be positive")
    start = time.perf_counter()
    if p is None:
        p = survival_probability(d, survival_c)
    if tail_level is None:
        tail_level = max(1, round(math.log(max(d, 1))))
    dist = RestrictionDistribution(f.n, p)
    res = map_trials(partial(_junta_trial, f, dist, theta, tail_level), trials, seed, workers)
    dists = np.array([r[0] for r in res])
    sizes = np.array([r[1] for r in res], dtype=int)
    tails = np.array([r[2] for r in res])
    stats = [
        _rate_stat("junta_fraction", (dists <= eps).sum(), trials, eps),
        _mean_stat("mean_junta_size", sizes),
        _mean_stat("mean_junta_distance", dists),
        _mean_stat("mean_tail_above_level", tails, tail_level),
        Statistic("expected_tail_above_level", expected_tail_above(f, p, tail_level), 0.0, 0, tail_level),
    ]
    if exact and f.n <= EXACT_LIMIT:
        val = exact_restriction_average(
            f, p, lambda g: junta_distance(g, influential_set(g, theta)) <= eps
        )
        stats.append(Statistic("exact_junta_fraction", val, 0.0, 0, eps))
    hist = np.bincount(sizes, minlength=1)
    report = ExperimentReport(
        "junta-exp", family, f.n, d, p, seed, stats,
        params={"survival_c": survival_c, "theta": theta, "eps": eps,
                "tail_level": tail_level, "trials": trials},
        extras={"junta_size_histogram": hist.tolist(), "variance": variance(f)},
    )
    report.duration = time.perf_counter() - start
    return report


def aa_experiment(
    f: FourierExpansion,
    d: int,
    *,
    family: str = "custom",
    survival_c: float = 1.0,
    tau: float | None = None,
    tau_exponent: float = 4.0,
    trials: int = 10_000,
    seed: int = 0,
    p: float | None = None,
    workers: int = 1,
    exact: bool = True,
) -> ExperimentReport:
    """Probability that a random restriction keeps an influential coordinate.

    Also estimates Pr[Var f_rho >= p Var f / 2], the mean restricted variance
    against its closed form, and echoes the lower-bound form
    Var[f] log(d) / (50 c d) at the supplied constant.
    """
    if trials <= 0:
        raise DomainError("trials must be positive")
    start = time.perf_counter()
    var_f = variance(f)
    if d >= 1 and var_f < 1.0 / d:
        warnings.warn(f"Var[f]={var_f:.4g} is below 1/d={1.0 / d:.4g}", stacklevel=2)
    if p is None:
        p = survival_probability(d, survival_c)
    if tau is None:
        tau = var_f ** 2 / float(d) ** tau_exponent
    var_bar = p * var_f / 2
    dist = RestrictionDistribution(f.n, p)
    res = map_trials(partial(_aa_trial, f, dist), trials, seed, workers)
    max_inf = np.array([r[0] for r in res])
    rvars = np.array([r[1] for r in res])
    log_d = math.log(d) if d >= 1 else 0.0
    stats = [
        _rate_stat("influential", ((max_inf >= tau) & (max_inf > 0)).sum(), trials, tau),
        _rate_stat("high_variance", (rvars >= var_bar).sum(), trials, var_bar),
        _mean_stat("mean_restricted_variance", rvars),
        Statistic("expected_restricted_variance", expected_restricted_variance(f, p), 0.0, 0),
        Statistic("reverse_markov_bound", var_bar, 0.0, 0),
        Statistic("lower_bound_form", var_f * log_d / (50.0 * survival_c * d), 0.0, 0),
    ]
    if exact and f.n <= EXACT_LIMIT:
        stats.append(Statistic(
            "exact_influential",
            exact_restriction_average(f, p, lambda g: has_influential(g, tau)),
            0.0, 0, tau,
        ))
        stats.append(Statistic(
            "exact_high_variance",
            exact_restriction_average(f, p, lambda g: variance(g) >= var_bar),
            0.0, 0, var_bar,
        ))
    report = ExperimentReport(
        "aa-exp", family, f.n, d, p, seed, stats,
        params={"survival_c": survival_c, "tau": tau, "tau_exponent": tau_exponent,
                "trials": trials},
        extras={"variance": var_f},
    )
    report.duration = time.perf_counter() - start
    return report


def restricted_spectra(t: TruthTable, alive: int) -> np.ndarray:
    """Spectra of every restriction with the given alive set, one row per assignment.

    Columns index subsets of the alive coordinates in compressed order, so
    only set sizes are meaningful.  Rows are uniform over assignments.
    """
    n = t.n
    cube = t.values.reshape((2,) * n) if n else t.values
    alive_axes = [n - 1 - i for i in range(n) if (alive >> i) & 1]
    dead_axes = [n - 1 - i for i in range(n) if not (alive >> i) & 1]
    k = len(alive_axes)
    mat = np.transpose(cube, dead_axes + alive_axes).reshape(1 << (n - k), 1 << k)
    return fwht(mat) / float(1 << k)


def enumerate_identities(t: TruthTable, p: float, tail_level: int, frozen: int = 0,
                         level_one_p: float | None = None) -> dict:
    """Exhaustive averages of restricted variance, tail and level-one mass.

    Variance and tail use survival ``p`` on all coordinates; the level-one
    mass uses ``frozen`` dead and survival ``level_one_p`` elsewhere.
    """
    n = t.n
    if level_one_p is None:
        level_one_p = p
    out = {"variance": 0.0, "tail": 0.0, "level_one": 0.0}
    free = ((1 << n) - 1) & ~frozen
    for alive in range(1 << n):
        k = alive.bit_count()
        spectra = restricted_spectra(t, alive)
        sizes = np.bitwise_count(np.arange(1 << k, dtype=np.int64))
        sq = (spectra ** 2).mean(axis=0)
        w_all = p ** k * (1 - p) ** (n - k)
        out["variance"] += w_all * sq[sizes > 0].sum()
        out["tail"] += w_all * sq[sizes > tail_level].sum()
        if alive & ~free == 0:
            nf = free.bit_count()
            w_free = level_one_p ** k * (1 - level_one_p) ** (nf - k)
            out["level_one"] += w_free * sq[sizes == 1].sum()
    return {key: float(v) for key, v in out.items()}
