"""Enumeration-versus-closed-form verification suites behind ``boolrestrict verify``.

Each suite returns a :class:`SuiteResult`; the fixtures are a small corpus of
family members together with truth tables computed once at load time.  With
``inject_fault`` one fixture coefficient is perturbed after its table has
been recorded, so every table-backed suite should then fail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import checks
from .experiments import enumerate_identities
from .families import generate
from .noise import interpolation_nodes, minimax_linear_extraction, sample_noisy_batch
from .partition import balanced_partition
from .querytree import evaluate_tree, greedy_influence_tree, tree_error
from .restrictions import (
    RestrictionDistribution,
    expected_level_one_mass,
    expected_restricted_variance,
    expected_tail_above,
    restrict,
    restrict_table,
    sample_restriction,
)
from .sensitivity import block_sensitivity
from .spectral import (
    FourierExpansion,
    TruthTable,
    dense_spectrum,
    influences,
    noise_operator,
    second_moment,
    variance,
    wht_forward,
    wht_inverse,
)

CORPUS = (
    "constant:n=2,c=0.25",
    "dictator:n=3,i=1",
    "parity_scaled:n=4,m=3",
    "tribes:w=2,t=2",
    "tribes:w=2,t=3",
    "and_or_tree:h=2",
    "recursive_maj3:h=1",
    "random_dtree:depth=3,n=6,seed=1",
    "smoothed_random:n=6,rho=0.5,seed=2",
    "convex_mixture:0.5*dictator:n=4 + 0.5*parity_scaled:n=4,m=2",
)

TOL = 1e-10


@dataclass(frozen=True)
class Fixture:
    name: str
    f: FourierExpansion
    table: TruthTable
    degree: int


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    checks: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}: {self.checks} checks{tail}"


def load_fixtures(inject_fault: bool = False) -> list[Fixture]:
    out = []
    for spec in CORPUS:
        f, deg = generate(spec)
        out.append(Fixture(spec, f, wht_inverse(f), deg))
    if inject_fault:
        fx = out[3]
        coeffs = dict(fx.f.coeffs)
        coeffs[1] = coeffs.get(1, 0.0) + 1e-3
        out[3] = Fixture(fx.name, fx.f.with_coeffs(coeffs), fx.table, fx.degree)
    return out


def _random_table(rng: np.random.Generator, n: int) -> TruthTable:
    return TruthTable(n, rng.random(1 << n), bounded=True)


class _Tally:
    def __init__(self, name: str):
        self.name = name
        self.count = 0
        self.worst = 0.0
        self.failures: list[str] = []

    def close(self, label: str, got: float, want: float, tol: float = TOL) -> None:
        self.count += 1
        err = abs(got - want)
        self.worst = max(self.worst, err)
        if not err <= tol:
            self.failures.append(f"{label}: {got!r} vs {want!r}")

    def holds(self, label: str, ok: bool) -> None:
        self.count += 1
        if not ok:
            self.failures.append(label)

    def result(self) -> SuiteResult:
        if self.failures:
            extra = f" (+{len(self.failures) - 1} more)" if len(self.failures) > 1 else ""
            return SuiteResult(self.name, False, self.count, self.failures[0] + extra)
        return SuiteResult(self.name, True, self.count, f"max error {self.worst:.2e}")


def suite_transform(fixtures, rng) -> SuiteResult:
    t = _Tally("transform")
    for fx in fixtures:
        dense = np.abs(wht_inverse(fx.f).values - fx.table.values).max()
        t.close(fx.name, float(dense), 0.0, 1e-12)
    for _ in range(20):
        tab = _random_table(rng, int(rng.integers(1, 11)))
        back = wht_inverse(wht_forward(tab, prune=0.0)).values
        t.close("roundtrip", float(np.abs(back - tab.values).max()), 0.0, 1e-12)
    return t.result()


def suite_parseval(fixtures, rng) -> SuiteResult:
    t = _Tally("parseval")
    for fx in fixtures:
        t.close(fx.name, second_moment(fx.f), float(np.mean(fx.table.values ** 2)))
        t.close(fx.name + " variance", variance(fx.f), float(np.var(fx.table.values)))
    return t.result()


def suite_influence(fixtures, rng) -> SuiteResult:
    t = _Tally("influence")
    for fx in fixtures:
        vals = fx.table.values
        idx = np.arange(len(vals))
        inf = influences(fx.f)
        for i in range(fx.f.n):
            pointwise = float(np.mean(((vals - vals[idx ^ (1 << i)]) / 2) ** 2))
            t.close(f"{fx.name} coordinate {i}", float(inf[i]), pointwise)
    return t.result()


def suite_restrict(fixtures, rng) -> SuiteResult:
    t = _Tally("restrict")
    for fx in fixtures:
        dist = RestrictionDistribution(fx.f.n, 0.5)
        for _ in range(10):
            r = sample_restriction(dist, rng)
            spectral = dense_spectrum(restrict(fx.f, r))
            table = dense_spectrum(wht_forward(restrict_table(fx.table, r), prune=0.0))
            t.close(f"{fx.name} {r.to_line()}", float(np.abs(spectral - table).max()), 0.0, 1e-12)
    return t.result()


def suite_expectations(fixtures, rng) -> SuiteResult:
    t = _Tally("expectations")
    for fx in fixtures:
        if fx.f.n > 6:
            continue
        p = float(rng.uniform(0.1, 0.9))
        k = int(rng.integers(0, fx.f.n + 1))
        frozen = int(rng.integers(0, 1 << fx.f.n))
        exact = enumerate_identities(fx.table, p, k, frozen)
        t.close(f"{fx.name} variance", expected_restricted_variance(fx.f, p), exact["variance"])
        t.close(f"{fx.name} tail", expected_tail_above(fx.f, p, k), exact["tail"])
        t.close(f"{fx.name} level one", expected_level_one_mass(fx.f, frozen, k, p), exact["level_one"])
        for q in np.linspace(0.05, 1.0, 20):
            t.holds(f"{fx.name} E[Var] >= p Var at p={q:.2f}",
                    expected_restricted_variance(fx.f, q) >= q * variance(fx.f) - 1e-12)
    return t.result()


def suite_numeric(fixtures, rng) -> SuiteResult:
    t = _Tally("numeric")
    for k in range(1, 21):
        p = 2.0 ** -k
        n = np.arange(2 ** k, 2 ** (k + 1), dtype=float)
        worst = float((n * p * np.exp((n - 1) * np.log1p(-p))).min()) if k > 0 else 0.0
        t.holds(f"n p (1-p)^(n-1) >= 1/20 at p=2^-{k}", worst >= 1 / 20)
    for _ in range(200):
        upper = float(rng.uniform(0.5, 4.0))
        x = rng.beta(rng.uniform(0.2, 3), rng.uniform(0.2, 3), size=200) * upper
        lhs, rhs = checks.reverse_markov(x, upper)
        t.holds("reverse Markov", lhs >= rhs - 1e-12)
    return t.result()


def suite_block_sensitivity(fixtures, rng) -> SuiteResult:
    t = _Tally("block_sensitivity")
    for fx in fixtures:
        if fx.f.n > 10:
            continue
        bs = block_sensitivity(fx.table)
        t.holds(f"{fx.name}: bs={bs:.4g} > 6 d^2", bs <= 6 * fx.degree ** 2 + 1e-9)
    return t.result()


def suite_partition(fixtures, rng) -> SuiteResult:
    t = _Tally("partition")
    for _ in range(200):
        # weights in [1/2, 1] with L <= m/4 always satisfy max <= total/(2L)
        m = int(rng.integers(4, 40))
        L = int(rng.integers(1, m // 4 + 1))
        w = rng.uniform(0.5, 1.0, size=m)
        total = math.fsum(w)
        part = balanced_partition(w.tolist(), L)
        sums = part.sums(w.tolist())
        t.holds(f"partition m={m} L={L}",
                part.is_partition_of(m) and min(sums) >= total / (2 * L) - 1e-12)
    return t.result()


def suite_interpolation(fixtures, rng) -> SuiteResult:
    t = _Tally("interpolation")
    for k in range(1, 9):
        nodes = interpolation_nodes(k)
        opt = minimax_linear_extraction(nodes.nodes, k, two_sided=True)
        t.holds(f"two-sided minimax at k={k}: {opt:.4g}", opt >= 1 / (2 * (k + 1)) - 1e-9)
        for _ in range(10):
            a = rng.normal(size=k + 1)
            a[0] = 0.0
            vals = np.polyval(a[::-1], nodes.nodes)
            t.close(f"extraction k={k}", nodes.extract_linear(vals), a[1], 1e-9)
    return t.result()


def suite_noise(fixtures, rng) -> SuiteResult:
    t = _Tally("noise")
    for fx in fixtures:
        n = fx.f.n
        S = int(rng.integers(0, 1 << n))
        x = int(rng.integers(0, 1 << n))
        z = sample_noisy_batch(x, 0.3, S, rng, 2000, n)
        t.holds(f"{fx.name}: resampling left S", bool(np.all((z ^ x) & ~S == 0)))
        rho = float(rng.uniform(-1, 1))
        dist = checks.noise_distribution(n, x, rho)
        t.close(f"{fx.name} T_rho at x", float(dist @ fx.table.values),
                float(wht_inverse(noise_operator(fx.f, rho)).values[x]))
    return t.result()


def suite_tree(fixtures, rng) -> SuiteResult:
    t = _Tally("tree")
    for fx in fixtures:
        idx = np.arange(1 << fx.f.n)
        for budget in range(0, min(fx.f.n, 4) + 1):
            tree = greedy_influence_tree(fx.f, 0.0, budget)
            dense = float(np.mean((fx.table.values - [evaluate_tree(tree, int(i)) for i in idx]) ** 2))
            t.close(f"{fx.name} budget {budget}", tree_error(fx.f, tree), dense)
    return t.result()


SUITES = {
    "transform": suite_transform,
    "parseval": suite_parseval,
    "influence": suite_influence,
    "restrict": suite_restrict,
    "expectations": suite_expectations,
    "numeric": suite_numeric,
    "block_sensitivity": suite_block_sensitivity,
    "partition": suite_partition,
    "interpolation": suite_interpolation,
    "noise": suite_noise,
    "tree": suite_tree,
}


def run_verification(scopes=None, seed: int = 0, inject_fault: bool = False) -> list[SuiteResult]:
    """Run the named suites (all by default) on the shipped corpus."""
    names = list(SUITES) if not scopes else list(scopes)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise KeyError(f"unknown scope(s): {', '.join(unknown)}")
    fixtures = load_fixtures(inject_fault)
    results = []
    for i, name in enumerate(names):
        rng = np.random.default_rng([seed, i])
        results.append(SUITES[name](fixtures, rng))
    return results
