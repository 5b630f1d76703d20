import math

import numpy as np
import pytest

import oracles
from boolrestrict.errors import CapacityError, DomainError, InvalidConfigError
from boolrestrict.families import generate
from boolrestrict.noise import (
    DEFAULT_B,
    DEFAULT_K,
    DEFAULT_W,
    ProcedureOneConfig,
    build_procedure_config,
    classify_small,
    exceedance_rate,
    good_threshold,
    interpolation_nodes,
    linear_part,
    minimax_linear_extraction,
    noise_lemma_exceedance,
    noise_lemma_sample,
    procedure_one,
    sample_noisy,
    sample_noisy_batch,
    small_linear_mass,
)
from boolrestrict.restrictions import Restriction, restrict
from boolrestrict.sensitivity import block_sensitivity_at
from boolrestrict.spectral import FourierExpansion, TruthTable, influences, wht_forward, wht_inverse
from boolrestrict.stats import trial_rng


class TestInterpolationNodes:
    def test_k1(self):
        nodes = interpolation_nodes(1)
        np.testing.assert_allclose(nodes.nodes, [-0.5, 0.5])
        np.testing.assert_allclose(nodes.extraction_weights, [-1.0, 1.0])
        assert nodes.weight_norm == pytest.approx(2.0)

    @pytest.mark.parametrize("k", range(1, 13))
    def test_shape_and_range(self, k):
        nodes = interpolation_nodes(k)
        assert len(nodes.nodes) == k + 1
        assert len(np.unique(nodes.nodes)) == k + 1
        assert np.all(np.abs(nodes.nodes) <= 0.5 + 1e-15)
        assert nodes.weight_norm <= 2 * (k + 1) + 1e-9

    def test_k8_weight_norm(self):
        assert interpolation_nodes(8).weight_norm <= 18

    @pytest.mark.parametrize("k", range(1, 9))
    def test_two_sided_minimax(self, k):
        opt = minimax_linear_extraction(interpolation_nodes(k).nodes, k, two_sided=True)
        assert opt >= 1 / (2 * (k + 1))

    def test_k2_and_k8_values(self):
        assert minimax_linear_extraction(interpolation_nodes(2).nodes, 2, two_sided=True) >= 1 / 6
        assert minimax_linear_extraction(interpolation_nodes(8).nodes, 8, two_sided=True) >= 1 / 18

    def test_one_sided_degenerates(self):
        # x - c x^2 is negative at every nonzero node once c is large
        assert minimax_linear_extraction(interpolation_nodes(1).nodes, 1) == pytest.approx(0.5)
        for k in range(2, 9):
            assert minimax_linear_extraction(interpolation_nodes(k).nodes, k) <= 0.0

    @pytest.mark.parametrize("k", range(1, 9))
    def test_extraction_identity(self, k):
        rng = np.random.default_rng(k)
        nodes = interpolation_nodes(k)
        for _ in range(100):
            a = rng.normal(size=k + 1)
            a[0] = 0.0
            vals = np.polynomial.polynomial.polyval(nodes.nodes, a)
            assert nodes.extract_linear(vals) == pytest.approx(a[1], abs=1e-9)
            assert oracles.linear_coefficient_by_solve(nodes.nodes, vals, k) == pytest.approx(a[1], abs=1e-9)

    def test_limits(self):
        with pytest.raises(DomainError):
            interpolation_nodes(0)
        with pytest.raises(CapacityError):
            interpolation_nodes(13)


class TestSampleNoisy:
    def test_rho_one(self):
        rng = np.random.default_rng(0)
        assert all(sample_noisy(0b1011, 1.0, 0b1111, rng, n=4) == 0b1011 for _ in range(50))

    def test_rho_minus_one_antipode(self):
        assert sample_noisy(0b1011, -1.0, 0b1111, np.random.default_rng(0), n=4) == 0b0100

    def test_rho_zero_agreement(self):
        rng = np.random.default_rng(1)
        x = 0b10110
        z = sample_noisy_batch(x, 0.0, 0b11111, rng, 100_000, 5)
        for i in range(5):
            agree = (((z ^ x) >> i) & 1) == 0
            se = math.sqrt(0.25 / len(z))
            assert abs(agree.mean() - 0.5) <= 3 * se

    def test_agreement_rate_general(self):
        rng = np.random.default_rng(2)
        z = sample_noisy_batch(0, 0.4, 0b111, rng, 100_000, 3)
        keep = (z & 1) == 0
        assert abs(keep.mean() - 0.7) <= 4 * math.sqrt(0.21 / len(z))

    def test_never_leaves_S(self):
        rng = np.random.default_rng(3)
        for _ in range(2000):
            n = int(rng.integers(1, 20))
            x, S = int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n))
            z = sample_noisy(x, float(rng.uniform(-1, 1)), S, rng, n=n)
            assert (z ^ x) & ~S == 0

    def test_range(self):
        with pytest.raises(DomainError):
            sample_noisy(0, 1.2, 1, np.random.default_rng(0))


class TestNoiseLemma:
    def test_linear_regression_fixture(self):
        # f = x_1 (signed), S = {1}, x0 with x_1 = +1: outputs are 0 or -2
        f = FourierExpansion(1, {1: 1.0})
        nodes = interpolation_nodes(1)
        assert linear_part(f, 1, 0) == 1.0
        rng = np.random.default_rng(4)
        draws = {noise_lemma_sample(f, 1, 0, nodes, rng) for _ in range(500)}
        assert draws == {0.0, -2.0}
        assert noise_lemma_exceedance(f, 1, 0, nodes, 2000, seed=1).estimate == 0.0

    def test_constant(self):
        f = FourierExpansion(3, {0: 0.7})
        nodes = interpolation_nodes(2)
        rng = np.random.default_rng(5)
        assert all(noise_lemma_sample(f, 7, 3, nodes, rng) == 0.0 for _ in range(100))

    def test_maj3_positive_exceedance(self):
        maj = TruthTable.from_callable(3, lambda x: 1.0 if sum(x) > 0 else -1.0)
        f = wht_forward(maj)
        nodes = interpolation_nodes(3)
        est = noise_lemma_exceedance(f, 0b111, 0b111, nodes, 100_000, seed=2)
        assert est.estimate > 0

    def test_seeded(self):
        f, _ = generate("tribes:w=2,t=2")
        nodes = interpolation_nodes(4)
        a = noise_lemma_exceedance(f, 0b1111, 5, nodes, 500, seed=9)
        b = noise_lemma_exceedance(f, 0b1111, 5, nodes, 500, seed=9)
        assert a == b


class TestSmallAndGood:
    def test_huge_w_takes_all_alive(self):
        f, _ = generate("tribes:w=2,t=3")
        g = restrict(f, Restriction(6, 0b110011, 0b001100))
        assert classify_small(g, 0b110011, influences(f), 1e9, 2) == 0b110011

    def test_tiny_w_only_zero_linear(self):
        f = FourierExpansion(4, {0: 0.5, 1: 0.2, 0b0110: 0.1})
        assert classify_small(f, 0b1111, influences(f), 1e-300, 3) == 0b1110

    def test_against_filter(self):
        rng = np.random.default_rng(6)
        f = wht_forward(TruthTable(10, rng.random(1024), bounded=True))
        alive = int(rng.integers(0, 1024))
        g = restrict(f, Restriction(10, alive, int(rng.integers(0, 1024)) & ~alive))
        inf = influences(f)
        W, k = 0.5, 2
        want = sum(1 << j for j in range(10) if (alive >> j) & 1 and g[1 << j] ** 2 <= W ** k * inf[j])
        assert classify_small(g, alive, inf, W, k) == want

    @pytest.mark.parametrize("spec", ["tribes:w=2,t=3", "random_dtree:depth=3,n=7,seed=2", "and_or_tree:h=2"])
    def test_small_mass_bound(self, spec):
        f, d = generate(spec)
        rng = np.random.default_rng(7)
        inf = influences(f)
        for _ in range(20):
            alive = int(rng.integers(0, 1 << f.n))
            g = restrict(f, Restriction(f.n, alive, int(rng.integers(0, 1 << f.n)) & ~alive))
            small = classify_small(g, alive, inf, DEFAULT_W, d)
            assert small_linear_mass(g, small) <= (2 * DEFAULT_W) ** d

    def test_w_must_be_positive(self):
        with pytest.raises(DomainError):
            classify_small(FourierExpansion(1, {}), 1, [0.0], 0.0, 1)

    def test_good_threshold(self):
        assert good_threshold(0.8, 4) == pytest.approx(0.8 / 160)
        assert good_threshold(0.8, 1) == pytest.approx(0.8 / 80)
        assert good_threshold(0.8, 4, denominator=40) == pytest.approx(0.8 / 80)

    def test_default_constants(self):
        assert (DEFAULT_B, DEFAULT_K, DEFAULT_W) == (4.0, 1.0, 4.0)


class TestProcedureOne:
    def config(self, spec="tribes:w=2,t=2", U=0b1111, y=0, blocks=(0b0011, 0b1100), k=None):
        f, d = generate(spec)
        return ProcedureOneConfig(f, U, y, blocks, interpolation_nodes(k or max(d, 1)), 15 * d * d)

    def test_empty_block_returns_zero(self):
        cfg = self.config(blocks=(0,))
        rng = np.random.default_rng(0)
        assert all(procedure_one(cfg, rng) == 0.0 for _ in range(50))

    def test_constant(self):
        cfg = self.config(spec="constant:n=3,c=0.5", U=0b111, blocks=(0b001, 0b110), k=1)
        assert exceedance_rate(cfg, 200, seed=0).estimate == 0.0

    def test_dictator_rate_zero(self):
        cfg = self.config(spec="dictator:n=3,i=0", U=0b111, blocks=(0b001, 0b010))
        assert exceedance_rate(cfg, 500, seed=1).estimate == 0.0

    def test_validation(self):
        f, _ = generate("tribes:w=2,t=2")
        nodes = interpolation_nodes(2)
        with pytest.raises(InvalidConfigError):
            ProcedureOneConfig(f, 0b0011, 0b0001, (0b01,), nodes, 1.0)  # y overlaps U
        with pytest.raises(InvalidConfigError):
            ProcedureOneConfig(f, 0b0011, 0, (0b0100,), nodes, 1.0)  # block outside U
        with pytest.raises(InvalidConfigError):
            ProcedureOneConfig(f, 0b0111, 0, (0b011, 0b010), nodes, 1.0)  # overlapping blocks
        with pytest.raises(InvalidConfigError):
            ProcedureOneConfig(f, 0b0111, 0, (), nodes, 1.0)
        with pytest.raises(InvalidConfigError):
            ProcedureOneConfig(f, 0b0111, 0, (0b001,), nodes, 1.0, small=0b1000)

    def test_returns_below_block_sensitivity_ceiling(self):
        # every return is a sum over disjoint blocks, so it is at most bs(f, z) <= bs(f)
        f, d = generate("tribes:w=2,t=4")
        t = wht_inverse(f)
        cfg = ProcedureOneConfig(f, 0xFF, 0, (0x03, 0x0C, 0x30, 0xC0), interpolation_nodes(4), 15 * d * d)
        ceiling = max(block_sensitivity_at(t, x).value for x in range(0, 256, 17))
        ceiling = max(ceiling, 6 * d * d)
        for i in range(2000):
            assert procedure_one(cfg, trial_rng(3, i)) <= ceiling + 1e-9

    def test_exceedance_tribes_reported(self):
        f, _ = generate("tribes:w=2,t=4")
        cfg = build_procedure_config(f, 0xFF, 0, L=2, d=4)
        est = exceedance_rate(cfg, 10_000, seed=4)
        assert est.trials == 10_000
        assert est.estimate == 0.0  # returns are bounded by bs(f) <= 6 d^2 < 15 d^2
        lo, hi = est.wilson
        assert lo == 0.0 and hi < 1e-3

    def test_workers_do_not_change_result(self):
        cfg = self.config()
        cfg = ProcedureOneConfig(cfg.f, cfg.U, cfg.y, cfg.blocks, cfg.nodes, 0.3)
        assert exceedance_rate(cfg, 400, seed=5) == exceedance_rate(cfg, 400, seed=5, workers=2)

    def test_build_config(self):
        f, _ = generate("tribes:w=2,t=3")
        cfg = build_procedure_config(f, 0b111111, 0, L=2, d=6)
        assert cfg.threshold == 15 * 36
        covered = 0
        for b in cfg.blocks:
            assert b & covered == 0 and b & ~cfg.small == 0
            covered |= b
        assert cfg.small & ~cfg.U == 0

    def test_trials_positive(self):
        with pytest.raises(DomainError):
            exceedance_rate(self.config(), 0, seed=0)
