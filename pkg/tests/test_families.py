import numpy as np
import pytest

import oracles
from boolrestrict.errors import DomainError
from boolrestrict.families import (
    FAMILIES,
    FamilySpec,
    constant,
    convex_mixture,
    dictator,
    generate,
    parse_family,
)
from boolrestrict.spectral import is_bounded, second_moment, variance, wht_inverse
from boolrestrict.verify import CORPUS

EXTRA = (
    "dictator:n=5,i=4,signed=1",
    "parity_scaled:n=5",
    "and_or_tree:h=3",
    "and_or_tree:h=2,fanin=3",
    "recursive_maj3:h=2",
    "random_dtree:depth=4,n=8,seed=7",
    "smoothed_random:n=8,rho=0.2,seed=3",
)


@pytest.mark.parametrize("spec", CORPUS + EXTRA)
class TestEveryMember:
    def test_declared_degree_bounds_spectrum(self, spec):
        f, d = generate(spec)
        assert f.degree <= d

    def test_parseval(self, spec):
        f, _ = generate(spec)
        values = wht_inverse(f).values
        assert second_moment(f) == pytest.approx(np.mean(values ** 2), abs=1e-12)

    def test_bounded_flag_is_honest(self, spec):
        f, _ = generate(spec)
        values = wht_inverse(f).values
        if f.bounded:
            assert values.min() >= -1e-12 and values.max() <= 1 + 1e-12
            assert is_bounded(f)

    def test_spectrum_matches_dense_oracle(self, spec):
        f, _ = generate(spec)
        values = wht_inverse(f).values
        dense = oracles.spectrum(values, f.n)
        got = np.array([f[m] for m in range(1 << f.n)])
        np.testing.assert_allclose(got, dense, atol=1e-12)


class TestSpecificMembers:
    def test_tribes_2_2(self):
        f, d = generate("tribes:w=2,t=2")
        assert (f.n, d) == (4, 4)
        x = np.arange(16)
        bit = lambda i: (x >> i) & 1
        values = ((bit(0) & bit(1)) | (bit(2) & bit(3))).astype(float)
        np.testing.assert_allclose([f[m] for m in range(16)], oracles.spectrum(values, 4), atol=1e-15)
        assert f.mean == pytest.approx(7 / 16)

    def test_random_dtree_values_and_degree(self):
        for seed in range(10):
            f, d = generate(f"random_dtree:depth=3,n=7,seed={seed}")
            v = wht_inverse(f).values
            assert set(np.round(v, 12)) <= {0.0, 1.0}
            assert f.degree <= 3 == d

    def test_random_dtree_seeded(self):
        a, _ = generate("random_dtree:depth=3,n=6,seed=5")
        b, _ = generate("random_dtree:depth=3,n=6,seed=5")
        assert a.coeffs == b.coeffs

    def test_dictator_variance(self):
        assert variance(dictator(4, 2)[0]) == pytest.approx(0.25)
        assert variance(dictator(4, 2, signed=True)[0]) == pytest.approx(1.0)
        assert not dictator(4, 2, signed=True)[0].bounded

    def test_constant(self):
        f, d = constant(3, 0.25)
        assert d == 0 and variance(f) == 0 and f.mean == 0.25
        with pytest.raises(DomainError):
            constant(2, 1.5)

    def test_smoothed_random_bounded(self):
        for rho in (0.0, 0.3, 1.0):
            f, _ = generate(f"smoothed_random:n=6,rho={rho},seed=1")
            assert is_bounded(f)


class TestMixtures:
    def test_weights_validated(self):
        g = dictator(3, 0)[0]
        with pytest.raises(DomainError):
            convex_mixture([g, g], [0.6, 0.6])
        with pytest.raises(DomainError):
            convex_mixture([g], [1.0, 0.0])
        with pytest.raises(DomainError):
            convex_mixture([g, dictator(4, 0)[0]], [0.5, 0.5])

    def test_single_component_is_identity(self):
        g, _ = generate("tribes:w=2,t=2")
        assert convex_mixture([g], [1.0]).coeffs == g.coeffs

    def test_two_dictators(self):
        f = convex_mixture([dictator(2, 0)[0], dictator(2, 1)[0]], [0.5, 0.5])
        np.testing.assert_allclose(wht_inverse(f).values, [0, 0.5, 0.5, 1.0])

    @pytest.mark.parametrize("w", [0.1, 0.5, 0.9])
    def test_mixing_with_constant_half_scales_variance(self, w):
        g, _ = generate("random_dtree:depth=3,n=6,seed=2")
        f = convex_mixture([g, constant(6, 0.5)[0]], [w, 1 - w])
        assert variance(f) == pytest.approx(w * w * variance(g))

    def test_parsed_mixture(self):
        f, d = generate("convex_mixture:0.25*dictator:n=3,i=0 + 0.75*parity_scaled:n=3,m=2")
        assert d == 2
        want = 0.25 * wht_inverse(dictator(3, 0)[0]).values + 0.75 * wht_inverse(generate("parity_scaled:n=3,m=2")[0]).values
        np.testing.assert_allclose(wht_inverse(f).values, want, atol=1e-15)


class TestParsing:
    def test_simple(self):
        spec = parse_family("tribes:w=2,t=3")
        assert spec == FamilySpec("tribes", {"w": 2, "t": 3})
        assert str(spec) == "tribes:w=2,t=3"

    def test_seed_and_float(self):
        spec = parse_family("smoothed_random:n=4,rho=0.25,seed=9")
        assert spec.seed == 9 and spec.params == {"n": 4, "rho": 0.25}
        assert parse_family(str(spec)) == spec

    def test_mixture_roundtrip(self):
        spec = parse_family(CORPUS[-1])
        assert len(spec.components) == 2
        assert parse_family(str(spec)) == spec

    @pytest.mark.parametrize("bad", ["nosuch:n=2", "tribes:w", "convex_mixture:dictator:n=2", "tribes:w=2"])
    def test_rejected(self, bad):
        with pytest.raises(DomainError):
            generate(bad)

    def test_every_family_named(self):
        assert {parse_family(s).name for s in CORPUS} == set(FAMILIES)
