import math

import numpy as np
import pytest

from logdetstats import quadrature
from logdetstats.errors import DomainError, NoClosedFormError
from logdetstats.moments import (EnsembleSpec, Family, log_mgf_closed,
                                 log_mgf_quadrature, mellin_transform)


def spec(fam, n):
    return EnsembleSpec(family=fam, n=n)


class TestEnsembleSpec:
    def test_beta_derived(self):
        assert spec(Family.GUE, 4).beta == 2
        assert spec(Family.GOE, 4).beta == 1
        assert spec(Family.GINIBRE_QUATERNION, 4).beta == 4
        assert spec(Family.FOUR_MOMENT_WIGNER, 4).beta == 2

    def test_beta_consistency_enforced(self):
        with pytest.raises(DomainError):
            EnsembleSpec(family=Family.GUE, n=3, beta=1)
        assert EnsembleSpec(family=Family.GOE, n=3, beta=1).beta == 1

    def test_dimension_validated(self):
        with pytest.raises(DomainError):
            EnsembleSpec(family=Family.GUE, n=0)


class TestClosedForm:
    def test_gue_n1_s2_is_second_absolute_moment(self):
        # E|X|^2 = 1 for X ~ N(0,1)
        assert log_mgf_closed(spec(Family.GUE, 1), 2.0) == pytest.approx(0.0, abs=1e-14)

    def test_s_zero_is_zero_every_family(self):
        for fam in (Family.GUE, Family.GOE, Family.GINIBRE_REAL,
                    Family.GINIBRE_COMPLEX, Family.GINIBRE_QUATERNION):
            for n in (1, 2, 3, 17, 100, 10_000):
                assert log_mgf_closed(spec(fam, n), 0.0) == pytest.approx(0.0, abs=1e-9)

    def test_gue_n2_s2_determinant_expansion(self):
        # E det^2 = E Y1^2 Y2^2 + E|Z|^4 = 1 + 2 = 3 for the 2x2 Hermitian case
        assert log_mgf_closed(spec(Family.GUE, 2), 2.0) == pytest.approx(
            math.log(3.0), rel=1e-14)

    def test_goe_even_moments_by_wick(self):
        # diag N(0,2), offdiag N(0,1): E det^2 = 4 + 3 = 7 at n=2
        assert math.exp(log_mgf_closed(spec(Family.GOE, 2), 2.0)) == pytest.approx(
            7.0, rel=1e-13)

    def test_goe_odd_moments_by_wick(self):
        # 3x3 symmetric: det = abc - a f^2 - c d^2 - b e^2 + 2 d e f;
        # independent Gaussian moments give E det^2 = 8 + 6 + 6 + 6 + 4 = 30
        assert math.exp(log_mgf_closed(spec(Family.GOE, 3), 2.0)) == pytest.approx(
            30.0, rel=1e-13)

    def test_goe_n1_absolute_moment(self):
        # n=1 eigenvalue density ~ exp(-x^2/4): E|X| = 2/sqrt(pi)
        assert log_mgf_closed(spec(Family.GOE, 1), 1.0) == pytest.approx(
            math.log(2.0 / math.sqrt(math.pi)), rel=1e-13)

    def test_ginibre_real_n2(self):
        # det = ad - bc with iid unit-variance entries: E det^2 = 2
        got = log_mgf_closed(spec(Family.GINIBRE_REAL, 2), 2.0)
        assert math.exp(got) == pytest.approx(2.0, rel=1e-13)

    def test_ginibre_complex_n1(self):
        # |Z|^2 ~ Exp(1): E|Z|^s = Gamma(1 + s/2)
        for s in (0.5, 1.0, 2.0, 3.0):
            assert log_mgf_closed(spec(Family.GINIBRE_COMPLEX, 1), s) == \
                pytest.approx(math.lgamma(1.0 + s / 2.0), abs=1e-13)

    def test_errors(self):
        with pytest.raises(NoClosedFormError):
            log_mgf_closed(spec(Family.FOUR_MOMENT_WIGNER, 4), 1.0)
        with pytest.raises(DomainError):
            log_mgf_closed(spec(Family.GUE, 4), -1.0)

    def test_finite_at_mega_dimension(self):
        for fam, n in ((Family.GUE, 1_000_000), (Family.GOE, 999_999),
                       (Family.GOE, 1_000_000), (Family.GINIBRE_REAL, 1_000_000)):
            v = log_mgf_closed(spec(fam, n), 1.0)
            assert math.isfinite(v)
            assert v > 1e6  # mean scale (n/2) log n

    def test_convexity_in_s(self):
        grid = np.linspace(-0.5, 4.0, 19)
        for fam, n in ((Family.GUE, 7), (Family.GOE, 6), (Family.GOE, 9),
                       (Family.GINIBRE_REAL, 5), (Family.GINIBRE_COMPLEX, 8)):
            vals = [log_mgf_closed(spec(fam, n), float(s)) for s in grid]
            second = np.diff(vals, 2)
            assert np.all(second >= -1e-9)


class TestMellin:
    def test_normalization(self):
        for fam in (Family.GUE, Family.GOE, Family.GINIBRE_REAL):
            assert mellin_transform(spec(fam, 5), 1.0) == pytest.approx(0.5, rel=1e-13)

    def test_examples(self):
        assert mellin_transform(spec(Family.GUE, 1), 3.0) == pytest.approx(0.5, rel=1e-13)
        assert mellin_transform(spec(Family.GUE, 2), 3.0) == pytest.approx(1.5, rel=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            mellin_transform(spec(Family.GUE, 2), 0.0)


class TestQuadratureOracle:
    def test_gue_n2_s2(self):
        got = log_mgf_quadrature(spec(Family.GUE, 2), 2.0)
        assert got == pytest.approx(math.log(3.0), abs=1e-6)

    def test_goe_n1_s1(self):
        got = log_mgf_quadrature(spec(Family.GOE, 1), 1.0)
        assert got == pytest.approx(math.log(2.0 / math.sqrt(math.pi)), abs=1e-9)

    def test_s0_exactly_zero(self):
        for fam in (Family.GUE, Family.GOE, Family.GINIBRE_REAL,
                    Family.GINIBRE_COMPLEX):
            assert log_mgf_quadrature(spec(fam, 2), 0.0) == pytest.approx(0.0, abs=1e-9)

    def test_oracle_agreement_small(self):
        # n <= 2 slice of the full acceptance sweep; n=2 GOE takes the
        # hypergeometric branch
        for fam in (Family.GUE, Family.GOE, Family.GINIBRE_REAL,
                    Family.GINIBRE_COMPLEX):
            for n in (1, 2):
                for s in (0.0, 0.5, 1.0, 2.0):
                    closed = log_mgf_closed(spec(fam, n), s)
                    quad = log_mgf_quadrature(spec(fam, n), s)
                    assert abs(closed - quad) <= 1e-5, (fam, n, s)

    def test_goe_parity_branches(self):
        for n in (2, 3):
            closed = log_mgf_closed(spec(Family.GOE, n), 1.5)
            quad = log_mgf_quadrature(spec(Family.GOE, n), 1.5)
            assert abs(closed - quad) <= 1e-5

    def test_refuses_large_n(self):
        with pytest.raises(DomainError):
            log_mgf_quadrature(spec(Family.GUE, 4), 1.0)

    def test_refuses_families(self):
        with pytest.raises(DomainError):
            log_mgf_quadrature(spec(Family.GINIBRE_QUATERNION, 2), 1.0)


class TestWedgeEngine:
    def test_gaussian_normalizer_1d(self):
        val = quadrature.wedge_integral(
            lambda p: np.exp(-0.5 * p[:, 0] ** 2), 1, -20.0, 20.0)
        assert val == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-12)

    def test_symmetric_2d_with_cusp(self):
        # int |x| |y| exp(-(x^2+y^2)/2) over R^2 = (E|N|)^2 * 2pi = 2^2 = 4...
        # directly: (integral |x| e^{-x^2/2})^2 = (2)^2
        val = quadrature.wedge_integral(
            lambda p: np.abs(p[:, 0] * p[:, 1]) * np.exp(
                -0.5 * np.sum(p * p, axis=1)), 2, -20.0, 20.0)
        assert val == pytest.approx(4.0, rel=1e-10)
