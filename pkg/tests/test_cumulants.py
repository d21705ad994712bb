import math

import numpy as np
import pytest

from logdetstats import quadrature
from logdetstats.cumulants import (Method, asymptotic_cumulant, bound_envelope,
                                   cumulant_table, exact_cumulant,
                                   factorial_bound_ratio,
                                   finite_difference_cumulant)
from logdetstats.errors import DomainError, NoClosedFormError
from logdetstats.moments import EnsembleSpec, Family
from logdetstats.specfun import CONSTANTS

GAMMA = CONSTANTS.euler_gamma
LOG2 = math.log(2.0)


def spec(fam, n):
    return EnsembleSpec(family=fam, n=n)


class TestExactCumulants:
    def test_gue_1x1_mean(self):
        # E log|X| for X ~ N(0,1), also (1/2)log2 + (1/2)psi(1/2)
        assert exact_cumulant(spec(Family.GUE, 1), 1) == pytest.approx(
            -(GAMMA + LOG2) / 2.0, abs=1e-12)

    def test_gue_1x1_variance(self):
        assert exact_cumulant(spec(Family.GUE, 1), 2) == pytest.approx(
            math.pi**2 / 8.0, abs=1e-12)

    def test_gue_1x1_mean_quadrature_oracle(self):
        # log|x| keeps a logarithmic singularity after the cusp substitution,
        # so the rule converges polynomially here; 1e-7 at 384 nodes
        dens = lambda p: np.exp(-0.5 * p[:, 0] ** 2)
        num = quadrature.wedge_integral(
            lambda p: dens(p) * np.log(np.abs(p[:, 0])), 1, -15.0, 15.0, 384)
        den = quadrature.wedge_integral(dens, 1, -15.0, 15.0, 384)
        assert exact_cumulant(spec(Family.GUE, 1), 1) == pytest.approx(
            num / den, abs=1e-7)

    def test_ginibre_real_1x1_matches_gue(self):
        # a 1x1 real Ginibre matrix is |N(0,1)| in absolute value
        assert exact_cumulant(spec(Family.GINIBRE_REAL, 1), 1) == pytest.approx(
            -(GAMMA + LOG2) / 2.0, abs=1e-12)

    def test_variance_positive(self):
        for fam in (Family.GUE, Family.GOE, Family.GINIBRE_REAL,
                    Family.GINIBRE_COMPLEX, Family.GINIBRE_QUATERNION):
            for n in (1, 2, 5, 24):
                assert exact_cumulant(spec(fam, n), 2) > 0.0

    def test_four_moment_refused(self):
        with pytest.raises(NoClosedFormError):
            exact_cumulant(spec(Family.FOUR_MOMENT_WIGNER, 8), 1)

    def test_table_method_provenance(self):
        assert cumulant_table(spec(Family.GUE, 6), 3).method is Method.CLOSED_SUM
        assert cumulant_table(spec(Family.GOE, 7), 3).method is Method.CLOSED_SUM
        assert cumulant_table(spec(Family.GOE, 6), 3).method is Method.FINITE_DIFFERENCE


class TestFiniteDifferenceOracle:
    def test_gue_1x1(self):
        fd = finite_difference_cumulant(spec(Family.GUE, 1), 1)
        assert fd.value == pytest.approx(-0.635181422, abs=1e-7)
        assert fd.error_estimate < 1e-7

    def test_cross_oracle_sample(self):
        for fam in (Family.GUE, Family.GINIBRE_REAL, Family.GINIBRE_COMPLEX):
            for n in (1, 3, 10, 50):
                sp = spec(fam, n)
                for j in (1, 2, 3, 6):
                    ex = exact_cumulant(sp, j)
                    fd = finite_difference_cumulant(sp, j)
                    assert abs(ex - fd.value) <= 1e-6, (fam, n, j)

    def test_gue_n50_j3(self):
        sp = spec(Family.GUE, 50)
        assert finite_difference_cumulant(sp, 3).value == pytest.approx(
            exact_cumulant(sp, 3), abs=1e-6)

    def test_goe_2x2_variance_vs_quadrature(self):
        # eigenvalue-density oracle for Var log|det| of the 2x2 GOE
        def dens(p):
            return (np.exp(-0.25 * np.sum(p * p, axis=1))
                    * np.abs(p[:, 1] - p[:, 0]))

        def logdet(p):
            return np.log(np.abs(p[:, 0])) + np.log(np.abs(p[:, 1]))

        den = quadrature.wedge_integral(dens, 2, -18.0, 18.0, 80)
        m1 = quadrature.wedge_integral(lambda p: dens(p) * logdet(p),
                                       2, -18.0, 18.0, 80) / den
        m2 = quadrature.wedge_integral(lambda p: dens(p) * logdet(p) ** 2,
                                       2, -18.0, 18.0, 80) / den
        var = m2 - m1 * m1
        fd = finite_difference_cumulant(spec(Family.GOE, 2), 2)
        assert fd.value == pytest.approx(var, abs=1e-4)
        assert exact_cumulant(spec(Family.GOE, 2), 1) == pytest.approx(m1, abs=1e-6)

    def test_order_domain(self):
        with pytest.raises(DomainError):
            finite_difference_cumulant(spec(Family.GUE, 3), 9)
        with pytest.raises(NoClosedFormError):
            finite_difference_cumulant(spec(Family.FOUR_MOMENT_WIGNER, 3), 2)

    def test_error_estimate_attached(self):
        fd = finite_difference_cumulant(spec(Family.GINIBRE_REAL, 20), 4)
        assert fd.error_estimate >= 0.0
        assert fd.step > 0.0


class TestAsymptotics:
    def test_gue_variance_value(self):
        res = asymptotic_cumulant(spec(Family.GUE, 1000), 2)
        expected = 0.5 * math.log(1000.0) + 0.5 * (GAMMA + LOG2 + 1.0)
        assert res.value == pytest.approx(expected, rel=1e-12)
        assert res.value == pytest.approx(4.58905, abs=5e-5)
        assert not res.undetermined_constant
        assert abs(exact_cumulant(spec(Family.GUE, 1000), 2) - res.value) < 0.01

    def test_goe_variance_is_stated_expression(self):
        res = asymptotic_cumulant(spec(Family.GOE, 1000), 2)
        expected = (math.log(1000.0) + GAMMA / 2.0 + 1.0
                    - 2.0 * CONSTANTS.catalan + math.pi**2 / 4.0)
        assert res.value == pytest.approx(expected, rel=1e-12)

    def test_goe_variance_parity_consistent_constant(self):
        # the exact variance settles on gamma + log2 + 1 - pi^2/8 for both
        # parities; the commonly quoted constant is ~0.887 higher
        const = GAMMA + LOG2 + 1.0 - math.pi**2 / 8.0
        for n in (4000, 4001):
            exact = exact_cumulant(spec(Family.GOE, n), 2)
            assert exact == pytest.approx(
                math.log(2.0 * (n // 2)) + const, abs=2e-3)

    def test_ginibre_variance(self):
        res = asymptotic_cumulant(spec(Family.GINIBRE_REAL, 1000), 2)
        expected = 0.5 * math.log(1000.0) + 0.5 * (GAMMA + 1.0 + math.pi**2 / 8.0)
        assert res.value == pytest.approx(expected, rel=1e-12)
        assert abs(exact_cumulant(spec(Family.GINIBRE_REAL, 1000), 2) - res.value) < 0.01

    def test_convergence_gue_ginibre(self):
        for fam in (Family.GUE, Family.GINIBRE_REAL):
            gaps = []
            for k in range(0, 10):
                n = 10 * 2**k
                sp = spec(fam, n)
                gaps.append(abs(exact_cumulant(sp, 2)
                                - asymptotic_cumulant(sp, 2).value))
            assert all(b < a for a, b in zip(gaps, gaps[1:]))
            assert gaps[-1] < 0.01

    def test_mean_undetermined_flag(self):
        res = asymptotic_cumulant(spec(Family.GUE, 100), 1)
        assert res.undetermined_constant
        assert res.value == pytest.approx(50.0 * math.log(100.0) - 50.0, rel=1e-12)

    def test_gue_mean_structure_cauchy(self):
        # Gamma_1 - [(n/2) log(2 floor(n/2)) - n/2] settles to a constant
        resid = []
        for n in (1024, 2048, 4096, 8192):
            g1 = exact_cumulant(spec(Family.GUE, n), 1)
            resid.append(g1 + n / 2.0 - (n / 2.0) * math.log(2.0 * (n // 2)))
        spread = max(resid) - min(resid)
        assert spread < 0.01
        assert abs(resid[-1]) < 0.01  # even-n constant is ~0

    def test_unsupported(self):
        with pytest.raises(DomainError):
            asymptotic_cumulant(spec(Family.GINIBRE_COMPLEX, 100), 2)
        with pytest.raises(DomainError):
            asymptotic_cumulant(spec(Family.GUE, 100), 3)


class TestGoeParity:
    def test_variance_growth_between_parities(self):
        # Gamma_2(n+2) - Gamma_2(n) tracks log(n+2) - log(n)
        for n in (100, 101, 200):
            a = exact_cumulant(spec(Family.GOE, n), 2)
            b = exact_cumulant(spec(Family.GOE, n + 2), 2)
            growth = (b - a) / (math.log(n + 2.0) - math.log(float(n)))
            assert 0.4 <= growth <= 1.8


class TestFactorialBound:
    def test_single_element_reduction(self):
        r = factorial_bound_ratio(Family.GUE, [4], 3)
        assert r == pytest.approx(abs(exact_cumulant(spec(Family.GUE, 4), 3)) / 2.0,
                                  rel=1e-14)

    def test_gue_bounded(self):
        r = factorial_bound_ratio(Family.GUE, [2**k for k in range(1, 9)], 12)
        assert math.isfinite(r)
        assert r <= 10.0

    def test_stability_in_jmax(self):
        ns = [2**k for k in range(1, 8)]
        r6 = factorial_bound_ratio(Family.GUE, ns, 6)
        r12 = factorial_bound_ratio(Family.GUE, ns, 12)
        assert 0.5 <= r12 / r6 <= 2.0

    def test_jmax_domain(self):
        with pytest.raises(DomainError):
            factorial_bound_ratio(Family.GUE, [4], 2)


class TestBoundEnvelope:
    def test_constants(self):
        env = bound_envelope(3.0)
        assert env.delta == pytest.approx(0.6, rel=1e-15)
        assert env.delta1 == pytest.approx(math.sqrt(2.0) * 0.6 / 36.0, rel=1e-15)
        assert env.delta1 == pytest.approx(0.0235702, abs=5e-8)

    def test_cramer_envelope(self):
        env = bound_envelope(3.0)
        assert env.cramer_envelope(0.0) == 0.0
        x = env.delta1 / 2.0
        assert env.cramer_envelope(x) == pytest.approx(x**3 / (3 * env.delta1))

    def test_ks_bound_vacuous_at_desk_scale(self):
        env = bound_envelope(3.0)
        assert env.ks_bound() == pytest.approx(18.0 / 0.0235702, rel=1e-5)
        assert env.ks_bound() > 1.0  # recorded, not hidden

    def test_phi_factor_positive(self):
        env = bound_envelope(3.0)
        assert env.phi_factor(0.0) > 60.0 - 1e-9

    def test_domain(self):
        env = bound_envelope(3.0)
        with pytest.raises(DomainError):
            env.cramer_envelope(env.delta1)
        with pytest.raises(DomainError):
            env.phi_factor(-0.1)
        with pytest.raises(DomainError):
            bound_envelope(0.0)
