import math

import numpy as np
import pytest

from logdetstats import cumulants, harness
from logdetstats.ensembles import (FMW_DIAGONAL_ATOM, FMW_OFFDIAG_PART_ATOM,
                                   AtomDistribution, RandomStream,
                                   matrix_to_csv, moment_match_report, sample)
from logdetstats.errors import DomainError, UnsupportedFamilyError
from logdetstats.logdet import MatrixKind, log_abs_det
from logdetstats.moments import EnsembleSpec, Family

ALL_SAMPLED = (Family.GUE, Family.GOE, Family.GINIBRE_REAL,
               Family.GINIBRE_COMPLEX, Family.FOUR_MOMENT_WIGNER)


def spec(fam, n):
    return EnsembleSpec(family=fam, n=n)


class TestDeterminism:
    def test_bit_identical_redraw(self):
        for fam in ALL_SAMPLED:
            a = sample(spec(fam, 9), RandomStream(20260809, 5))
            b = sample(spec(fam, 9), RandomStream(20260809, 5))
            assert np.array_equal(a.data, b.data), fam

    def test_streams_differ(self):
        a = sample(spec(Family.GUE, 6), RandomStream(1, 0))
        b = sample(spec(Family.GUE, 6), RandomStream(1, 1))
        c = sample(spec(Family.GUE, 6), RandomStream(2, 0))
        assert not np.array_equal(a.data, b.data)
        assert not np.array_equal(a.data, c.data)


class TestSymmetry:
    def test_exact_hermitian(self):
        for fam in (Family.GUE, Family.FOUR_MOMENT_WIGNER):
            m = sample(spec(fam, 16), RandomStream(3, 0))
            assert m.kind is MatrixKind.COMPLEX_HERMITIAN
            assert m.symmetry_defect() == 0.0
            assert np.all(m.data.diagonal().imag == 0.0)

    def test_exact_symmetric(self):
        m = sample(spec(Family.GOE, 16), RandomStream(3, 0))
        assert m.kind is MatrixKind.REAL_SYMMETRIC
        assert m.symmetry_defect() == 0.0


class TestAtoms:
    def test_offdiag_matches_complex_part(self):
        rows = moment_match_report(FMW_OFFDIAG_PART_ATOM, "re_complex_normal")
        assert [r[0] for r in rows] == [1, 2, 3, 4]
        assert all(abs(r[3]) <= 1e-14 for r in rows)

    def test_diagonal_matches_real_normal(self):
        rows = moment_match_report(FMW_DIAGONAL_ATOM, "real_std_normal")
        assert all(abs(r[3]) <= 1e-14 for r in rows)

    def test_rademacher_mismatch(self):
        atom = AtomDistribution(support=((-1.0, 0.5), (1.0, 0.5)))
        rows = moment_match_report(atom, "real_std_normal")
        assert rows[3][3] == pytest.approx(-2.0, abs=1e-15)

    def test_probabilities_and_moments(self):
        for atom in (FMW_DIAGONAL_ATOM, FMW_OFFDIAG_PART_ATOM):
            assert atom.total_probability() == pytest.approx(1.0, abs=1e-15)
            assert atom.moment(1) == 0.0
            assert atom.moment(3) == 0.0

    def test_unknown_target(self):
        with pytest.raises(DomainError):
            moment_match_report(FMW_DIAGONAL_ATOM, "nope")


class TestSlotMoments:
    def _collect(self, fam, n, count):
        diag, off = [], []
        for i in range(count):
            m = sample(spec(fam, n), RandomStream(97, i)).data
            diag.append(np.real(np.diag(m)))
            iu = np.triu_indices(n, k=1)
            off.append(m[iu])
        return np.concatenate(diag), np.concatenate(off)

    def test_gue_slots(self):
        n, count = 32, 250  # ~1.2e5 off-diagonal entries
        diag, off = self._collect(Family.GUE, n, count)
        m_off = off.size
        # diagonal N(0,1)
        assert abs(diag.mean()) <= 5.0 / math.sqrt(diag.size)
        assert abs(diag.var() - 1.0) <= 5.0 * math.sqrt(2.0 / diag.size)
        # off-diagonal real/imag parts N(0, 1/2)
        for part in (off.real, off.imag):
            assert abs(part.mean()) <= 5.0 * math.sqrt(0.5 / m_off)
            assert abs(part.var() - 0.5) <= 5.0 * 0.5 * math.sqrt(2.0 / m_off)

    def test_goe_slots(self):
        n, count = 32, 250
        diag, off = self._collect(Family.GOE, n, count)
        assert abs(diag.var() - 2.0) <= 5.0 * 2.0 * math.sqrt(2.0 / diag.size)
        assert abs(off.var() - 1.0) <= 5.0 * math.sqrt(2.0 / off.size)

    def test_fmw_slots(self):
        n, count = 32, 250
        diag, off = self._collect(Family.FOUR_MOMENT_WIGNER, n, count)
        assert abs(diag.var() - 1.0) <= 5.0 * math.sqrt(2.0 / diag.size)
        assert abs((off.real**4).mean() - 0.75) <= 5.0 * 0.2
        assert set(np.unique(np.abs(diag))) <= {0.0, math.sqrt(3.0)}

    def test_gue_n1_entry_is_standard_normal(self):
        vals = np.array([
            sample(spec(Family.GUE, 1), RandomStream(11, i)).data[0, 0].real
            for i in range(4000)])
        ks = harness.ks_statistic(np.sort(vals))
        assert ks < 0.03


class TestDistributionLevel:
    def test_goe_logdet_mean_matches_cumulant(self):
        # the decisive normalization check, reduced-m version of the
        # acceptance keystone
        n, m = 20, 20_000
        sp = spec(Family.GOE, n)
        vals = np.array([log_abs_det(sample(sp, RandomStream(20260809, i)))
                         for i in range(m)])
        g1 = cumulants.exact_cumulant(sp, 1)
        g2 = cumulants.exact_cumulant(sp, 2)
        assert abs(vals.mean() - g1) <= 4.0 * math.sqrt(g2 / m)


class TestErrorsAndExport:
    def test_quaternion_refused(self):
        with pytest.raises(UnsupportedFamilyError):
            sample(spec(Family.GINIBRE_QUATERNION, 3), RandomStream(0, 0))

    def test_csv_roundtrip_real(self):
        m = sample(spec(Family.GOE, 5), RandomStream(42, 0))
        text = matrix_to_csv(m)
        rows = [list(map(float, line.split(","))) for line in text.strip().split("\n")]
        back = np.array(rows)
        assert np.array_equal(back, m.data)

    def test_csv_roundtrip_complex(self):
        m = sample(spec(Family.GUE, 4), RandomStream(42, 1))
        rows = [list(map(float, line.split(",")))
                for line in matrix_to_csv(m).strip().split("\n")]
        back = np.array(rows)
        rebuilt = back[:, 0::2] + 1j * back[:, 1::2]
        assert np.array_equal(rebuilt, m.data)
