"""Seeded, reproducible samplers for the matrix families.

Each draw is keyed by (seed, stream) through a counter-based Philox
generator, so any sample can be regenerated in isolation and partitioning
work across shards cannot change results.  Slot conventions (pinned by the
eigenvalue densities and verified against the exact cumulants):

    GUE      diagonal N(0,1) real; off-diagonal complex, Re/Im ~ N(0, 1/2)
    GOE      diagonal N(0,2); off-diagonal N(0,1); symmetric
    Ginibre  iid entries with unit total variance (real, or complex with
             Re/Im ~ N(0,1/2))
    FourMomentWigner  bounded three-point atoms matching the GUE slot
             moments through order 4
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedFamilyError
from .logdet import DenseMatrix, MatrixKind
from .moments import EnsembleSpec, Family

__all__ = [
    "RandomStream",
    "AtomDistribution",
    "FMW_DIAGONAL_ATOM",
    "FMW_OFFDIAG_PART_ATOM",
    "sample",
    "moment_match_report",
    "matrix_to_csv",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RandomStream:
    """Counter-based stream identity: (seed, shard) keys Philox directly."""

    seed: int
    shard: int = 0
    counter: int = 0

    def generator(self) -> np.random.Generator:
        bits = np.random.Philox(key=[self.seed & _MASK64, self.shard & _MASK64],
                                counter=[self.counter & _MASK64, 0, 0, 0])
        return np.random.Generator(bits)


@dataclass(frozen=True)
class AtomDistribution:
    """Finite-support atom; moments are recomputed from the support."""

    support: tuple  # ((value, probability), ...)

    def moment(self, order: int) -> float:
        return math.fsum(p * v**order for v, p in self.support)

    @property
    def moments(self):
        return tuple(self.moment(k) for k in (1, 2, 3, 4))

    def total_probability(self) -> float:
        return math.fsum(p for _, p in self.support)


_A_OFF = math.sqrt(1.5)
_A_DIAG = math.sqrt(3.0)

# P(0) = 2/3, P(+-a) = 1/6: the unique symmetric three-point solve matching
# the Gaussian slot variances and fourth moments.
FMW_OFFDIAG_PART_ATOM = AtomDistribution(
    support=((-_A_OFF, 1.0 / 6.0), (0.0, 2.0 / 3.0), (_A_OFF, 1.0 / 6.0)))
FMW_DIAGONAL_ATOM = AtomDistribution(
    support=((-_A_DIAG, 1.0 / 6.0), (0.0, 2.0 / 3.0), (_A_DIAG, 1.0 / 6.0)))

_MOMENT_TARGETS = {
    "real_std_normal": (0.0, 1.0, 0.0, 3.0),
    "re_complex_normal": (0.0, 0.5, 0.0, 0.75),
}


def moment_match_report(atom: AtomDistribution, target: str):
    """Rows (order, atom_moment, target_moment, diff) through order 4."""
    if target not in _MOMENT_TARGETS:
        raise DomainError(f"unknown moment target {target!r}; "
                          f"choose from {sorted(_MOMENT_TARGETS)}")
    goal = _MOMENT_TARGETS[target]
    rows = []
    for order in range(1, 5):
        am = atom.moment(order)
        tm = goal[order - 1]
        rows.append((order, am, tm, am - tm))
    return rows


def _three_point(gen, count, a):
    u = gen.random(count)
    out = np.zeros(count)
    out[u < 1.0 / 6.0] = -a
    out[u >= 5.0 / 6.0] = a
    return out


def sample(spec: EnsembleSpec, stream: RandomStream) -> DenseMatrix:
    """Draw one matrix; equal (spec, stream) gives bit-identical output."""
    if spec.family is Family.GINIBRE_QUATERNION:
        raise UnsupportedFamilyError("quaternion Ginibre sampling unsupported "
                                     "(only its closed-form MGF is)")
    gen = stream.generator()
    n = spec.n
    fam = spec.family

    if fam is Family.GINIBRE_REAL:
        return DenseMatrix(gen.standard_normal((n, n)), MatrixKind.REAL_GENERAL)

    if fam is Family.GINIBRE_COMPLEX:
        re = gen.standard_normal((n, n))
        im = gen.standard_normal((n, n))
        return DenseMatrix((re + 1j * im) / math.sqrt(2.0),
                           MatrixKind.COMPLEX_GENERAL)

    iu, ju = np.triu_indices(n, k=1)
    m = iu.size
    if fam is Family.GUE:
        diag = gen.standard_normal(n)
        re = gen.standard_normal(m) / math.sqrt(2.0)
        im = gen.standard_normal(m) / math.sqrt(2.0)
        h = np.zeros((n, n), dtype=complex)
        h[iu, ju] = re + 1j * im
        h[ju, iu] = re - 1j * im
        h[np.diag_indices(n)] = diag
        return DenseMatrix(h, MatrixKind.COMPLEX_HERMITIAN)
    if fam is Family.GOE:
        diag = gen.standard_normal(n) * math.sqrt(2.0)
        off = gen.standard_normal(m)
        h = np.zeros((n, n))
        h[iu, ju] = off
        h[ju, iu] = off
        h[np.diag_indices(n)] = diag
        return DenseMatrix(h, MatrixKind.REAL_SYMMETRIC)
    if fam is Family.FOUR_MOMENT_WIGNER:
        diag = _three_point(gen, n, _A_DIAG)
        re = _three_point(gen, m, _A_OFF)
        im = _three_point(gen, m, _A_OFF)
        h = np.zeros((n, n), dtype=complex)
        h[iu, ju] = re + 1j * im
        h[ju, iu] = re - 1j * im
        h[np.diag_indices(n)] = diag
        return DenseMatrix(h, MatrixKind.COMPLEX_HERMITIAN)
    raise UnsupportedFamilyError(f"no sampler for {fam.value}")


def matrix_to_csv(matrix: DenseMatrix) -> str:
    """Row-major CSV; complex entries become real/imaginary column pairs."""
    lines = []
    data = matrix.data
    if np.iscomplexobj(data):
        for row in data:
            cells = []
            for z in row:
                cells.append(f"{z.real:.17g}")
                cells.append(f"{z.imag:.17g}")
            lines.append(",".join(cells))
    else:
        for row in data:
            lines.append(",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"
