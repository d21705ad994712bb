"""Finite-n distributional statistics of log|det| for Gaussian ensembles.

Closed moment generating functions, exact cumulants, deviation-bound
envelopes, seeded samplers, numerically stable log-determinants, and a
Monte Carlo harness that checks the limit theorems empirically.
"""

from .cumulants import (BoundEnvelope, CumulantTable, asymptotic_cumulant,
                        bound_envelope, cumulant_table, exact_cumulant,
                        factorial_bound_ratio, finite_difference_cumulant)
from .ensembles import (AtomDistribution, RandomStream, moment_match_report,
                        sample)
from .harness import (ExperimentConfig, ExperimentSummary, MdpConfig, Variant,
                      empirical_mdp_rate, ks_statistic, run_experiment,
                      tail_ratios)
from .logdet import DenseMatrix, MatrixKind, log_abs_det
from .moments import (EnsembleSpec, Family, log_mgf_closed,
                      log_mgf_quadrature, mellin_transform)
from .specfun import (CONSTANTS, TOLERANCES, hyp2f1_half, log_gamma,
                      normal_cdf, polygamma)

__version__ = "0.1.0"

__all__ = [
    "AtomDistribution", "BoundEnvelope", "CONSTANTS", "CumulantTable",
    "DenseMatrix", "EnsembleSpec", "ExperimentConfig", "ExperimentSummary",
    "Family", "MatrixKind", "MdpConfig", "RandomStream", "TOLERANCES",
    "Variant", "asymptotic_cumulant", "bound_envelope", "cumulant_table",
    "empirical_mdp_rate", "exact_cumulant", "factorial_bound_ratio",
    "finite_difference_cumulant", "hyp2f1_half", "ks_statistic",
    "log_abs_det", "log_gamma", "log_mgf_closed", "log_mgf_quadrature",
    "mellin_transform", "moment_match_report", "normal_cdf", "polygamma",
    "run_experiment", "sample", "tail_ratios",
]
