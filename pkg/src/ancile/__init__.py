"""Normality and symmetry testing with ancillary-statistic tools.

Classical and modified normality tests with Monte Carlo calibration, a
combined t/sign test for the center of symmetry, and distance covariance
estimators for checking independence between statistics and ancillary
vectors.
"""
__version__ = "0.1.0"

from ._backend import name as backend_name
from .dependence import (
    AncillaryKind, DCovEstimate, ancillary_vector, dcov_asymptotic, dcov_energy, dcov_v,
)
from .errors import AncileError
from .gof import GofKind, gof_test, modified_test_statistic, classical_test_statistic
from .results import TestResult
from .stat_core import RngStream, summarize
from .symmetry import (
    DEFAULT_SEARCH, NuisanceEstimates, WeightSearchConfig, combined_statistic, combined_test,
    estimate_nuisance, optimize_weight,
)
from .simulation import CriticalValueTable, calibrate, power_study, sample_alternative

__all__ = [
    "__version__", "backend_name", "AncillaryKind", "DCovEstimate", "ancillary_vector",
    "dcov_asymptotic", "dcov_energy", "dcov_v", "AncileError", "GofKind", "gof_test",
    "modified_test_statistic", "classical_test_statistic", "TestResult", "RngStream",
    "summarize", "DEFAULT_SEARCH", "NuisanceEstimates", "WeightSearchConfig",
    "combined_statistic", "combined_test", "estimate_nuisance", "optimize_weight",
    "CriticalValueTable", "calibrate", "power_study", "sample_alternative",
]
