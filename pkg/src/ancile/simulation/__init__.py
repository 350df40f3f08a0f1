"""Monte Carlo machinery: alternatives, calibration, power studies and the
independence lab."""
from .alternatives import (
    Alternative, Beta, ChiSq, Diff, Exp, ExpOf, Gamma, Mixture, Normal, Ratio, Scale, Shift,
    Sum, TriangularSym, Uniform, from_json, parse, sample_alternative,
)
from .calibration import DEFAULT_CALIB, MIN_CALIB, TEST_TAGS, calibrate, calibrate_many
from .engine import derive_seed, simulate_matrix, worker_count
from .lab import independence_lab
from .power import AlternativeCase, PowerRow, PowerStudyConfig, PowerTable, power_study
from .tables import CriticalValueTable

__all__ = [
    "Alternative", "Beta", "ChiSq", "Diff", "Exp", "ExpOf", "Gamma", "Mixture", "Normal",
    "Ratio", "Scale", "Shift", "Sum", "TriangularSym", "Uniform", "from_json", "parse",
    "sample_alternative", "DEFAULT_CALIB", "MIN_CALIB", "TEST_TAGS", "calibrate",
    "calibrate_many", "derive_seed", "simulate_matrix", "worker_count", "independence_lab",
    "AlternativeCase", "PowerRow", "PowerStudyConfig", "PowerTable", "power_study",
    "CriticalValueTable",
]
