"""Empirical independence checks between a statistic and an ancillary vector."""
from __future__ import annotations

import numpy as np

from ..dependence import AncillaryKind, DCovEstimate, ancillary_rows, dcov_v
from ..errors import DomainError, SampleSizeError
from ..gof import GofKind, batch_statistics
from ..symmetry import DEFAULT_SEARCH, combined_rows, sign_stat_rows, t_stat_rows
from .engine import simulate_matrix

_SIMPLE = {
    "min": lambda X: X.min(axis=1),
    "max": lambda X: X.max(axis=1),
    "mean": lambda X: X.mean(axis=1),
    "median": lambda X: np.median(X, axis=1),
    "sd": lambda X: X.std(axis=1, ddof=1),
    "t": t_stat_rows,
    "tt": t_stat_rows,
    "sign": sign_stat_rows,
    "ts": sign_stat_rows,
    "tc": lambda X: combined_rows(X, DEFAULT_SEARCH).t_c,
}

LAB_STATISTICS = tuple(_SIMPLE) + tuple(k.value for k in GofKind)


def statistic_rows(stat: str, X: np.ndarray) -> np.ndarray:
    key = str(stat).lower()
    if key in _SIMPLE:
        return _SIMPLE[key](X)
    try:
        kind = GofKind.parse(stat)
    except ValueError:
        raise DomainError(f"unknown lab statistic {stat!r}; choose from {LAB_STATISTICS}") from None
    return batch_statistics(X, [kind])[kind]


def independence_lab(stat: str, anc, spec, n: int, reps: int, seed: int = 0, *,
                     threads: int | None = None) -> DCovEstimate:
    """Distance covariance between ``stat`` and the ancillary vector ``anc``
    across ``reps`` samples of size ``n`` drawn from ``spec``."""
    if reps < 100:
        raise SampleSizeError("reps must be at least 100")
    kind = AncillaryKind.parse(anc)
    X = simulate_matrix(spec, n, reps, seed, threads=threads)
    t = statistic_rows(stat, X)
    v = ancillary_rows(X, kind)
    return dcov_v(t, v)
