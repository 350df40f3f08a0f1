"""Distance covariance and the ancillary vectors it is applied to.

``dcov2`` is the squared distance covariance (V-statistic), ``dvar_*`` the
squared distance variances, and ``dcor = dcov2 / sqrt(dvar_x * dvar_y)`` the
squared distance correlation, all over the same double-centered distance
matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _backend
from .errors import DimensionMismatchError, DomainError, SampleSizeError
from .stat_core import as_sample
from .symmetry import NuisanceEstimates, combined_variance

#: largest paired sample accepted by the O(M^2) estimators
MAX_M = 10_000


@dataclass(frozen=True)
class PairedSample:
    x: np.ndarray
    y: np.ndarray

    @property
    def m(self) -> int:
        return self.x.shape[0]


def _points(v, name):
    a = np.asarray(v, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise DimensionMismatchError(f"{name} must be a list of points (1-D or 2-D array)")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} contains non-finite coordinates")
    return np.ascontiguousarray(a)


def paired_sample(x, y) -> PairedSample:
    """Validate two equally long lists of points; scalars become 1-D points."""
    if isinstance(x, PairedSample):
        return x
    xa, ya = _points(x, "x"), _points(y, "y")
    if xa.shape[0] != ya.shape[0]:
        raise DimensionMismatchError(f"x has {xa.shape[0]} points, y has {ya.shape[0]}")
    if xa.shape[0] < 2:
        raise SampleSizeError("distance covariance needs at least 2 pairs")
    if xa.shape[0] > MAX_M:
        raise SampleSizeError(f"paired sample larger than MAX_M={MAX_M}")
    return PairedSample(xa, ya)


def _pair(x, y):
    return x if isinstance(x, PairedSample) and y is None else paired_sample(x, y)


@dataclass(frozen=True)
class DCovEstimate:
    dcov2: float
    dvar_x: float
    dvar_y: float
    dcor: float
    m: int
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {"dcov2": self.dcov2, "dvar_x": self.dvar_x, "dvar_y": self.dvar_y,
                "dcor": self.dcor, "m": self.m, "degenerate": self.degenerate}


def dcov_v(x, y=None, backend=None) -> DCovEstimate:
    """V-statistic distance covariance via double-centered distance matrices."""
    ps = _pair(x, y)
    m2 = float(ps.m) ** 2
    s_ab, s_aa, s_bb = _backend.get(backend).dcov_centered(ps.x, ps.y)
    dcov2 = max(s_ab / m2, 0.0)
    dvx = max(s_aa / m2, 0.0)
    dvy = max(s_bb / m2, 0.0)
    denom = math.sqrt(dvx * dvy)
    if denom > 0:
        return DCovEstimate(dcov2, dvx, dvy, min(dcov2 / denom, 1.0), ps.m)
    return DCovEstimate(dcov2, dvx, dvy, 0.0, ps.m, degenerate=True)


def dcov_energy(x, y=None, backend=None) -> float:
    """Same quantity from pairwise means:
    ``E|x-x'||y-y'| + E|x-x'| E|y-y'| - 2 E|x-x'||y-y''|``."""
    ps = _pair(x, y)
    m = float(ps.m)
    s_ab, s_a, s_b, s_rr = _backend.get(backend).dcov_sums(ps.x, ps.y)
    return s_ab / m**2 + (s_a / m**2) * (s_b / m**2) - 2.0 * s_rr / m**3


def dcov_asymptotic(a: float, nu: NuisanceEstimates, n: int) -> float:
    """Leading large-n term of the distance covariance between T_c and the
    centered data."""
    if n < 1:
        raise SampleSizeError("n must be positive")
    c2 = combined_variance(a, nu)
    s, p, m1, m2 = nu.sigma_hat, nu.p_hat, nu.m1_hat, nu.m2_hat
    bracket = 2.0 * (s - 2.0 * a * m1) ** 2 + a * a * (p * s * s - m2) ** 2 / (2.0 * s * s)
    return bracket / (c2 * math.sqrt(2.0 * math.pi * n * s * s))


def dvar_tc_limit() -> float:
    """Limit of the squared distance variance of T_c (that of a standard normal)."""
    return (4.0 * math.pi + 12.0 * (1.0 - math.sqrt(3.0))) / (3.0 * math.pi)


class AncillaryKind(str, Enum):
    RESIDUALS = "residuals"
    SPACINGS = "spacings"
    MEAN_RATIOS = "mean_ratios"
    ADJACENT_DIFFERENCES = "adjacent_differences"

    @classmethod
    def parse(cls, tag) -> "AncillaryKind":
        if isinstance(tag, cls):
            return tag
        t = str(tag).lower().replace("-", "_")
        for k in cls:
            if k.value == t:
                return k
        raise DomainError(f"unknown ancillary vector {tag!r}")

    def dim(self, n: int) -> int:
        return n if self in (AncillaryKind.RESIDUALS, AncillaryKind.MEAN_RATIOS) else n - 1


def ancillary_rows(X, kind) -> np.ndarray:
    kind = AncillaryKind.parse(kind)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] < 2:
        raise SampleSizeError("ancillary vectors need n >= 2")
    if kind is AncillaryKind.RESIDUALS:
        return X - X.mean(axis=1, keepdims=True)
    if kind is AncillaryKind.SPACINGS:
        return np.diff(np.sort(X, axis=1), axis=1)
    if kind is AncillaryKind.MEAN_RATIOS:
        mean = X.mean(axis=1, keepdims=True)
        if np.any(mean == 0):
            raise DomainError("mean ratios are undefined for a zero sample mean")
        return X / mean
    return X[:, :-1] - X[:, 1:]


def ancillary_vector(sample, kind) -> np.ndarray:
    return ancillary_rows(as_sample(sample, min_size=2), kind)[0]
