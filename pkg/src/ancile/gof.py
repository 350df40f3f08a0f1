"""Normality tests: classical SW/AD/CvM/KS/Spiegelhalter and the folded
(``|Z|``-based) modifications mSW/mAD/mCvM/mKS.

Every statistic has a batch form operating on a ``(reps, n)`` matrix, which
is what calibration and power studies use; the scalar functions are thin
wrappers over it.
"""
from __future__ import annotations

import math
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import special

from . import _backend
from .errors import (
    BoundaryError,
    CalibrationMismatchError,
    DegenerateSampleError,
    DomainError,
    SampleSizeError,
)
from .results import TestResult
from .stat_core import as_sample, folded_ndtr, ndtr

#: probability clamp for the folded AD statistic when some |Z| is exactly 0
FOLD_EPS = 1e-12

SW_MIN_N = 3
SW_MAX_N = 5000


class GofKind(str, Enum):
    SW = "SW"
    AD = "AD"
    CVM = "CvM"
    KS = "KS"
    S = "S"
    MSW = "mSW"
    MAD = "mAD"
    MCVM = "mCvM"
    MKS = "mKS"

    @property
    def tail(self) -> str:
        return "lower" if self in (GofKind.SW, GofKind.MSW) else "upper"

    @property
    def modified(self) -> bool:
        return self.value.startswith("m")

    @property
    def base(self) -> "GofKind":
        """Classical counterpart of a modified kind (identity otherwise)."""
        return GofKind(self.value[1:]) if self.modified else self

    @classmethod
    def parse(cls, tag) -> "GofKind":
        if isinstance(tag, cls):
            return tag
        for k in cls:
            if k.value.lower() == str(tag).lower():
                return k
        raise DomainError(f"unknown normality test {tag!r}")


ALL_KINDS = tuple(GofKind)

_EDF_CODE = {GofKind.KS: _backend.KS, GofKind.CVM: _backend.CVM, GofKind.AD: _backend.AD}


def _rows(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return x[None, :] if x.ndim == 1 else x


def _check_spread(ss: np.ndarray) -> None:
    if np.any(ss <= 0.0):
        raise DegenerateSampleError("degenerate sample: all values are equal (zero variance)")


def standardize_rows(X) -> np.ndarray:
    """Row-wise ``(x - mean) / sd`` with the n-denominator sd."""
    X = _rows(X)
    n = X.shape[1]
    if n < 2:
        raise SampleSizeError("standardization needs n >= 2")
    resid = X - X.mean(axis=1, keepdims=True)
    ss = np.einsum("ij,ij->i", resid, resid)
    _check_spread(ss)
    return resid / np.sqrt(ss / n)[:, None]


def standardize(sample) -> np.ndarray:
    """Center and scale so the result has mean 0 and sum of squares n.

    The scale is the n-denominator standard deviation, which makes every
    downstream statistic affine invariant.
    """
    return standardize_rows(as_sample(sample))[0]


def edf_statistic(u, kind) -> float:
    """KS, CvM or AD distance between sorted probabilities and the uniform law."""
    kind = GofKind.parse(kind)
    if kind not in _EDF_CODE:
        raise DomainError(f"{kind.value} is not an EDF statistic")
    u = np.asarray(u, dtype=np.float64).ravel()
    if u.size == 0:
        raise SampleSizeError("need at least one probability")
    if np.any(np.diff(u) < 0):
        raise DomainError("probabilities must be sorted ascending")
    if np.any((u < 0) | (u > 1)):
        raise DomainError("probabilities must lie in [0, 1]")
    if kind is GofKind.AD and np.any((u <= 0) | (u >= 1)):
        raise BoundaryError("AD statistic needs probabilities strictly inside (0, 1)")
    return float(_backend.kernels.edf_rows(u[None, :].copy(), _EDF_CODE[kind])[0])


@lru_cache(maxsize=64)
def sw_coefficients(n: int) -> np.ndarray:
    """Shapiro-Wilk weights via Royston's approximation (antisymmetric, unit norm)."""
    if not SW_MIN_N <= n <= SW_MAX_N:
        raise SampleSizeError(f"SW needs {SW_MIN_N} <= n <= {SW_MAX_N}, got {n}")
    if n == 3:
        h = math.sqrt(0.5)
        a = np.array([-h, 0.0, h])
        a.setflags(write=False)
        return a
    i = np.arange(1, n + 1)
    m = special.ndtri((i - 0.375) / (n + 0.25))
    ssm = float(m @ m)
    u = 1.0 / math.sqrt(n)
    c1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
    c2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
    an = m[-1] / math.sqrt(ssm) + np.polyval(c1[::-1], u)
    if n > 5:
        an1 = m[-2] / math.sqrt(ssm) + np.polyval(c2[::-1], u)
        phi = (ssm - 2 * m[-1] ** 2 - 2 * m[-2] ** 2) / (1 - 2 * an**2 - 2 * an1**2)
        a = m / math.sqrt(phi)
        a[-1], a[-2], a[0], a[1] = an, an1, -an, -an1
    else:
        phi = (ssm - 2 * m[-1] ** 2) / (1 - 2 * an**2)
        a = m / math.sqrt(phi)
        a[-1], a[0] = an, -an
    a.setflags(write=False)
    return a


def _sw_sorted(Xs: np.ndarray) -> np.ndarray:
    a = sw_coefficients(Xs.shape[1])
    resid = Xs - Xs.mean(axis=1, keepdims=True)
    ss = np.einsum("ij,ij->i", resid, resid)
    _check_spread(ss)
    num = (Xs @ a) ** 2
    return num / ss


def sw_statistic(sample) -> float:
    x = as_sample(sample)
    if not SW_MIN_N <= x.size <= SW_MAX_N:
        raise SampleSizeError(f"SW needs {SW_MIN_N} <= n <= {SW_MAX_N}, got {x.size}")
    return float(_sw_sorted(np.sort(x)[None, :])[0])


def mirror_rows(A: np.ndarray) -> np.ndarray:
    """Row-wise ``[-|z|_(n), ..., -|z|_(1), |z|_(1), ..., |z|_(n)]`` (sorted)."""
    A = np.sort(np.abs(_rows(A)), axis=1)
    return np.concatenate([-A[:, ::-1], A], axis=1)


def mirror_sample(z) -> np.ndarray:
    return mirror_rows(as_sample(z))[0]


def _spiegelhalter_rows(X: np.ndarray) -> np.ndarray:
    n = X.shape[1]
    resid = X - X.mean(axis=1, keepdims=True)
    ss = np.einsum("ij,ij->i", resid, resid)
    _check_spread(ss)
    s = np.sqrt(ss / (n - 1))
    u = np.ptp(X, axis=1) / s
    g = np.abs(resid).sum(axis=1) / (s * math.sqrt(n * (n - 1)))
    log_cn = special.gammaln(n + 1) / (n - 1) - math.log(2 * n)
    k = n - 1
    # ((c_n u)^-k + g^-k)^(1/k), evaluated in log space to survive large n
    return np.exp(np.logaddexp(-k * (log_cn + np.log(u)), -k * np.log(g)) / k)


def spiegelhalter_statistic(sample) -> float:
    """Spiegelhalter's omnibus statistic against symmetric alternatives.

    Combines the studentized range (optimal against the uniform) with Geary's
    mean-deviation ratio (optimal against the double exponential); large
    values indicate non-normality in either direction.
    """
    x = as_sample(sample, min_size=3)
    return float(_spiegelhalter_rows(x[None, :])[0])


def batch_statistics(X, kinds=ALL_KINDS) -> dict[GofKind, np.ndarray]:
    """All requested statistics for each row of ``X``, sharing the sorting work."""
    X = _rows(X)
    kinds = [GofKind.parse(k) for k in kinds]
    n = X.shape[1]
    out: dict[GofKind, np.ndarray] = {}
    Z = standardize_rows(X)
    kern = _backend.kernels
    need_sorted = any(k in (GofKind.SW, GofKind.AD, GofKind.CVM, GofKind.KS) for k in kinds)
    need_abs = any(k.modified for k in kinds)
    if need_sorted:
        Zs = np.sort(Z, axis=1)
    if need_abs:
        As = np.sort(np.abs(Z), axis=1)
    for k in kinds:
        if k is GofKind.SW:
            if not SW_MIN_N <= n <= SW_MAX_N:
                raise SampleSizeError(f"SW needs {SW_MIN_N} <= n <= {SW_MAX_N}, got {n}")
            out[k] = _sw_sorted(Zs)
        elif k in _EDF_CODE:
            U = np.ascontiguousarray(ndtr(Zs))
            if k is GofKind.AD and np.any((U <= 0) | (U >= 1)):
                raise BoundaryError("normal cdf saturated; AD statistic undefined")
            out[k] = kern.edf_rows(U, _EDF_CODE[k])
        elif k is GofKind.S:
            out[k] = _spiegelhalter_rows(X)
        elif k is GofKind.MSW:
            out[k] = _sw_sorted(np.concatenate([-As[:, ::-1], As], axis=1))
        else:
            G = folded_ndtr(As)
            if k is GofKind.MAD:
                G = np.clip(G, FOLD_EPS, 1.0 - FOLD_EPS)
            out[k] = kern.edf_rows(np.ascontiguousarray(G), _EDF_CODE[k.base])
    return out


def classical_test_statistic(sample, kind) -> float:
    kind = GofKind.parse(kind)
    if kind not in _EDF_CODE:
        raise DomainError(f"{kind.value} is not one of AD, CvM, KS")
    x = as_sample(sample)
    return float(batch_statistics(x, [kind])[kind][0])


def modified_test_statistic(sample, kind) -> float:
    kind = GofKind.parse(kind)
    if not kind.modified:
        raise DomainError(f"{kind.value} is not a modified test")
    x = as_sample(sample)
    if kind is GofKind.MSW and not SW_MIN_N <= 2 * x.size <= SW_MAX_N:
        raise SampleSizeError("mirrored sample exceeds the SW size limit")
    return float(batch_statistics(x, [kind])[kind][0])


def statistic(sample, kind) -> float:
    """Any of the nine normality statistics for a single sample."""
    kind = GofKind.parse(kind)
    return float(batch_statistics(as_sample(sample), [kind])[kind][0])


def tail_counts(sorted_stats: np.ndarray, observed, tail: str) -> np.ndarray:
    """Number of calibration values at least as extreme as each observed value."""
    observed = np.asarray(observed, dtype=np.float64)
    if tail == "upper":
        return sorted_stats.size - np.searchsorted(sorted_stats, observed, side="left")
    if tail == "lower":
        return np.searchsorted(sorted_stats, observed, side="right")
    raise DomainError(f"tail must be 'upper' or 'lower', got {tail!r}")


def mc_p_values(sorted_stats: np.ndarray, observed, tail: str) -> np.ndarray:
    """Add-one Monte Carlo p-values: (1 + #as-extreme) / (N + 1)."""
    return (1.0 + tail_counts(sorted_stats, observed, tail)) / (sorted_stats.size + 1.0)


def gof_test(sample, kind, table, alpha: float = 0.05) -> TestResult:
    """Test normality of ``sample`` against a Monte Carlo critical-value table."""
    kind = GofKind.parse(kind)
    x = as_sample(sample)
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    if table.kind != kind.value:
        raise CalibrationMismatchError(f"table is for {table.kind}, test is {kind.value}")
    if table.n != x.size:
        raise CalibrationMismatchError(f"table is for n={table.n}, sample has n={x.size}")
    stat = statistic(x, kind)
    p = float(mc_p_values(table.stats, stat, kind.tail))
    return TestResult(
        kind=kind.value,
        statistic=stat,
        tail=kind.tail,
        p_value=p,
        reject=p <= alpha,
        alpha=alpha,
        calibration_id=table.table_id,
        n=x.size,
    )
