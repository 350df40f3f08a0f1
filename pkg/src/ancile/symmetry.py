"""Test for the center of symmetry: t statistic, sign statistic and their
weighted combination ``T_c = (T_t + a T_s) / c_a``.

The weight ``a`` is chosen by minimizing the leading term of the distance
covariance between ``T_c`` and the centered data (``dcov_objective``). Two
orientations of that objective are available:

``"literal"``
    ``g(a) = c_a^-2 [2 (sigma - 2 a m1)^2 + a^2 (p sigma^2 - m2)^2 / (2 sigma^2)]``
    with ``m1 = E{(X - nu) 1(X < 0)}``. Its minimizer for normal data is
    ``sigma / (2 m1) < 0``, a weight that cancels the mean shift and leaves the
    combined test with power near its level.
``"signal"``
    The same objective with ``m1`` reflected (``sigma + 2 a m1``), i.e. the
    truncated first moment taken over the upper half. The minimizer is the
    positive mirror weight and the combined test keeps the power of both
    components. This is the default for :func:`combined_test`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    CalibrationMismatchError,
    DegenerateSampleError,
    DomainError,
    InfeasibleWeightError,
    SampleSizeError,
)
from .results import TestResult
from .stat_core import as_sample, std_normal_cdf, std_normal_quantile

ORIENTATIONS = ("literal", "signal")
CENTERS = ("mean", "median")

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class NuisanceEstimates:
    """Plug-in moments entering the combined-variance and objective formulas."""

    nu_hat: float
    sigma_hat: float
    p_hat: float
    m1_hat: float
    m2_hat: float

    @classmethod
    def normal_population(cls, sigma: float = 1.0) -> "NuisanceEstimates":
        """Population values for N(0, sigma^2)."""
        return cls(0.0, sigma, 0.5, -sigma / math.sqrt(2 * math.pi), 0.5 * sigma * sigma)


@dataclass(frozen=True)
class WeightSearchConfig:
    lower: float = -10.0
    upper: float = 10.0
    tol: float = 1e-8
    grid_points: int = 10_000
    orientation: str = "literal"
    center: str = "mean"

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise DomainError("search bracket must be finite")
        if self.lower > self.upper:
            raise DomainError("search bracket needs lower <= upper")
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.grid_points < 2:
            raise DomainError("grid_points must be at least 2")
        if self.orientation not in ORIENTATIONS:
            raise DomainError(f"orientation must be one of {ORIENTATIONS}")
        if self.center not in CENTERS:
            raise DomainError(f"center must be one of {CENTERS}")

    def params(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "orientation": self.orientation,
                "center": self.center}


#: search used by the combined test unless the caller supplies one
DEFAULT_SEARCH = WeightSearchConfig(orientation="signal")


def _rows(x):
    x = np.asarray(x, dtype=np.float64)
    return x[None, :] if x.ndim == 1 else x


def t_stat_rows(X) -> np.ndarray:
    X = _rows(X)
    n = X.shape[1]
    if n < 2:
        raise SampleSizeError("t statistic needs n >= 2")
    mean = X.mean(axis=1)
    sd = X.std(axis=1, ddof=1)
    if np.any(sd <= 0):
        raise DegenerateSampleError("degenerate sample: all values are equal (zero variance)")
    return math.sqrt(n) * mean / sd


def sign_stat_rows(X) -> np.ndarray:
    X = _rows(X)
    n = X.shape[1]
    return 2.0 * ((X > 0).sum(axis=1) - 0.5 * n) / math.sqrt(n)


def t_stat(sample) -> float:
    """``sqrt(n) * mean / S_n`` with the (n-1)-denominator sd."""
    return float(t_stat_rows(as_sample(sample, min_size=2))[0])


def sign_stat(sample) -> float:
    """``2 n^{-1/2} sum(1(X_i > 0) - 1/2)``; zeros count as not positive."""
    return float(sign_stat_rows(as_sample(sample))[0])


@dataclass(frozen=True)
class NuisanceArrays:
    """Row-wise nuisance estimates for a batch of samples."""

    nu: np.ndarray
    sigma: np.ndarray
    p: np.ndarray
    m1: np.ndarray
    m2: np.ndarray

    def row(self, i: int) -> NuisanceEstimates:
        return NuisanceEstimates(float(self.nu[i]), float(self.sigma[i]), float(self.p[i]),
                                 float(self.m1[i]), float(self.m2[i]))

    @classmethod
    def from_estimates(cls, est: NuisanceEstimates) -> "NuisanceArrays":
        return cls(*(np.array([v], dtype=np.float64) for v in
                     (est.nu_hat, est.sigma_hat, est.p_hat, est.m1_hat, est.m2_hat)))


def nuisance_rows(X, center: str = "mean") -> NuisanceArrays:
    X = _rows(X)
    if X.shape[1] < 2:
        raise SampleSizeError("nuisance estimates need n >= 2")
    if center == "mean":
        nu = X.mean(axis=1)
    elif center == "median":
        nu = np.median(X, axis=1)
    else:
        raise DomainError(f"center must be one of {CENTERS}")
    sigma = X.std(axis=1)
    if np.any(sigma <= 0):
        raise DegenerateSampleError("degenerate sample: all values are equal (zero variance)")
    neg = X < 0
    d = X - nu[:, None]
    p = neg.mean(axis=1)
    m1 = np.where(neg, d, 0.0).mean(axis=1)
    m2 = np.where(neg, d * d, 0.0).mean(axis=1)
    return NuisanceArrays(nu, sigma, p, m1, m2)


def estimate_nuisance(sample, center: str = "mean") -> NuisanceEstimates:
    """Center, n-denominator scale, and lower-half moments of ``sample``."""
    return nuisance_rows(as_sample(sample, min_size=2), center).row(0)


def _as_arrays(nu) -> NuisanceArrays:
    if isinstance(nu, NuisanceArrays):
        return nu
    return NuisanceArrays.from_estimates(nu)


def _c2(a, s, p, m1):
    return 1.0 - 4.0 * a * m1 / s + 4.0 * a * a * p * (1.0 - p)


def _objective(a, s, p, m1, m2, orientation):
    c2 = _c2(a, s, p, m1)
    lead = s + 2.0 * a * m1 if orientation == "signal" else s - 2.0 * a * m1
    num = 2.0 * lead * lead + a * a * (p * s * s - m2) ** 2 / (2.0 * s * s)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(c2 > 0, num / np.where(c2 > 0, c2, 1.0), np.inf)


def combined_variance(a: float, nu: NuisanceEstimates) -> float:
    """``1 - 4 a m1 / sigma + 4 a^2 p (1 - p)``, the large-sample var(T_t + a T_s)."""
    c2 = float(_c2(a, nu.sigma_hat, nu.p_hat, nu.m1_hat))
    if not c2 > 0:
        raise InfeasibleWeightError(f"combined variance is {c2:.6g} at a={a}")
    return c2


def dcov_objective(a: float, nu: NuisanceEstimates, orientation: str = "literal") -> float:
    """Leading distance-covariance term between T_c and the data, up to the
    ``(2 pi n sigma^2)^{-1/2}`` factor."""
    if orientation not in ORIENTATIONS:
        raise DomainError(f"orientation must be one of {ORIENTATIONS}")
    combined_variance(a, nu)
    return float(_objective(a, nu.sigma_hat, nu.p_hat, nu.m1_hat, nu.m2_hat, orientation))


def optimize_weight_rows(nu, cfg: WeightSearchConfig = WeightSearchConfig(),
                         chunk: int = 256) -> np.ndarray:
    """Minimize the objective for every row: grid scan, then golden-section
    refinement inside the neighbouring grid cells."""
    nu = _as_arrays(nu)
    reps = nu.sigma.size
    if cfg.lower == cfg.upper:
        a = np.full(reps, cfg.lower)
        if np.any(_c2(a, nu.sigma, nu.p, nu.m1) <= 0):
            raise InfeasibleWeightError("the single admissible weight is infeasible")
        return a
    grid = np.linspace(cfg.lower, cfg.upper, cfg.grid_points)
    h = grid[1] - grid[0]
    best = np.empty(reps)
    best_g = np.empty(reps)
    for lo in range(0, reps, chunk):
        hi = min(lo + chunk, reps)
        cols = [v[lo:hi, None] for v in (nu.sigma, nu.p, nu.m1, nu.m2)]
        g = _objective(grid[None, :], *cols, cfg.orientation)
        idx = np.argmin(g, axis=1)
        gmin = g[np.arange(hi - lo), idx]
        if not np.all(np.isfinite(gmin)):
            raise InfeasibleWeightError("combined variance is nonpositive on the whole bracket")
        best[lo:hi] = grid[idx]
        best_g[lo:hi] = gmin

    s, p, m1, m2 = nu.sigma, nu.p, nu.m1, nu.m2

    def f(a):
        return _objective(a, s, p, m1, m2, cfg.orientation)

    left = np.maximum(best - h, cfg.lower)
    right = np.minimum(best + h, cfg.upper)
    x1 = right - _INVPHI * (right - left)
    x2 = left + _INVPHI * (right - left)
    f1, f2 = f(x1), f(x2)
    while np.max(right - left) > cfg.tol:
        go_left = f1 <= f2
        right = np.where(go_left, x2, right)
        left = np.where(go_left, left, x1)
        new_x1 = right - _INVPHI * (right - left)
        new_x2 = left + _INVPHI * (right - left)
        x2n = np.where(go_left, x1, new_x2)
        x1n = np.where(go_left, new_x1, x2)
        f1n = np.where(go_left, f(x1n), f2)
        f2n = np.where(go_left, f1, f(x2n))
        x1, x2, f1, f2 = x1n, x2n, f1n, f2n
    cand = 0.5 * (left + right)
    gc = f(cand)
    out = np.where(gc <= best_g, cand, best)
    if cfg.lower <= 0.0 <= cfg.upper:
        # a flat objective (e.g. no mass below zero) falls back to the t statistic
        g0 = f(np.zeros(reps))
        out = np.where(g0 <= np.minimum(gc, best_g), 0.0, out)
    return out


def optimize_weight(nu: NuisanceEstimates, cfg: WeightSearchConfig = WeightSearchConfig()) -> float:
    """Weight minimizing :func:`dcov_objective` over ``[cfg.lower, cfg.upper]``.

    Infeasible weights (nonpositive combined variance) are excluded. The
    result is never worse than the best point of a ``cfg.grid_points`` grid.
    """
    return float(optimize_weight_rows(nu, cfg)[0])


@dataclass(frozen=True)
class CombinedParts:
    t_t: np.ndarray
    t_s: np.ndarray
    a: np.ndarray
    c: np.ndarray
    t_c: np.ndarray


def combined_rows(X, cfg: WeightSearchConfig = DEFAULT_SEARCH, weight=None) -> CombinedParts:
    """Component statistics and T_c for every row.

    ``weight`` fixes ``a`` instead of searching; ``c`` is still estimated.
    """
    X = _rows(X)
    tt = t_stat_rows(X)
    ts = sign_stat_rows(X)
    nu = nuisance_rows(X, cfg.center)
    if weight is None:
        a = optimize_weight_rows(nu, cfg)
    else:
        a = np.broadcast_to(np.asarray(weight, dtype=np.float64), tt.shape).copy()
    c2 = _c2(a, nu.sigma, nu.p, nu.m1)
    if np.any(c2 <= 0):
        raise InfeasibleWeightError("combined variance is nonpositive at the chosen weight")
    c = np.sqrt(c2)
    return CombinedParts(tt, ts, a, c, (tt + a * ts) / c)


def combined_statistic(sample, cfg: WeightSearchConfig = DEFAULT_SEARCH) -> float:
    return float(combined_rows(as_sample(sample, min_size=2), cfg).t_c[0])


SYMMETRY_KINDS = ("Tt", "Ts", "Tc")


def symmetry_rows(X, kinds=SYMMETRY_KINDS, cfg: WeightSearchConfig = DEFAULT_SEARCH) -> dict:
    X = _rows(X)
    out = {}
    if "Tc" in kinds:
        parts = combined_rows(X, cfg)
        out.update(Tt=parts.t_t, Ts=parts.t_s, Tc=parts.t_c)
    else:
        if "Tt" in kinds:
            out["Tt"] = t_stat_rows(X)
        if "Ts" in kinds:
            out["Ts"] = sign_stat_rows(X)
    return {k: out[k] for k in kinds}


def combined_test(sample, alpha: float = 0.05, cfg: WeightSearchConfig | None = None,
                  calibration="asymptotic") -> TestResult:
    """One-sided test of H0: center of symmetry is 0 vs H1: center > 0.

    ``calibration`` is ``"asymptotic"`` (reject when T_c exceeds the standard
    normal 1 - alpha quantile) or a critical-value table for kind ``"Tc"``
    built with the same search configuration.
    """
    cfg = DEFAULT_SEARCH if cfg is None else cfg
    x = as_sample(sample, min_size=2)
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    parts = combined_rows(x, cfg)
    tc = float(parts.t_c[0])
    details = {
        "a_hat": float(parts.a[0]),
        "c_hat": float(parts.c[0]),
        "T_t": float(parts.t_t[0]),
        "T_s": float(parts.t_s[0]),
        "T_c": tc,
        "orientation": cfg.orientation,
        "bracket": [cfg.lower, cfg.upper],
    }
    if isinstance(calibration, str):
        if calibration != "asymptotic":
            raise DomainError("calibration must be 'asymptotic' or a critical-value table")
        crit = std_normal_quantile(1.0 - alpha)
        details["critical_value"] = crit
        p = 1.0 - std_normal_cdf(tc)
        return TestResult("Tc", tc, "upper", p, tc > crit, alpha, "asymptotic", x.size, details)
    table = calibration
    if table.kind != "Tc" or table.n != x.size:
        raise CalibrationMismatchError(
            f"table is for {table.kind} n={table.n}, need Tc n={x.size}")
    if table.params and table.params != cfg.params():
        raise CalibrationMismatchError("table was built with a different weight search")
    from .gof import mc_p_values

    p = float(mc_p_values(table.stats, tc, "upper"))
    return TestResult("Tc", tc, "upper", p, p <= alpha, alpha, table.table_id, x.size, details)


def with_bracket(cfg: WeightSearchConfig, lower: float, upper: float) -> WeightSearchConfig:
    return replace(cfg, lower=float(lower), upper=float(upper))
