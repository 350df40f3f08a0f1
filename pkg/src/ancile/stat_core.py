"""Numeric primitives: sample validation, moments, the normal distribution,
and reproducible random streams.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np
from scipy import special

from .errors import DegenerateSampleError, DomainError, EmptySampleError, NonFiniteError

_STD_NORMAL = NormalDist()
_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_U64 = 1 << 64


def as_sample(values, *, min_size: int = 1) -> np.ndarray:
    """Validate ``values`` as a one-dimensional sample of finite reals.

    Returns a read-only float64 copy so callers cannot mutate it.
    """
    x = np.array(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptySampleError("sample is empty")
    if not np.all(np.isfinite(x)):
        raise NonFiniteError("sample contains NaN or infinite values")
    if x.size < min_size:
        raise EmptySampleError(f"sample needs at least {min_size} values, got {x.size}")
    x.setflags(write=False)
    return x


@dataclass(frozen=True)
class SampleMoments:
    n: int
    mean: float
    var_n: float | None
    var_n1: float | None

    @property
    def sd_n(self) -> float:
        return math.sqrt(self._need(self.var_n))

    @property
    def sd_n1(self) -> float:
        return math.sqrt(self._need(self.var_n1))

    @staticmethod
    def _need(v):
        if v is None:
            raise DegenerateSampleError("variance is undefined for a single observation")
        return v


def summarize(sample) -> SampleMoments:
    """Mean and both variance conventions, computed in two passes."""
    x = as_sample(sample)
    n = x.size
    mean = math.fsum(x) / n
    # the correction term removes the rounding left in ``mean``
    resid = x - mean
    mean += math.fsum(resid) / n
    if n == 1:
        return SampleMoments(n=1, mean=mean, var_n=None, var_n1=None)
    resid = x - mean
    ss = math.fsum(resid * resid)
    return SampleMoments(n=n, mean=mean, var_n=ss / n, var_n1=ss / (n - 1))


def order_statistics(sample) -> np.ndarray:
    return np.sort(as_sample(sample), kind="stable")


def std_normal_cdf(x: float) -> float:
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    return 0.5 * math.erfc(-x / _SQRT2)


def std_normal_pdf(x):
    return _INV_SQRT_2PI * np.exp(-0.5 * np.square(x))


def std_normal_quantile(p: float) -> float:
    """Inverse of the standard normal cdf.

    Starts from Wichura's AS241 rational approximation and applies one Newton
    step against the erfc-based cdf.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    x = _STD_NORMAL.inv_cdf(p)
    pdf = _INV_SQRT_2PI * math.exp(-0.5 * x * x)
    if pdf > 0.0:
        # work in the smaller tail to avoid cancellation in 1 - p
        if p > 0.5:
            err = (1.0 - p) - 0.5 * math.erfc(x / _SQRT2)
            x -= err / pdf
        else:
            err = std_normal_cdf(x) - p
            x -= err / pdf
    return x


def folded_normal_cdf(u: float) -> float:
    """P(|Z| <= u) for standard normal Z."""
    if not math.isfinite(u) or u < 0:
        raise DomainError("u must be a finite nonnegative number")
    return math.erf(u / _SQRT2)


# Vectorized forms used by the batch statistics.
def ndtr(x):
    return special.ndtr(x)


def folded_ndtr(u):
    return special.erf(np.asarray(u) / _SQRT2)


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream keyed by ``(seed, stream_id)``.

    Backed by Philox-4x64 with the pair packed into the 128-bit key, so streams
    are independent of call order, thread count and each other.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not (0 <= int(v) < _U64):
                raise DomainError(f"{name} must be an unsigned 64-bit integer")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def substream(seed: int, stream_id: int) -> RngStream:
    return RngStream(int(seed), int(stream_id))


def open_uniform(gen: np.random.Generator, size) -> np.ndarray:
    """Uniforms on the open interval (0, 1); never returns 0."""
    return gen.random(size) + 2.0**-54


def standard_normal(gen: np.random.Generator, size) -> np.ndarray:
    # inverse-cdf draws consume exactly one uniform each
    return special.ndtri(open_uniform(gen, size))


def require_spread(x: np.ndarray) -> None:
    if x.size < 2 or np.ptp(x) == 0.0:
        raise DegenerateSampleError("degenerate sample: all values are equal (zero variance)")
