import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ancile.errors import DegenerateSampleError, DomainError, EmptySampleError, NonFiniteError
from ancile.stat_core import (
    RngStream, as_sample, folded_normal_cdf, order_statistics, standard_normal, std_normal_cdf,
    std_normal_quantile, substream, summarize,
)

mpmath.mp.dps = 40


def mp_cdf(x):
    return float(mpmath.ncdf(x))


@pytest.mark.parametrize("xs, mean, var_n, var_n1", [
    ([1, 2, 3], 2.0, 2 / 3, 1.0),
    ([0, 2], 1.0, 1.0, 2.0),
])
def test_summarize_examples(xs, mean, var_n, var_n1):
    m = summarize(xs)
    assert m.mean == pytest.approx(mean, abs=1e-15)
    assert m.var_n == pytest.approx(var_n, rel=1e-15)
    assert m.var_n1 == pytest.approx(var_n1, rel=1e-15)


def test_summarize_constant_and_singleton():
    assert summarize([4.2] * 7).var_n == 0.0
    one = summarize([3.0])
    assert one.mean == 3.0
    with pytest.raises(DegenerateSampleError):
        one.sd_n1


@pytest.mark.parametrize("bad, exc", [([], EmptySampleError), ([1.0, np.nan], NonFiniteError),
                                      ([np.inf], NonFiniteError)])
def test_validation(bad, exc):
    with pytest.raises(exc):
        as_sample(bad)


def test_sample_is_read_only():
    x = as_sample([1, 2])
    with pytest.raises(ValueError):
        x[0] = 5


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=50),
       st.floats(0.01, 100), st.floats(-1e3, 1e3))
@settings(max_examples=200, deadline=None)
def test_summarize_affine(xs, a, b):
    m = summarize(xs)
    y = summarize([a * v + b for v in xs])
    scale = max(1.0, max(abs(v) for v in xs))
    assert y.mean == pytest.approx(a * m.mean + b, abs=1e-9 * a * scale + 1e-9 * abs(b))
    assert y.var_n == pytest.approx(a * a * m.var_n, rel=1e-7, abs=1e-12 * (a * scale) ** 2)


def test_order_statistics():
    assert list(order_statistics([3, 1, 2])) == [1, 2, 3]
    assert list(order_statistics([1, 1])) == [1, 1]
    assert list(order_statistics([-2, 5, 0])) == [-2, 0, 5]


def test_normal_cdf_against_mpmath():
    assert std_normal_cdf(0.0) == 0.5
    assert std_normal_cdf(1.0) == pytest.approx(0.8413447460685429, rel=1e-15)
    eps = np.finfo(float).eps
    for x in np.linspace(-37, 8, 451):
        ref = mp_cdf(x)
        # relative condition number of the lower tail grows like x**2
        tol = max(1e-14, 4 * (1 + x * x) * eps)
        assert std_normal_cdf(x) == pytest.approx(ref, rel=tol, abs=1e-300)


def test_normal_quantile():
    assert std_normal_quantile(0.5) == 0.0
    assert std_normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-14)
    for p in (1e-300, 1e-10, 0.01, 0.3, 0.999999):
        ref = float(mpmath.findroot(lambda z: mpmath.ncdf(z) - p, std_normal_quantile(p)))
        assert std_normal_quantile(p) == pytest.approx(ref, rel=1e-13)
    for p in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(DomainError):
            std_normal_quantile(p)


def test_quantile_cdf_roundtrip():
    for p in np.linspace(0.0005, 0.9995, 1000):
        assert std_normal_cdf(std_normal_quantile(p)) == pytest.approx(p, rel=1e-12)


def test_folded_cdf():
    assert folded_normal_cdf(0.0) == 0.0
    assert folded_normal_cdf(1.0) == pytest.approx(0.6826894921370859, rel=1e-15)
    assert abs(folded_normal_cdf(10.0) - 1.0) < 1e-12
    assert folded_normal_cdf(1.3) == pytest.approx(2 * mp_cdf(1.3) - 1, rel=1e-14)
    with pytest.raises(DomainError):
        folded_normal_cdf(-0.1)


def test_streams_deterministic_and_distinct():
    a = substream(42, 0).generator().random(100)
    b = substream(42, 0).generator().random(100)
    c = substream(42, 1).generator().random(100)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    with pytest.raises(DomainError):
        RngStream(-1, 0)


def test_normal_stream_mean():
    z = standard_normal(substream(7, 3).generator(), 10**6)
    assert abs(z.mean()) < 0.005
    assert abs(z.std() - 1) < 0.005
