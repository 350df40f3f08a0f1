import numpy as np
import pytest

from ancile import _backend
from ancile._backend import AD, CVM, KS
from ancile.dependence import dcov_energy, dcov_v

needs_compiled = pytest.mark.skipif("cython" not in _backend.available(),
                                    reason="compiled kernels not built")


def test_python_backend_always_available():
    assert "python" in _backend.available()
    assert _backend.get("python") is not None
    with pytest.raises(ValueError):
        _backend.get("fortran")


@needs_compiled
@pytest.mark.parametrize("kind", [KS, CVM, AD])
def test_edf_parity(kind):
    u = np.sort(np.random.default_rng(kind).random((50, 37)), axis=1)
    a = _backend.get("cython").edf_rows(u, kind)
    b = _backend.get("python").edf_rows(u, kind)
    assert np.allclose(a, b, rtol=1e-13, atol=0)


@needs_compiled
@pytest.mark.parametrize("p, q", [(1, 1), (3, 2), (10, 1)])
def test_dcov_parity(p, q):
    rng = np.random.default_rng(p * 10 + q)
    x, y = rng.normal(size=(300, p)), rng.standard_t(3, (300, q))
    for fn in ("dcov_sums", "dcov_centered"):
        a = getattr(_backend.get("cython"), fn)(x, y)
        b = getattr(_backend.get("python"), fn)(x, y)
        assert np.allclose(a, b, rtol=1e-11, atol=0), fn
    assert dcov_v(x, y, backend="cython").dcov2 == pytest.approx(
        dcov_v(x, y, backend="python").dcov2, rel=1e-11)
    assert dcov_energy(x, y, backend="cython") == pytest.approx(
        dcov_energy(x, y, backend="python"), rel=1e-10)


def test_env_forces_python(monkeypatch):
    import importlib
    monkeypatch.setenv("ANCILE_BACKEND", "python")
    mod = importlib.reload(_backend)
    try:
        assert mod.name == "python"
    finally:
        monkeypatch.delenv("ANCILE_BACKEND")
        importlib.reload(_backend)
