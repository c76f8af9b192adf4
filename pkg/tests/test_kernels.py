import numpy as np
import pytest

from welltime import _fallback, kernels
from welltime.quadrature import AccuracyError

compiled = pytest.mark.skipif(not kernels.compiled_available(), reason="compiled kernels not built")

POINTS = [(0.1, 0.5), (0.8, 12.0), (1.0, 1.0), (2.5, 0.3), (5.0, 2.0), (9.0, 1.0)]


def test_backend_selection():
    assert kernels.BACKEND in ("compiled", "python")
    assert kernels.implementation("python") is _fallback
    with pytest.raises(ValueError):
        kernels.implementation("fortran")


@compiled
@pytest.mark.parametrize("name", kernels.KERNEL_NAMES)
@pytest.mark.parametrize("u,v", POINTS)
def test_compiled_matches_python(name, u, v):
    fc = getattr(kernels.implementation("compiled"), name)
    fp = getattr(_fallback, name)
    vc, ec = fc(u, v)
    vp, ep = fp(u, v)
    assert abs(vc - vp) <= 1e-13 * max(1.0, abs(vp))
    assert ec >= 0 and ep >= 0


@pytest.mark.parametrize("backend", ["python", pytest.param("compiled", marks=compiled)])
def test_batch_matches_scalar(backend):
    mod = kernels.implementation(backend)
    u = np.array([0.5, 1.0, 3.0])
    v = np.array([[0.5], [2.0]])
    vals, errs = mod.batch("deep_z", u, v)
    assert vals.shape == (2, 3) and errs.shape == (2, 3)
    for i in range(2):
        for j in range(3):
            assert vals[i, j] == pytest.approx(mod.deep_z(u[j], v[i, 0])[0], abs=1e-15)


@pytest.mark.parametrize("backend", ["python", pytest.param("compiled", marks=compiled)])
def test_accuracy_error_on_tiny_budget(backend):
    mod = kernels.implementation(backend)
    with pytest.raises(AccuracyError):
        mod.deep_z(50.0, 0.01, 1e-16, 1e-16, 32)


def test_unknown_batch_kernel():
    with pytest.raises(KeyError):
        _fallback.batch("nope", 1.0, 1.0)
