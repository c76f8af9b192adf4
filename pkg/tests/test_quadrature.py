import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from welltime.quadrature import (AccuracyError, QuadResult, QuadSpec, gaussian_tail_bound,
                                 integrate_adaptive, integrate_contour_segment, integrate_gaussian_tail,
                                 integrate_sqrt_singular)


@pytest.mark.parametrize("f,lo,hi,exact", [
    (np.sin, 0.0, math.pi, 2.0),
    (np.exp, -1.0, 2.0, math.e**2 - math.exp(-1.0)),
    (lambda x: 1.0 / (1.0 + x * x), 0.0, math.inf, 0.5 * math.pi),
    (lambda x: np.exp(-x * x), 0.0, math.inf, 0.5 * math.sqrt(math.pi)),
    (lambda x: np.abs(x - 0.3), 0.0, 1.0, 0.5 * (0.09 + 0.49)),
])
def test_known_integrals(f, lo, hi, exact):
    res = integrate_adaptive(f, lo, hi)
    assert res.value == pytest.approx(exact, rel=1e-12, abs=1e-13)
    assert res.error_estimate <= 1e-11


def test_error_estimate_is_honest():
    res = integrate_adaptive(lambda x: np.cos(40 * x) * np.exp(-x), 0.0, 5.0, QuadSpec(1e-10, 1e-10))
    exact = (1 - math.exp(-5) * (math.cos(200) - 40 * math.sin(200))) / 1601.0
    assert abs(res.value - exact) <= max(res.error_estimate, 1e-14)


def test_scalar_only_integrand():
    res = integrate_adaptive(lambda x: math.sqrt(x), 0.0, 1.0)
    assert res.value == pytest.approx(2.0 / 3.0, rel=1e-10)


def test_complex_integrand():
    res = integrate_adaptive(lambda x: np.exp(1j * x), 0.0, math.pi)
    assert complex(res.value) == pytest.approx(2j, abs=1e-13)


def test_accuracy_error_names_the_integral():
    with pytest.raises(AccuracyError) as info:
        integrate_adaptive(lambda x: np.sin(1.0 / x), 1e-6, 1.0, QuadSpec(1e-14, 1e-14, 32), label="wiggly")
    assert info.value.label == "wiggly"
    assert isinstance(info.value.best, QuadResult)


@pytest.mark.parametrize("kw", [dict(abs_tol=0.0), dict(rel_tol=1.0), dict(max_subdivisions=4)])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        QuadSpec(**kw)


def test_rejects_bad_ranges():
    with pytest.raises(ValueError):
        integrate_adaptive(np.sin, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate_adaptive(np.sin, -math.inf, 0.0)


@given(st.floats(min_value=0.05, max_value=20.0))
@settings(max_examples=40, deadline=None)
def test_sqrt_singular_weight(kappa):
    # int_0^kappa dk / sqrt(kappa^2 - k^2) = pi/2 and int k^2/... = pi kappa^2 / 4
    assert integrate_sqrt_singular(lambda k: np.ones_like(k), kappa).value == pytest.approx(0.5 * math.pi)
    res = integrate_sqrt_singular(lambda k: k * k, kappa).value
    assert res == pytest.approx(0.25 * math.pi * kappa**2, rel=1e-12)


@pytest.mark.parametrize("center,width", [(0.0, 1.0), (5.0, 0.05), (30.0, 3.0)])
def test_gaussian_tail(center, width):
    f = lambda k: np.exp(-((k - center) ** 2) / (2 * width**2))  # noqa: E731
    res = integrate_gaussian_tail(f, center, width)
    exact = width * math.sqrt(0.5 * math.pi) * math.erfc(-center / (math.sqrt(2) * width))
    assert res.value == pytest.approx(exact, rel=1e-12)
    assert gaussian_tail_bound(1.0, center, width, center) == pytest.approx(width * math.sqrt(0.5 * math.pi))


def test_contour_segment_matches_antiderivative():
    res = integrate_contour_segment(lambda z: z * z, 0j, 1 + 1j)
    assert complex(res.value) == pytest.approx((1 + 1j) ** 3 / 3, abs=1e-14)


def test_contour_segment_singular_start():
    # int_0^1 dz / sqrt(z) = 2 along the real axis
    res = integrate_contour_segment(lambda z: 1 / np.sqrt(z), 0j, 1 + 0j, singular_start=True)
    assert complex(res.value) == pytest.approx(2.0, abs=1e-13)


def test_result_arithmetic():
    a = QuadResult(1.0, 1e-3, 21) + QuadResult(2.0, 2e-3, 42)
    assert a.value == 3.0 and a.error_estimate == pytest.approx(3e-3) and a.evaluations == 63
    b = a.scaled(-2.0)
    assert b.value == -6.0 and b.error_estimate == pytest.approx(6e-3)
