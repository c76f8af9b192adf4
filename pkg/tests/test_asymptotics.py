import math
import warnings

import pytest

from welltime.asymptotics import (DivergentRegimeError, Regime, RegimeWarning, deep_well_dominant_r,
                                  high_energy_r, narrow_shallow_r, printed_struve_omega, scaled_m_derivative,
                                  wide_packet_r)
from welltime.domain import DomainError
from welltime.packet import GaussianPacket
from welltime.refraction import well_refraction


def gp(sigma, k0):
    return GaussianPacket(-200.0, sigma, k0)


# --- wide packets


@pytest.mark.parametrize("n,bound", [(0, 1e-4), (1, 1e-7), (2, 1e-10), (3, 1e-13)])
def test_wide_packet_orders(n, bound):
    p = gp(10.0, 5.0)
    exact = well_refraction(p, 5.0, 1.0).total
    res = wide_packet_r(p, 1.0, n)
    assert abs(res.value - exact) <= bound
    assert res.regime is Regime.WIDE_PACKET


def test_wide_packet_estimate_tracks_error():
    p = gp(10.0, 5.0)
    exact = well_refraction(p, 5.0, 1.0).total
    res = wide_packet_r(p, 1.0, 1)
    err = abs(res.value - exact)
    assert 0.1 * err <= res.truncation_estimate <= 10 * err


def test_wide_packet_limits_and_warning():
    with pytest.raises(DomainError):
        wide_packet_r(gp(10.0, 5.0), 1.0, 7)
    with pytest.warns(RegimeWarning):
        wide_packet_r(gp(0.2, 5.0), 1.0, 2)


def test_wide_packet_optimal_index():
    with pytest.warns(RegimeWarning):
        res = wide_packet_r(gp(0.8, 2.0), 1.0, 6)
    assert res.optimal_index is not None and 1 <= res.optimal_index <= 7


# --- narrow packets, shallow wells


def test_narrow_shallow():
    p = gp(0.1, 5.0)
    exact = well_refraction(p, 5.0, 0.2).total
    res = narrow_shallow_r(p, 0.2)
    assert abs(res.value - exact) <= 1e-4
    assert abs(res.value - exact) <= 2 * res.truncation_estimate


def test_scaled_m_derivative_zero_is_q():
    p = gp(0.7, 1.3)
    assert scaled_m_derivative(0, 0.7 * 1.3) == pytest.approx(p.free_q_closed(), rel=1e-13)


def test_printed_struve_form_is_not_the_correction():
    # kept only for comparison; it does not reproduce R - Q
    p = gp(0.1, 5.0)
    exact = well_refraction(p, 5.0, 0.2).total - p.free_q_closed()
    assert exact == pytest.approx(4.001020e-4, rel=1e-6)
    assert abs(printed_struve_omega(p, 0.2) - exact) > 0.5 * abs(exact)


def test_narrow_shallow_warns_outside_regime():
    with pytest.warns(RegimeWarning):
        narrow_shallow_r(gp(1.0, 1.0), 2.0)


# --- high energy


@pytest.mark.parametrize("ratio", [0.05, 0.1, 0.25])
def test_high_energy_j0_slice(ratio):
    energy = 12.5
    res = high_energy_r(gp(1.0, 5.0), energy, ratio * energy, j_max=0, l_max=60)
    assert abs(res.value - math.sqrt(1.0 / (1.0 + ratio))) <= 1e-10


def test_high_energy_double_series():
    p = gp(1.0, 10.0)
    energy = 50.0
    depth = 2.0  # kappa = 2
    exact = well_refraction(p, 10.0, 2.0).total
    for j_max in range(5):
        res = high_energy_r(p, energy, depth, j_max=j_max, l_max=8)
        assert abs(res.value - exact) <= res.truncation_estimate
    assert abs(res.value - exact) <= 1e-10


def test_high_energy_divergence():
    with pytest.raises(DivergentRegimeError):
        high_energy_r(gp(1.0, 1.0), 1.0, 1.5, 1, 1)
    with pytest.raises(DomainError):
        high_energy_r(gp(1.0, 1.0), 0.0, 0.1, 1, 1)


# --- deep wells


def test_deep_well_dominant_term():
    p = gp(1.0, 1.0)
    full = well_refraction(p, 1.0, 5.0).r_kappa
    res = deep_well_dominant_r(p, 5.0)
    # the dropped term is tiny next to |full| ~ 1e20; allow for rounding in full
    assert abs(res.value - full) <= res.truncation_estimate + 8 * 2.2e-16 * abs(full)
    assert res.regime is Regime.DEEP_WELL


def test_deep_well_dominant_guards():
    with pytest.raises(DomainError):
        deep_well_dominant_r(gp(1.0, 1.0), 0.0)
    with pytest.raises(OverflowError):
        deep_well_dominant_r(gp(1.0, 1.0), 30.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        with pytest.raises(RegimeWarning):
            deep_well_dominant_r(gp(1.0, 1.0), 1.5)
