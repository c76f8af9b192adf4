import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from welltime import kernels
from welltime.domain import DomainError
from welltime.packet import GaussianPacket
from welltime.quadrature import QuadSpec
from welltime.refraction import (ConsistencyError, Method, RefractionResult, barrier_refraction,
                                 barrier_well_continuation_check, cancellation_identity,
                                 deep_well_mantissa, deep_well_r_kappa, deep_well_refraction,
                                 direct_r_kappa_mantissa, free_q, free_q_momentum, free_q_zeta,
                                 r_kappa_log, shifted_refraction, well_refraction, zeta_oracle_refraction)

ORACLE_GRID = [(k0, s, q) for k0, s, q in itertools.product((1, 2, 3, 5, 8), (0.3, 0.5, 1, 2, 4),
                                                              (0.2, 0.5, 1, 1.5, 2)) if s * q <= 2]


def gp(sigma, k0, q0=-30.0):
    return GaussianPacket(q0, sigma, k0)


# --- free correction factor


@pytest.mark.parametrize("k0,sigma", [(1, 0.5), (5, 2), (0.3, 1.0), (2, 0.1)])
def test_free_q_three_ways(k0, sigma):
    p = gp(sigma, k0)
    closed = p.free_q_closed()
    assert free_q(p, k0) == closed
    assert float(free_q_zeta(p, k0).value) == pytest.approx(closed, abs=1e-12)
    assert float(free_q_momentum(p, k0).value) == pytest.approx(closed, abs=1e-12)


# --- route equivalence


@pytest.mark.parametrize("k0,sigma,kappa", ORACLE_GRID[::7])
def test_momentum_space_matches_zeta_oracle(k0, sigma, kappa):
    p = gp(sigma, k0)
    assert well_refraction(p, k0, kappa).total == pytest.approx(zeta_oracle_refraction(p, k0, kappa), abs=1e-9)


@pytest.mark.parametrize("k0,sigma,kappa", [(5, 10, 1), (5, 30, 1), (1, 1, 5), (2, 0.5, 3), (5, 0.1, 0.2)])
def test_momentum_space_matches_shifted_route(k0, sigma, kappa):
    p = gp(sigma, k0)
    r = well_refraction(p, k0, kappa).total
    assert shifted_refraction(p, kappa) == pytest.approx(r, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("k0,sigma,kappa", [(2, 1, 1), (1, 0.5, 1.5), (3, 0.4, 2)])
def test_generic_path_matches_gaussian_kernels(wrap, k0, sigma, kappa):
    p = gp(sigma, k0)
    fast = well_refraction(p, k0, kappa)
    slow = well_refraction(wrap(p), k0, kappa)
    for name in ("r_plus", "r_minus", "r_kappa", "total"):
        assert getattr(slow, name) == pytest.approx(getattr(fast, name), rel=1e-9, abs=1e-12)
    assert r_kappa_log(wrap(p), k0, kappa)[0] == pytest.approx(r_kappa_log(p, k0, kappa)[0], rel=1e-10)


def test_generic_zeta_oracle(wrap):
    p = gp(0.5, 2.0)
    assert zeta_oracle_refraction(wrap(p), 2.0, 1.0) == pytest.approx(well_refraction(p, 2.0, 1.0).total,
                                                                       abs=1e-9)


@pytest.mark.skipif(not kernels.compiled_available(), reason="compiled kernels not built")
def test_backends_give_the_same_refraction(monkeypatch):
    from welltime import _fallback, refraction
    p = gp(0.7, 3.0)
    a = well_refraction(p, 3.0, 1.7)
    for name in kernels.KERNEL_NAMES:
        monkeypatch.setattr(refraction.kernels, name, getattr(_fallback, name))
    b = well_refraction(p, 3.0, 1.7)
    assert b.total == pytest.approx(a.total, rel=1e-12)


# --- result bookkeeping and small kappa


@given(st.floats(0.2, 5.0), st.floats(0.2, 3.0), st.floats(0.0, 4.0))
@settings(max_examples=60, deadline=None)
def test_terms_sum_to_total(k0, sigma, kappa):
    r = well_refraction(gp(sigma, k0), k0, kappa)
    scale = max(1.0, abs(r.r_plus), abs(r.r_minus), abs(r.r_kappa))
    assert abs(r.r_plus + r.r_minus + r.r_kappa - r.total) <= 1e-12 * scale
    assert r.error_estimate >= 0


def test_result_rejects_inconsistent_sum():
    with pytest.raises(ValueError):
        RefractionResult(1.0, 0.0, 0.0, 2.0, 1.0, Method.MOMENTUM_SPACE, 0.0)
    with pytest.raises(ValueError):
        RefractionResult(1.0, 0.0, 0.0, 1.0, 1.0, Method.MOMENTUM_SPACE, -1.0)


def test_kappa_zero_routes_to_free_q():
    p = gp(0.5, 1.0)
    r = well_refraction(p, 1.0, 0.0)
    assert r.total == r.q_free == free_q(p, 1.0)
    assert r.r_minus == 0.0 and r.r_kappa == 0.0


@pytest.mark.parametrize("k0,sigma", [(1, 0.5), (1, 2), (5, 0.5), (5, 2)])
def test_small_kappa_approaches_free_q(k0, sigma):
    p = gp(sigma, k0)
    assert abs(well_refraction(p, k0, 1e-8).total - free_q(p, k0)) <= 1e-8


def test_r_kappa_is_q0_independent():
    a = well_refraction(gp(1.0, 1.0, -10.0), 1.0, 2.0).r_kappa
    b = well_refraction(gp(1.0, 1.0, -900.0), 1.0, 2.0).r_kappa
    assert abs(a - b) <= 1e-12 * abs(a)


def test_large_in_well_term_overflow_and_log_form():
    p = gp(1.0, 1.0)
    with pytest.raises(OverflowError):
        well_refraction(p, 1.0, 25.0)
    logv, sign = r_kappa_log(p, 1.0, 25.0)
    assert sign in (-1.0, 1.0)
    assert logv == pytest.approx(2 * (625 - 1) + math.log(abs(deep_well_mantissa(p, 25.0))), rel=1e-12)


@pytest.mark.parametrize("args", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5)])
def test_invalid_inputs(args):
    with pytest.raises(DomainError):
        well_refraction(gp(1.0, 1.0), *args)


def test_oracle_overflow_guard():
    with pytest.raises(OverflowError):
        zeta_oracle_refraction(gp(10.0, 5.0), 5.0, 5.0)


# --- classical limit


def test_wide_packet_tends_to_classical_index():
    r = well_refraction(gp(10.0, 5.0), 5.0, 1.0).total
    assert r == pytest.approx(0.98066954483455, abs=1e-12)  # frozen from independent quadrature
    assert abs(r - 5 / math.sqrt(26)) <= 1e-4


# --- barrier


def test_barrier_instantaneous_tunnelling():
    assert abs(barrier_refraction(gp(2.0, 1.0), 1.0, 10.0)) < 1e-6


def test_barrier_limits():
    p = gp(1.0, 2.0)
    assert barrier_refraction(p, 2.0, 0.0) == free_q(p, 2.0)
    # far above the barrier the index approaches k0 / sqrt(k0^2 - kappa0^2)
    assert barrier_refraction(gp(10.0, 10.0), 10.0, 1.0) == pytest.approx(10 / math.sqrt(99), abs=1e-2)


# --- well <-> barrier continuation


@pytest.mark.parametrize("k0,sigma,kappa0", [(2, 1, 1), (5, 0.5, 2), (1, 2, 0.5)])
def test_continuation_checks_pass(k0, sigma, kappa0):
    rep = barrier_well_continuation_check(gp(sigma, k0), kappa0)
    assert rep.passed
    assert rep.path_deviation <= 1e-7 and rep.assembly_deviation <= 1e-7
    assert rep.cancellation.passed


def test_wrong_branch_is_detected():
    rep = cancellation_identity(gp(1.0, 2.0), 2.0, 1.0, branch_sign=-1)
    assert not rep.passed
    assert rep.residual > 0.1
    with pytest.raises(ConsistencyError):
        barrier_well_continuation_check(gp(1.0, 2.0), 1.0, branch_sign=-1)


def test_continuation_at_zero_kappa():
    rep = barrier_well_continuation_check(gp(1.0, 2.0), 0.0)
    assert rep.passed


# --- deep-well form


@pytest.mark.parametrize("u,v", list(itertools.product((0.5, 2.0, 4.0), (0.5, 1.0, 2.0))))
def test_deep_well_form_matches_direct(u, v):
    p = GaussianPacket(0.0, 1.0, v)
    assert abs(deep_well_mantissa(p, u) - direct_r_kappa_mantissa(p, u)) <= 1e-7


def test_deep_well_refraction_agrees_with_momentum_space():
    p = gp(1.0, 1.0)
    a = deep_well_refraction(p, 3.0)
    b = well_refraction(p, 1.0, 3.0)
    assert a.method is Method.DEEP_WELL_FORM
    assert a.total == pytest.approx(b.total, rel=1e-10)
    assert deep_well_r_kappa(p, 3.0) == pytest.approx(b.r_kappa, rel=1e-10)


def test_im_z_oscillates_at_unit_v():
    u = np.linspace(1.0, 10.0, 201)
    vals, _ = kernels.batch("deep_z", u, 1.0)
    assert np.sum(np.diff(np.sign(vals.imag)) != 0) >= 2


def test_tight_budget_reports_the_integral():
    from welltime.quadrature import AccuracyError
    with pytest.raises(AccuracyError):
        deep_well_mantissa(GaussianPacket(0.0, 1.0, 0.01), 50.0, QuadSpec(1e-16, 1e-16, 32))
