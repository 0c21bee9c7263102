import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abcone.model import SystemParams, channels
from abcone.scattering import (
    AMPLITUDE_CONVENTION,
    amplitude,
    channel_lambda,
    delta_m,
    mu,
    phase_shift,
    s_matrix,
    scatter,
)

orders = st.floats(0.01, 0.99)
lams = st.one_of(st.floats(-1e6, 1e6), st.just(math.inf))
ks = st.floats(1e-3, 1e3)
ms = st.sampled_from([-2.5, -1.5, -0.5, 0.5, 1.5, 2.5])
fluxes = st.floats(-0.45, 0.45)


def test_worked_phase_shift():
    # a = -(2/7) sqrt(pi), c = sqrt(pi), cos(pi/2) = 0
    assert mu(-1 / 7, 0.5, 2.0) == pytest.approx(-2 / 7, rel=1e-14)
    expected = -0.1 * math.pi + math.atan(-2 / 7)
    assert phase_shift(-1 / 7, 0.5, 0.5, 0.2, 2.0) == pytest.approx(expected, rel=1e-14)


def test_delta_m_values():
    assert delta_m(0.5, 0.2) == pytest.approx(-0.1 * math.pi)
    assert delta_m(-0.5, 0.2) == pytest.approx(0.1 * math.pi)


@given(st.floats(-50, 50))
def test_delta_m_without_flux(m):
    assert delta_m(m, 0.0) == 0.0


def test_mu_limits():
    assert mu(0.0, 0.3, 1.0) == 0.0
    assert mu(math.inf, 0.3, 1.0) == pytest.approx(math.tan(0.3 * math.pi))


@pytest.mark.parametrize("k", [0.0, -1.0, math.inf])
def test_bad_wavenumber(k):
    with pytest.raises(ValueError):
        mu(-1.0, 0.3, k)


@given(lams, orders, ms, fluxes, ks)
def test_unitarity(lam, v, m, flux, k):
    assert abs(abs(s_matrix(lam, v, m, flux, k)) - 1) < 1e-12


@given(lams, orders, ms, fluxes, ks)
def test_phase_consistency(lam, v, m, flux, k):
    res = scatter(lam, v, m, flux, k)
    assert abs(res.s_value - cmath.exp(2j * res.delta)) < 1e-12


@given(orders, ms, fluxes, ks)
def test_limit_cases(v, m, flux, k):
    ab = cmath.exp(2j * delta_m(m, flux))
    assert abs(s_matrix(0.0, v, m, flux, k) - ab) < 1e-12
    assert abs(s_matrix(math.inf, v, m, flux, k) - ab * cmath.exp(2j * math.pi * v)) < 1e-12


@pytest.mark.parametrize("v", [0.1, 0.5, 0.9])
def test_small_lambda_is_linear(v):
    s0 = s_matrix(0.0, v, 0.5, 0.2, 1.0)
    d4 = abs(s_matrix(1e-4, v, 0.5, 0.2, 1.0) - s0)
    d6 = abs(s_matrix(1e-6, v, 0.5, 0.2, 1.0) - s0)
    assert d4 / d6 == pytest.approx(100.0, rel=1e-3)


@pytest.mark.parametrize("v", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_large_lambda_approaches_infinite(v, sign):
    s_inf = s_matrix(math.inf, v, 0.5, 0.2, 1.0)
    assert abs(s_matrix(sign * 1e8, v, 0.5, 0.2, 1.0) - s_inf) < 1e-6


def test_self_adjoint_channel_is_pure_ab():
    res = scatter(-1.0, 1.4, 1.5, 0.3, 2.0)
    assert res.mu == 0.0 and res.theta == 0.0
    assert res.s_value == pytest.approx(cmath.exp(2j * delta_m(1.5, 0.3)))


def test_channel_lambda_override():
    p = SystemParams(alpha=0.9, flux=0.3, spin=-1)
    assert channel_lambda(p, 0, 0.75 / 0.9, {0: -2.0}) == -2.0
    assert channel_lambda(p, 3, 3.75 / 0.9, {3: -2.0}) is None


def test_amplitude_vanishes_without_defect():
    prof = amplitude(SystemParams(), None, 1.0, np.linspace(0, 2 * math.pi, 7), -4, 4)
    assert np.all(prof.amplitude == 0)
    assert prof.edge_weight == 0.0
    assert prof.convention == AMPLITUDE_CONVENTION


def test_single_channel_isotropic():
    p = SystemParams(alpha=0.9, flux=0.3, spin=-1)
    prof = amplitude(p, None, 2.0, np.linspace(0, 2 * math.pi, 13), 0, 0)
    assert np.allclose(prof.dcs, prof.dcs[0], rtol=1e-13)
    s_val = s_matrix(channel_lambda(p, 0, 0.75 / 0.9, None), 0.75 / 0.9, 0.5, 0.3, 2.0)
    assert prof.dcs[0] == pytest.approx(abs(s_val - 1) ** 2 / (2 * math.pi * 2.0), rel=1e-13)


def test_truncation_stable_without_flux():
    # flux = 0 on a cone: only finitely many channels scatter at all
    p = SystemParams(alpha=1.0, flux=0.0, spin=1, core_radius=0.5)
    angles = np.linspace(0.1, 3.0, 5)
    a = amplitude(p, {0: -1.0}, 1.0, angles, -3, 3)
    b = amplitude(p, {0: -1.0}, 1.0, angles, -10, 10)
    assert np.allclose(a.amplitude, b.amplitude, atol=1e-14)


def test_amplitude_matches_loop():
    p = SystemParams(alpha=0.8, flux=0.25, spin=1, core_radius=0.3)
    angles = [0.0, 0.7, 2.0, 4.4]
    prof = amplitude(p, None, 3.0, angles, -3, 3)
    pref = 1 / cmath.sqrt(2j * math.pi * 3.0)
    for i, phi in enumerate(angles):
        acc = 0j
        for ch, _ in channels(p, -3, 3):
            lam = channel_lambda(p, ch.n, ch.j, None)
            acc += (s_matrix(0.0 if lam is None else lam, ch.j, ch.m, p.flux, 3.0) - 1) * cmath.exp(1j * ch.n * phi)
        assert prof.amplitude[i] == pytest.approx(pref * acc, rel=1e-13, abs=1e-15)


def test_ab_tail_reports_edge_weight():
    prof = amplitude(SystemParams(flux=0.3), None, 1.0, [0.5], -20, 20)
    assert prof.edge_weight > 0.1
