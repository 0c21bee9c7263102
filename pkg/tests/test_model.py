import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abcone.model import DEGENERATE_TOL, Regime, SystemParams, channels, classify, effective_j

alphas = st.floats(0.2, 2.0)
fluxes = st.floats(-2.0, 2.0)
spins = st.sampled_from([1, -1])


def test_free_plane_spin_up():
    # flat space, no flux: j = n for s = +1
    p = SystemParams()
    assert [effective_j(p, n) for n in range(-2, 3)] == [-2.0, -1.0, 0.0, 1.0, 2.0]


def test_cone_with_flux_example():
    p = SystemParams(alpha=0.9, flux=0.3, spin=-1)
    for n in range(-3, 4):
        assert effective_j(p, n) == pytest.approx((n + 0.75) / 0.9, rel=1e-15)


def test_channel_listing():
    p = SystemParams(alpha=0.9, flux=0.3, spin=-1)
    out = channels(p, -2, 1)
    assert [c.n for c, _ in out] == [-2, -1, 0, 1]
    assert [c.m for c, _ in out] == [-1.5, -0.5, 0.5, 1.5]
    assert [r for _, r in out] == [
        Regime.ESSENTIALLY_SELF_ADJOINT,
        Regime.EXTENSION_REQUIRED,
        Regime.EXTENSION_REQUIRED,
        Regime.ESSENTIALLY_SELF_ADJOINT,
    ]


def test_channels_bad_range():
    with pytest.raises(ValueError):
        channels(SystemParams(), 2, 1)


@pytest.mark.parametrize(
    "j, regime",
    [
        (0.0, Regime.DEGENERATE),
        (DEGENERATE_TOL, Regime.DEGENERATE),
        (1e-11, Regime.EXTENSION_REQUIRED),
        (0.999, Regime.EXTENSION_REQUIRED),
        (1.0, Regime.ESSENTIALLY_SELF_ADJOINT),
        (-3.2, Regime.ESSENTIALLY_SELF_ADJOINT),
    ],
)
def test_classify(j, regime):
    assert classify(j) is regime


@pytest.mark.parametrize(
    "kwargs",
    [
        {"alpha": 0.0},
        {"alpha": -1.0},
        {"mass": 0.0},
        {"core_radius": -0.1},
        {"spin": 0},
        {"spin": 2},
        {"flux": math.nan},
        {"alpha": math.inf},
    ],
)
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        SystemParams(**kwargs)


@given(alphas, fluxes, spins, st.integers(-50, 50))
def test_shift_covariance(alpha, flux, spin, n):
    p = SystemParams(alpha=alpha, flux=flux, spin=spin)
    assert effective_j(p, n + 1) - effective_j(p, n) == pytest.approx(1 / alpha, rel=1e-9, abs=1e-12)


@given(alphas, fluxes, fluxes, spins, st.integers(-20, 20))
def test_affine_in_flux(alpha, f1, f2, spin, n):
    j1 = effective_j(SystemParams(alpha=alpha, flux=f1, spin=spin), n)
    j2 = effective_j(SystemParams(alpha=alpha, flux=f2, spin=spin), n)
    assert j1 - j2 == pytest.approx(-(f1 - f2) / alpha, rel=1e-9, abs=1e-10)


@given(st.floats(-5, 5))
def test_classify_even(j):
    assert classify(j) is classify(-j)
