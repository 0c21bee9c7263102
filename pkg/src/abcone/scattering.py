"""Per-channel phase shifts and S-matrix, and the 2D partial-wave amplitude.

For an extension channel (v = |j| in (0, 1)) with parameter lam the radial
scattering solution is J_v(kr) - mu Y_v(kr), where

    mu = a sin(v pi) / (a cos(v pi) + c),   a = lam k^(2v) Gamma(1 - v),
                                            c = 4^v Gamma(1 + v).

The phase shift is delta = Delta_m + arctan(mu), Delta_m = pi/2 (|m| - |m + flux|),
and S = e^(2i Delta_m) (a e^(i v pi) + c) / (a e^(-i v pi) + c).

Channels with |j| >= 1 (and the degenerate j = 0) carry only the regular
solution, S = e^(2i Delta_m).
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from abcone.errors import MuPoleError
from abcone.model import Regime, SystemParams, channels, classify
from abcone.spectrum import extension_order, is_infinite, lambda_from_physics
from abcone.specfun import gamma

AMPLITUDE_CONVENTION = "f(phi) = (2*pi*i*k)^(-1/2) * sum_n (S_n - 1) * exp(i*n*phi)"

_MU_POLE_TOL = 1e-300


@dataclass(frozen=True)
class ScatteringResult:
    k: float
    delta_m: float
    mu: float
    theta: float
    delta: float
    s_value: complex


@dataclass(frozen=True)
class AmplitudeProfile:
    """Amplitude f(phi) and differential cross-section |f|^2 on an angle grid.

    ``edge_weight`` is max |S_n - 1| over the two outermost channels kept in
    the sum; a large value means the truncation is not converged. The pure
    AB tail (flux not an integer) never decays, so it never is.
    """

    k: float
    angles: np.ndarray
    amplitude: np.ndarray
    dcs: np.ndarray
    n_min: int
    n_max: int
    edge_weight: float
    convention: str = AMPLITUDE_CONVENTION


def delta_m(m: float, flux: float) -> float:
    """Aharonov-Bohm phase pi/2 (|m| - |m + flux|)."""
    return 0.5 * math.pi * (abs(m) - abs(m + flux))


def _coefficients(lam: float, v: float, k: float) -> tuple[float, float]:
    a = lam * k ** (2 * v) * gamma(1.0 - v)
    c = 4.0**v * gamma(1.0 + v)
    return a, c


def _check_k(k: float) -> None:
    if not (k > 0 and math.isfinite(k)):
        raise ValueError(f"wavenumber must be positive and finite, got {k!r}")


def mu(lam: float, j: float, k: float) -> float:
    """Ratio of irregular to regular Bessel amplitudes (D = -mu C)."""
    v = extension_order(j)
    _check_k(k)
    if is_infinite(lam):
        return math.tan(math.pi * v)
    a, c = _coefficients(lam, v, k)
    den = a * math.cos(math.pi * v) + c
    if abs(den) < _MU_POLE_TOL:
        raise MuPoleError(f"mu denominator vanishes (lam={lam!r}, j={j!r}, k={k!r})")
    return a * math.sin(math.pi * v) / den


def phase_shift(lam: float, j: float, m: float, flux: float, k: float) -> float:
    """delta = Delta_m + arctan(mu), principal branch."""
    return delta_m(m, flux) + math.atan(mu(lam, j, k))


def s_matrix(lam: float, j: float, m: float, flux: float, k: float) -> complex:
    _check_k(k)
    ab = cmath.exp(2j * delta_m(m, flux))
    if classify(j) is not Regime.EXTENSION_REQUIRED:
        return ab
    v = abs(j)
    if is_infinite(lam):
        return ab * cmath.exp(2j * math.pi * v)
    a, c = _coefficients(lam, v, k)
    num = a * cmath.exp(1j * math.pi * v) + c
    den = a * cmath.exp(-1j * math.pi * v) + c
    return ab * num / den


def scatter(lam: float, j: float, m: float, flux: float, k: float) -> ScatteringResult:
    """All scattering quantities of one channel at wavenumber k.

    At the mu pole (finite lam, zero denominator) mu is reported as inf and
    theta as pi/2; S stays finite there.
    """
    dm = delta_m(m, flux)
    s_val = s_matrix(lam, j, m, flux, k)
    if classify(j) is not Regime.EXTENSION_REQUIRED:
        mu_val, theta = 0.0, 0.0
    else:
        try:
            mu_val = mu(lam, j, k)
            theta = math.atan(mu_val)
        except MuPoleError:
            mu_val, theta = math.inf, 0.5 * math.pi
    return ScatteringResult(k=k, delta_m=dm, mu=mu_val, theta=theta, delta=dm + theta, s_value=s_val)


def channel_lambda(params: SystemParams, n: int, j: float, overrides: Mapping[int, float] | None) -> float | None:
    """Extension parameter used for channel n, or None for non-extension channels."""
    if classify(j) is not Regime.EXTENSION_REQUIRED:
        return None
    if overrides is not None and n in overrides:
        return overrides[n]
    return lambda_from_physics(params, j)


def amplitude(
    params: SystemParams,
    lambda_per_channel: Mapping[int, float] | None,
    k: float,
    angles: Sequence[float],
    n_min: int,
    n_max: int,
) -> AmplitudeProfile:
    """Truncated partial-wave sum over n_min..n_max.

    Extension channels use ``lambda_per_channel[n]`` when given, otherwise the
    physical extension parameter. Summation runs in ascending n.
    """
    _check_k(k)
    phi = np.asarray(angles, dtype=float)
    total = np.zeros(phi.shape, dtype=complex)
    weights = {}
    for ch, _ in channels(params, n_min, n_max):
        lam = channel_lambda(params, ch.n, ch.j, lambda_per_channel)
        s_val = s_matrix(0.0 if lam is None else lam, ch.j, ch.m, params.flux, k)
        weights[ch.n] = abs(s_val - 1.0)
        total = total + (s_val - 1.0) * np.exp(1j * ch.n * phi)
    f = total / cmath.sqrt(2j * math.pi * k)
    return AmplitudeProfile(
        k=k,
        angles=phi,
        amplitude=f,
        dcs=np.abs(f) ** 2,
        n_min=n_min,
        n_max=n_max,
        edge_weight=max(weights[n_min], weights[n_max]),
    )
