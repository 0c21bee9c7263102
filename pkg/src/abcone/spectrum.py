"""Bound states of the extension channels (0 < |j| < 1).

Two routes to the single bound-state energy of a channel:

* core-radius matching, with no free parameter,
      E = -2/(M r0^2) [G(|j|) (1 + xi)/(1 - xi)]^(1/|j|),
* the boundary-condition family labelled by the extension parameter lam,
      E = -2/M [-G(|j|)/lam]^(1/|j|),

with G(v) = Gamma(1 + v)/Gamma(1 - v) and xi = flux/(alpha |j|) + |j|/2.
Equating them fixes 1/lam = -(1 + xi)/((1 - xi) r0^(2|j|)).

Extension parameters are plain floats; ``math.inf`` stands for the infinite
extension. A missing bound state is returned as ``None``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from abcone.errors import DegenerateChannelError
from abcone.model import DEGENERATE_TOL, SystemParams
from abcone.specfun import DEFAULT_ACCURACY, Accuracy, gamma, kummer_1f1


@dataclass(frozen=True)
class BoundState:
    """Energy E < 0 and decay constant kappa = sqrt(-2 M E)."""

    energy: float
    kappa: float

    @classmethod
    def from_energy(cls, energy: float, mass: float) -> "BoundState":
        return cls(energy=energy, kappa=math.sqrt(-2.0 * mass * energy))


def extension_order(j: float) -> float:
    v = abs(j)
    if v <= DEGENERATE_TOL:
        raise DegenerateChannelError("|j| = 0: bound-state formulas are undefined")
    if v >= 1.0:
        raise ValueError(f"|j| = {v!r} >= 1: channel has no self-adjoint extension")
    return v


def gamma_ratio(v: float) -> float:
    """Gamma(1 + v) / Gamma(1 - v)."""
    return gamma(1.0 + v) / gamma(1.0 - v)


def is_infinite(lam: float) -> bool:
    return math.isinf(lam)


def flux_ratio(j: float, alpha: float, flux: float) -> float:
    """xi = flux/(alpha |j|) + |j|/2; the physical ratio is (1 + xi)/(1 - xi)."""
    v = abs(j)
    if v <= DEGENERATE_TOL:
        raise DegenerateChannelError("flux ratio undefined at j = 0")
    return flux / (alpha * v) + v / 2


def lambda_from_physics(params: SystemParams, j: float) -> float:
    """Extension parameter fixed by the core radius, alpha and flux.

    Returns ``math.inf`` when xi = -1 and 0.0 (the regular, Dirichlet-like
    extension) when xi = 1.
    """
    v = extension_order(j)
    xi = flux_ratio(j, params.alpha, params.flux)
    if xi == -1.0:
        return math.inf
    if xi == 1.0:
        return 0.0
    return -params.core_radius ** (2 * v) * (1.0 - xi) / (1.0 + xi)


def energy_ks(params: SystemParams, j: float) -> BoundState | None:
    """Bound state from core-radius matching, or None when the bracket is <= 0."""
    v = extension_order(j)
    xi = flux_ratio(j, params.alpha, params.flux)
    if xi == 1.0:
        return None
    bracket = gamma_ratio(v) * (1.0 + xi) / (1.0 - xi)
    if not bracket > 0:
        return None
    r0 = params.core_radius
    energy = -2.0 / (params.mass * r0 * r0) * bracket ** (1.0 / v)
    return BoundState.from_energy(energy, params.mass)


def energy_bg(lam: float, j: float, mass: float) -> BoundState | None:
    """Bound state of the extension lam; exists only for finite lam < 0."""
    v = extension_order(j)
    if is_infinite(lam) or lam >= 0:
        return None
    energy = -2.0 / mass * (-gamma_ratio(v) / lam) ** (1.0 / v)
    return BoundState.from_energy(energy, mass)


def irregular_coefficient(lam: float, j: float, kappa: float, coeff_a: float) -> float:
    """B = lam (2 kappa)^(2|j|) A, from the boundary condition at the origin.

    The real branch |-2 kappa|^(2|j|) is used; it is the one that makes the
    bound state decay.
    """
    v = extension_order(j)
    return lam * (2.0 * kappa) ** (2 * v) * coeff_a


@dataclass(frozen=True)
class BoundWavefunction:
    """Radial bound state A * regular + B * irregular, B fixed by decay at infinity.

    With y = 2 kappa r and v = |j| the profile is

        f(r) = A e^(y/2) y^v 1F1(1/2 + v, 1 + 2v, -y)
             + B e^(y/2) y^-v 1F1(1/2 - v, 1 - 2v, -y),

    i.e. the confluent-hypergeometric pair at rho' = -2 kappa r, with the
    powers taken on |rho'|.
    """

    j: float
    kappa: float
    coeff_A: float
    coeff_B: float
    acc: Accuracy = DEFAULT_ACCURACY

    def __call__(self, r: float) -> float:
        v = abs(self.j)
        y = 2.0 * self.kappa * r
        grow = math.exp(0.5 * y)
        regular = grow * y**v * kummer_1f1(0.5 + v, 1.0 + 2 * v, -y, self.acc)
        if v == 0.5:
            # a/b -> 1/2 and every later ratio -> 1 as v -> 1/2
            m_irr = 0.5 * (1.0 + math.exp(-y))
        else:
            m_irr = kummer_1f1(0.5 - v, 1.0 - 2 * v, -y, self.acc)
        irregular = grow * y ** (-v) * m_irr
        return self.coeff_A * regular + self.coeff_B * irregular


def decay_coefficient_ratio(j: float) -> float:
    """B/A = -16^|j| Gamma(1 + |j|)/Gamma(1 - |j|) required for decay."""
    v = extension_order(j)
    return -(16.0**v) * gamma_ratio(v)


def bound_wavefunction(j: float, state: BoundState, coeff_A: float = 1.0) -> BoundWavefunction:
    if coeff_A == 0:
        raise ValueError("coeff_A must be non-zero")
    coeff_B = decay_coefficient_ratio(j) * coeff_A
    return BoundWavefunction(j=j, kappa=state.kappa, coeff_A=coeff_A, coeff_B=coeff_B)
