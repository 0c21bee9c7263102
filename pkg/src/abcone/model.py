"""Physical configuration and angular-momentum channels.

Conventions: natural units with hbar = 1. ``flux`` is the flux parameter
(flux / 2 pi) with the particle charge absorbed into it; the same number
enters the effective angular momentum, the AB phase, the bound-state
spectrum and the extension parameter.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

DEGENERATE_TOL = 1e-12


class Regime(enum.Enum):
    """Whether a channel's radial operator needs a self-adjoint extension."""

    ESSENTIALLY_SELF_ADJOINT = "essentially_self_adjoint"
    EXTENSION_REQUIRED = "extension_required"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SystemParams:
    """Cone, flux tube and particle.

    Attributes
    ----------
    alpha : float
        Cone parameter; the angular deficit is 2 pi (1 - alpha). Physical
        defects have 0 < alpha <= 1, but alpha > 1 (excess) is accepted.
    flux : float
        Effective flux parameter.
    spin : int
        Twice the spin projection, +1 or -1.
    mass : float
        Particle mass M.
    core_radius : float
        Radius r0 of the defect core carrying the delta-shell Zeeman term.
    """

    alpha: float = 1.0
    flux: float = 0.0
    spin: int = 1
    mass: float = 1.0
    core_radius: float = 1.0

    def __post_init__(self) -> None:
        for name in ("alpha", "flux", "mass", "core_radius"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass!r}")
        if self.core_radius <= 0:
            raise ValueError(f"core_radius must be positive, got {self.core_radius!r}")
        if self.spin not in (1, -1):
            raise ValueError(f"spin must be +1 or -1, got {self.spin!r}")


@dataclass(frozen=True)
class Channel:
    n: int
    m: float
    j: float


def effective_j(params: SystemParams, n: int) -> float:
    """Effective angular momentum (1/alpha)(m - s/2 - flux + (1 - alpha)/2)."""
    m = n + 0.5
    a = params.alpha
    return (m - params.spin / 2 - params.flux + (1.0 - a) / 2) / a


def classify(j: float) -> Regime:
    aj = abs(j)
    if aj <= DEGENERATE_TOL:
        return Regime.DEGENERATE
    if aj < 1.0:
        return Regime.EXTENSION_REQUIRED
    return Regime.ESSENTIALLY_SELF_ADJOINT


def channels(params: SystemParams, n_min: int, n_max: int) -> list[tuple[Channel, Regime]]:
    """Channels n_min..n_max in ascending order with their regimes."""
    if n_min > n_max:
        raise ValueError(f"n_min={n_min} exceeds n_max={n_max}")
    out = []
    for n in range(n_min, n_max + 1):
        j = effective_j(params, n)
        out.append((Channel(n=n, m=n + 0.5, j=j), classify(j)))
    return out
