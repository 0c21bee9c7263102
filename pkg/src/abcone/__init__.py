"""Spin-1/2 Aharonov-Bohm problem on a cone: bound states, self-adjoint
extension parameters, phase shifts and S-matrix, with numerical oracles."""

from abcone.model import Channel, Regime, SystemParams, channels, classify, effective_j
from abcone.spectrum import (
    BoundState,
    BoundWavefunction,
    bound_wavefunction,
    energy_bg,
    energy_ks,
    flux_ratio,
    lambda_from_physics,
)
from abcone.scattering import (
    AmplitudeProfile,
    ScatteringResult,
    amplitude,
    delta_m,
    mu,
    phase_shift,
    s_matrix,
    scatter,
)

__all__ = [
    "AmplitudeProfile",
    "BoundState",
    "BoundWavefunction",
    "Channel",
    "Regime",
    "ScatteringResult",
    "SystemParams",
    "amplitude",
    "bound_wavefunction",
    "channels",
    "classify",
    "delta_m",
    "effective_j",
    "energy_bg",
    "energy_ks",
    "flux_ratio",
    "lambda_from_physics",
    "mu",
    "phase_shift",
    "s_matrix",
    "scatter",
]
