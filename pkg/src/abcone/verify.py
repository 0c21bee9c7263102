"""Independent numerical oracles and the cross-route consistency report.

Pole finder
    With k -> i kappa the S-matrix denominator becomes the real function
    g(kappa) = lam kappa^(2v) Gamma(1 - v) + 4^v Gamma(1 + v), v = |j|,
    which is root-bracketed on a logarithmic grid and refined by Brent's
    method.

Delta-shell oracle
    The Zeeman contact term is replaced by the shell
    (s flux / (2 M alpha)) delta(r - r0) / r0. Multiplying the radial
    equation by -2M and integrating across r0 gives the derivative jump

        f'(r0+) - f'(r0-) = (c / r0) f(r0),    c = s * flux / alpha,

    the 2M cancelling against the 1/(2M) of the kinetic term. A bound state
    is I_v(kappa r) inside and K_v(kappa r) outside, so with x = kappa r0

        x K_v'(x)/K_v(x) - x I_v'(x)/I_v(x) = c.

    Only x appears, so E r0^2 is independent of r0. By the I/K Wronskian the
    left side equals -1 / (I_v(x) K_v(x)) < -2v, hence a bound state needs
    c < -2v (attractive shell stronger than the centrifugal threshold).

Far-field phase
    The scattering solution J_v(kr) - mu Y_v(kr) is sampled at kr and
    kr + pi/2 and its phase read off against cos(kr - |m| pi/2 - pi/4 + delta).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np
from scipy.optimize import brentq

from abcone.errors import ConvergenceError
from abcone.model import Regime, SystemParams, channels, classify, effective_j
from abcone.scattering import delta_m, mu, phase_shift, s_matrix
from abcone.specfun import bessel_j, bessel_y, gamma, log_derivatives_ik
from abcone.spectrum import (
    energy_bg,
    energy_ks,
    extension_order,
    flux_ratio,
    is_infinite,
    lambda_from_physics,
)

POLE_KAPPA_RANGE = (1e-150, 1e150)
POLE_SCAN_POINTS = 1201
POLE_RTOL = 1e-13
POLE_MAXITER = 200

SHELL_X_RANGE = (1e-8, 1e3)
SHELL_SCAN_STEPS = 200
SHELL_RTOL = 1e-14

REL_FLOOR = 1e-300


@dataclass(frozen=True)
class PoleResult:
    kappa_star: float
    energy: float
    residual: float


@dataclass(frozen=True)
class ShellResult:
    r0: float
    kappa: float
    energy: float
    dimensionless_product: float


def relative_deviation(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), REL_FLOOR)


def pole_denominator(lam: float, v: float, kappa: float) -> float:
    return lam * kappa ** (2 * v) * gamma(1.0 - v) + 4.0**v * gamma(1.0 + v)


def _bracket_on_grid(func, lo: float, hi: float, points: int) -> tuple[float, float] | None:
    xs = np.geomspace(lo, hi, points)
    prev_x = float(xs[0])
    prev_f = func(prev_x)
    for x in xs[1:]:
        x = float(x)
        fx = func(x)
        if fx == 0.0:
            return x, x
        if (prev_f < 0) != (fx < 0):
            return prev_x, x
        prev_x, prev_f = x, fx
    return None


def find_pole(lam: float, j: float, mass: float) -> PoleResult | None:
    """Bound-state pole of the S-matrix on the positive imaginary k axis."""
    v = extension_order(j)
    if is_infinite(lam) or lam >= 0:
        return None

    a = lam * gamma(1.0 - v)
    c = 4.0**v * gamma(1.0 + v)

    def g(kappa: float) -> float:
        return a * kappa ** (2 * v) + c

    bracket = _bracket_on_grid(g, *POLE_KAPPA_RANGE, POLE_SCAN_POINTS)
    if bracket is None:
        raise ConvergenceError(f"S-matrix pole outside kappa range {POLE_KAPPA_RANGE} (lam={lam!r}, j={j!r})")
    lo, hi = bracket
    if lo == hi:
        kappa = lo
    else:
        kappa, info = brentq(g, lo, hi, xtol=1e-300, rtol=POLE_RTOL, maxiter=POLE_MAXITER, full_output=True, disp=False)
        if not info.converged:
            raise ConvergenceError(f"pole search did not converge: {info.flag}")
    return PoleResult(kappa_star=kappa, energy=-kappa * kappa / (2.0 * mass), residual=abs(g(kappa)))


def shell_coupling(params: SystemParams) -> float:
    """Dimensionless strength c of the derivative jump at the shell."""
    return params.spin * params.flux / params.alpha


def shell_matching(x: float, v: float, coupling: float) -> float:
    """x K'/K - x I'/I - c at x = kappa r0."""
    di, dk = log_derivatives_ik(v, x)
    return x * (dk - di) - coupling


def shell_bound_state(params: SystemParams, j: float) -> ShellResult | None:
    """Bound state of the finite-radius shell potential in channel j."""
    v = abs(j)
    c = shell_coupling(params)

    def h(x: float) -> float:
        return shell_matching(x, v, c)

    bracket = _bracket_on_grid(h, *SHELL_X_RANGE, SHELL_SCAN_STEPS + 1)
    if bracket is None:
        return None
    lo, hi = bracket
    if lo == hi:
        x = lo
    else:
        x, info = brentq(h, lo, hi, xtol=1e-300, rtol=SHELL_RTOL, maxiter=POLE_MAXITER, full_output=True, disp=False)
        if not info.converged:
            raise ConvergenceError(f"shell matching did not converge: {info.flag}")
    r0 = params.core_radius
    kappa = x / r0
    energy = -kappa * kappa / (2.0 * params.mass)
    return ShellResult(r0=r0, kappa=kappa, energy=energy, dimensionless_product=params.mass * r0 * r0 * abs(energy))


def extract_phase(lam: float, j: float, m: float, flux: float, k: float, r_far: float) -> float:
    """Phase of J_v - mu Y_v at r_far relative to cos(kr - |m| pi/2 - pi/4).

    ``flux`` does not enter the radial solution; it is accepted so the call
    mirrors :func:`abcone.scattering.phase_shift`.
    """
    z1 = k * r_far
    if z1 < 100:
        raise ValueError(f"k * r_far must be >= 100, got {z1!r}")
    v = abs(j)
    mu_val = mu(lam, j, k) if classify(j) is Regime.EXTENSION_REQUIRED else 0.0
    z2 = z1 + 0.5 * math.pi

    def envelope_free(z: float) -> float:
        return (bessel_j(v, z) - mu_val * bessel_y(v, z)) * math.sqrt(0.5 * math.pi * z)

    g1 = envelope_free(z1)
    g2 = envelope_free(z2)
    # g1 = A cos(phi), g2 = -A sin(phi) with phi = z1 - |m| pi/2 - pi/4 + delta
    phi = math.atan2(-g2, g1)
    delta = phi - (z1 - 0.5 * abs(m) * math.pi - 0.25 * math.pi)
    return wrap_angle(delta)


def wrap_angle(a: float) -> float:
    """Map an angle to (-pi, pi]."""
    w = math.remainder(a, 2 * math.pi)
    return math.pi if w == -math.pi else w


def bessel_order_phase(lam: float, j: float, m: float, k: float) -> float:
    """Asymptotic phase of J_|j| - mu Y_|j| relative to the order-|m| free wave.

    Equals (pi/2)(|m| - |j|) + arctan(mu). It coincides with the AB phase
    shift only where |j| = |m + flux|.
    """
    theta = math.atan(mu(lam, j, k)) if classify(j) is Regime.EXTENSION_REQUIRED else 0.0
    return 0.5 * math.pi * (abs(m) - abs(j)) + theta


def angle_distance(a: float, b: float) -> float:
    return abs(wrap_angle(a - b))


# --------------------------------------------------------------------------
# consistency reports


def _lambda_tag(lam: float | None) -> dict[str, Any] | None:
    if lam is None:
        return None
    if is_infinite(lam):
        return {"kind": "infinite"}
    return {"kind": "finite", "value": lam}


def _energy(state) -> float | None:
    return None if state is None else state.energy


@dataclass
class ConsistencyReport:
    channel: dict[str, Any]
    lam: float
    E_ks: float | None
    E_bg: float | None
    E_pole: float | None
    E_shell: float | None
    deviations: dict[str, float | None] = field(default_factory=dict)

    @property
    def exists(self) -> dict[str, bool]:
        return {
            "ks": self.E_ks is not None,
            "bg": self.E_bg is not None,
            "pole": self.E_pole is not None,
            "shell": self.E_shell is not None,
        }

    @property
    def analytic_agree(self) -> bool:
        e = self.exists
        return e["ks"] == e["bg"] == e["pole"]

    def to_dict(self) -> dict[str, Any]:
        return {
            "channel": self.channel,
            "lambda": _lambda_tag(self.lam),
            "E_ks": self.E_ks,
            "E_bg": self.E_bg,
            "E_pole": self.E_pole,
            "E_shell": self.E_shell,
            "exists": self.exists,
            "deviations": self.deviations,
        }


def _pair(a: float | None, b: float | None) -> float | None:
    if a is None or b is None:
        return None
    return relative_deviation(a, b)


def consistency_for_j(params: SystemParams, j: float, n: int | None = None) -> ConsistencyReport:
    """All routes to the bound state of the extension channel with this j."""
    extension_order(j)
    lam = lambda_from_physics(params, j)
    e_ks = _energy(energy_ks(params, j))
    e_bg = _energy(energy_bg(lam, j, params.mass))
    e_pole = _energy(find_pole(lam, j, params.mass))
    e_shell = _energy(shell_bound_state(params, j))
    channel = {
        "n": n,
        "m": None if n is None else n + 0.5,
        "j": j,
        "xi": flux_ratio(j, params.alpha, params.flux),
        "alpha": params.alpha,
        "flux": params.flux,
        "spin": params.spin,
        "mass": params.mass,
        "r0": params.core_radius,
    }
    deviations = {
        "ks_bg": _pair(e_ks, e_bg),
        "ks_pole": _pair(e_ks, e_pole),
        "bg_pole": _pair(e_bg, e_pole),
        "shell_over_ks": None if e_shell is None or e_ks is None else e_shell / e_ks,
    }
    return ConsistencyReport(channel, lam, e_ks, e_bg, e_pole, e_shell, deviations)


def consistency_report(params: SystemParams, n: int) -> ConsistencyReport:
    j = effective_j(params, n)
    if classify(j) is not Regime.EXTENSION_REQUIRED:
        raise ValueError(f"channel n={n} has j={j!r}; consistency needs 0 < |j| < 1")
    return consistency_for_j(params, j, n)


# --------------------------------------------------------------------------
# grids


GRID_ALPHAS = (0.5, 0.8, 1.0, 1.2)
GRID_FLUXES = tuple(round(-0.4 + 0.05 * i, 10) for i in range(17))
GRID_SPINS = (1, -1)
GRID_R0 = (0.1, 1.0)
GRID_N_RANGE = (-5, 5)
GRID_K = (0.01, 0.1, 1.0, 10.0, 100.0)


def extension_grid(
    alphas=GRID_ALPHAS, fluxes=GRID_FLUXES, spins=GRID_SPINS, radii=GRID_R0, n_range=GRID_N_RANGE
) -> list[tuple[SystemParams, int, float]]:
    """All (params, n, j) with 0 < |j| < 1 on the parameter grid, in fixed order."""
    out = []
    for alpha in alphas:
        for flux in fluxes:
            for spin in spins:
                for r0 in radii:
                    p = SystemParams(alpha=alpha, flux=flux, spin=spin, mass=1.0, core_radius=r0)
                    for ch, regime in channels(p, *n_range):
                        if regime is Regime.EXTENSION_REQUIRED:
                            out.append((p, ch.n, ch.j))
    return out


# Tolerances of the identity-class checks.
TOLERANCES = {
    "ks_bg_identity": 1e-12,
    "pole_spectrum": 1e-10,
    "existence_agreement": 0.0,
    "worked_case": 1e-10,
    "s_unitarity": 1e-12,
    "s_phase_consistency": 1e-12,
    "limit_lambda_zero": 1e-12,
    "limit_lambda_infinite": 1e-12,
    "shell_scale_invariance": 1e-10,
    "phase_extraction": 1e-3,
}

WORKED_CASE = {"params": SystemParams(alpha=0.8, flux=0.2, spin=1, mass=1.0, core_radius=1.0), "j": 0.5, "E": -24.5}

SHELL_CASE = SystemParams(alpha=1.0, flux=-0.8, spin=1, mass=1.0, core_radius=1.0)
SHELL_CASE_N = -1
SHELL_RADII = (1.0, 0.1, 0.01)


def _check(name: str, value: float, scale: float) -> dict[str, Any]:
    tol = TOLERANCES[name] * scale
    return {"name": name, "max_deviation": float(value), "tolerance": tol, "passed": bool(value <= tol)}


def s_matrix_deviations(entries, ks=GRID_K) -> dict[str, float]:
    """Worst unitarity, phase and limit deviations over entries x k x lambda."""
    worst = {"s_unitarity": 0.0, "s_phase_consistency": 0.0, "limit_lambda_zero": 0.0, "limit_lambda_infinite": 0.0}
    for p, n, j in entries:
        m = n + 0.5
        lam_phys = lambda_from_physics(p, j)
        for k in ks:
            for lam in (lam_phys, -1.0, 1.0, 0.0, math.inf):
                s_val = s_matrix(lam, j, m, p.flux, k)
                worst["s_unitarity"] = max(worst["s_unitarity"], abs(abs(s_val) - 1.0))
                try:
                    d = phase_shift(lam, j, m, p.flux, k)
                except ArithmeticError:
                    continue
                worst["s_phase_consistency"] = max(worst["s_phase_consistency"], abs(s_val - np.exp(2j * d)))
            ab = np.exp(2j * delta_m(m, p.flux))
            worst["limit_lambda_zero"] = max(worst["limit_lambda_zero"], abs(s_matrix(0.0, j, m, p.flux, k) - ab))
            expect = np.exp(2j * (delta_m(m, p.flux) + math.pi * abs(j)))
            worst["limit_lambda_infinite"] = max(
                worst["limit_lambda_infinite"], abs(s_matrix(math.inf, j, m, p.flux, k) - expect)
            )
    return worst


def phase_extraction_entries(entries, count: int = 20) -> list[tuple[SystemParams, int, float]]:
    """Deterministic, evenly spread subsample of a channel list."""
    if len(entries) <= count:
        return list(entries)
    idx = np.linspace(0, len(entries) - 1, count).round().astype(int)
    return [entries[i] for i in idx]


def run_verification(entries=None, tolerance_scale: float = 1.0) -> dict[str, Any]:
    """Run every identity-class check; the result serializes deterministically."""
    if entries is None:
        entries = extension_grid()
    reports = [consistency_for_j(p, j, n) for p, n, j in entries]

    ks_bg = 0.0
    pole = 0.0
    existence_mismatch = 0
    for rep in reports:
        d = rep.deviations
        if d["ks_bg"] is not None:
            ks_bg = max(ks_bg, d["ks_bg"])
        if d["bg_pole"] is not None:
            pole = max(pole, d["bg_pole"])
        if not rep.analytic_agree:
            existence_mismatch += 1

    wp = WORKED_CASE["params"]
    golden = consistency_for_j(wp, WORKED_CASE["j"])
    worked = max(
        relative_deviation(e, WORKED_CASE["E"]) if e is not None else math.inf
        for e in (golden.E_ks, golden.E_bg, golden.E_pole)
    )

    s_dev = s_matrix_deviations(entries)

    shell_j = effective_j(SHELL_CASE, SHELL_CASE_N)
    products = []
    for r0 in SHELL_RADII:
        res = shell_bound_state(SystemParams(**{**asdict(SHELL_CASE), "core_radius": r0}), shell_j)
        products.append(math.nan if res is None else res.dimensionless_product)
    shell_spread = (max(products) - min(products)) / max(abs(min(products)), REL_FLOOR)
    if any(math.isnan(x) for x in products):
        shell_spread = math.inf

    phase_err = 0.0
    for p, n, j in phase_extraction_entries(entries):
        lam = lambda_from_physics(p, j)
        k = 1.0
        try:
            ref = bessel_order_phase(lam, j, n + 0.5, k)
        except ArithmeticError:
            continue
        got = extract_phase(lam, j, n + 0.5, p.flux, k, 1e3 / k)
        phase_err = max(phase_err, angle_distance(got, ref))

    checks = [
        _check("ks_bg_identity", ks_bg, tolerance_scale),
        _check("pole_spectrum", pole, tolerance_scale),
        _check("existence_agreement", float(existence_mismatch), tolerance_scale),
        _check("worked_case", worked, tolerance_scale),
        *(_check(name, val, tolerance_scale) for name, val in s_dev.items()),
        _check("shell_scale_invariance", shell_spread, tolerance_scale),
        _check("phase_extraction", phase_err, tolerance_scale),
    ]
    return {
        "summary": {
            "channels": len(reports),
            "checks": len(checks),
            "failed": sum(not c["passed"] for c in checks),
            "passed": all(c["passed"] for c in checks),
        },
        "checks": checks,
        "golden": golden.to_dict(),
        "shell_products": products,
        "channels": [r.to_dict() for r in reports],
    }


def dumps_report(report: dict[str, Any]) -> str:
    """Byte-stable JSON: fixed key order, shortest round-trip floats."""
    return json.dumps(report, indent=2, allow_nan=True) + "\n"
