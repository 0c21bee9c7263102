"""Command-line front end.

Subcommands: spectrum, scatter, xsec, verify, shell. Tables are written as
CSV (comma separated, one header row) or JSON (one top-level object). Floats
use Python's shortest round-trip ``repr``; infinite extension parameters and
absent values are the strings ``inf`` and ``none`` in CSV, and tagged
objects / ``null`` in JSON.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from abcone.errors import ConvergenceError
from abcone.model import Regime, SystemParams, channels
from abcone.scattering import AMPLITUDE_CONVENTION, amplitude, channel_lambda, scatter
from abcone.spectrum import energy_bg, energy_ks, is_infinite, lambda_from_physics
from abcone.verify import dumps_report, extension_grid, run_verification, shell_bound_state

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

SPECTRUM_COLUMNS = ("n", "m", "j", "regime", "lambda", "E_ks", "E_bg", "kappa", "bound_state")
SCATTER_COLUMNS = ("n", "j", "k", "delta_m", "mu", "theta", "delta", "re_S", "im_S", "abs_S")
XSEC_COLUMNS = ("angle", "re_f", "im_f", "dcs")
SHELL_COLUMNS = ("n", "j", "r0", "kappa", "E", "M_r0sq_absE", "ratio_E_ks")

DEFAULTS: dict[str, Any] = {
    "alpha": 1.0,
    "flux": 0.0,
    "spin": 1,
    "mass": 1.0,
    "r0": 1.0,
    "n_min": -2,
    "n_max": 2,
    "k": None,
    "k_range": None,
    "k_absolute": False,
    "lambda_override": None,
    "n_angles": 72,
    "r0_sweep": None,
    "tolerance_scale": 1.0,
    "single": False,
    "format": "csv",
    "output": None,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    params: SystemParams
    n_min: int
    n_max: int
    k_list: list[float]
    angles: list[float]
    lambda_override: float | None
    r0_sweep: list[float]
    tolerance_scale: float
    single: bool
    fmt: str
    output: str | None
    k_absolute: bool = False
    extra: dict[str, Any] = field(default_factory=dict)

    def physical_k(self, k: float) -> float:
        return k if self.k_absolute else k / self.params.core_radius


# --------------------------------------------------------------------------
# configuration


def read_config_file(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _float(name: str, value: Any) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: not a number: {value!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"{name}: must be finite, got {value!r}")
    return out


def _int(name: str, value: Any) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: not an integer: {value!r}") from None


def _bool(name: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{name}: not a boolean: {value!r}")


def _float_list(name: str, value: Any) -> list[float]:
    if isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [s for s in str(value).split(",") if s.strip()]
    if not items:
        raise ConfigError(f"{name}: empty list")
    return [_float(name, s) for s in items]


def _lambda(value: Any) -> float | None:
    if value is None:
        return None
    text = str(value).strip().lower()
    if text in ("inf", "infinite", "+inf", "-inf"):
        return math.inf
    return _float("lambda_override", value)


def _k_range(value: Any) -> list[float]:
    parts = str(value).split(":")
    if len(parts) != 3:
        raise ConfigError(f"k_range: expected START:STOP:NUM, got {value!r}")
    start, stop = _float("k_range", parts[0]), _float("k_range", parts[1])
    num = _int("k_range", parts[2])
    if start <= 0 or stop <= 0 or num < 1:
        raise ConfigError("k_range: START, STOP must be positive and NUM >= 1")
    return [float(x) for x in np.geomspace(start, stop, num)]


def build_config(command: str, merged: dict[str, Any]) -> RunConfig:
    """Validate everything up front; nothing is computed on invalid input."""
    try:
        params = SystemParams(
            alpha=_float("alpha", merged["alpha"]),
            flux=_float("flux", merged["flux"]),
            spin=_int("spin", merged["spin"]),
            mass=_float("mass", merged["mass"]),
            core_radius=_float("r0", merged["r0"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    n_min = _int("n_min", merged["n_min"])
    n_max = _int("n_max", merged["n_max"])
    if n_min > n_max:
        raise ConfigError(f"n_min={n_min} exceeds n_max={n_max}")

    k_list: list[float] = []
    if merged["k"] is not None:
        k_list += _float_list("k", merged["k"])
    if merged["k_range"] is not None:
        k_list += _k_range(merged["k_range"])
    if not k_list:
        k_list = [1.0]
    if any(k <= 0 for k in k_list):
        raise ConfigError("k values must be positive")
    k_list = sorted(set(k_list))
    if command == "xsec" and len(k_list) != 1:
        raise ConfigError("xsec takes exactly one k")

    n_angles = _int("n_angles", merged["n_angles"])
    if n_angles < 1:
        raise ConfigError("n_angles must be >= 1")
    angles = [2.0 * math.pi * i / n_angles for i in range(n_angles)]

    if merged["r0_sweep"] is not None:
        r0_sweep = _float_list("r0_sweep", merged["r0_sweep"])
    else:
        r0 = params.core_radius
        r0_sweep = [r0, r0 / 10, r0 / 100]
    if any(r <= 0 for r in r0_sweep):
        raise ConfigError("r0_sweep values must be positive")

    tol = _float("tolerance_scale", merged["tolerance_scale"])
    if tol <= 0:
        raise ConfigError("tolerance_scale must be positive")

    fmt = str(merged["format"]).lower()
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")

    return RunConfig(
        params=params,
        n_min=n_min,
        n_max=n_max,
        k_list=k_list,
        angles=angles,
        lambda_override=_lambda(merged["lambda_override"]),
        r0_sweep=r0_sweep,
        tolerance_scale=tol,
        single=_bool("single", merged["single"]),
        fmt=fmt,
        output=merged["output"],
        k_absolute=_bool("k_absolute", merged["k_absolute"]),
    )


# --------------------------------------------------------------------------
# formatting


def fmt_csv(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def render_csv(columns, rows, comments=()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt_csv(row[c]) for c in columns])
    return buf.getvalue()


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and math.isinf(value):
        return {"kind": "infinite"}
    return value


def render_json(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _lambda_json(lam: float | None) -> Any:
    if lam is None:
        return None
    if is_infinite(lam):
        return {"kind": "infinite"}
    return {"kind": "finite", "value": lam}


# --------------------------------------------------------------------------
# commands


def _extension_lambda(cfg: RunConfig, j: float) -> float:
    if cfg.lambda_override is not None:
        return cfg.lambda_override
    return lambda_from_physics(cfg.params, j)


def cmd_spectrum(cfg: RunConfig) -> str:
    rows = []
    for ch, regime in channels(cfg.params, cfg.n_min, cfg.n_max):
        row = dict.fromkeys(SPECTRUM_COLUMNS)
        row.update(n=ch.n, m=ch.m, j=ch.j, regime=regime.value)
        if regime is Regime.EXTENSION_REQUIRED:
            lam = _extension_lambda(cfg, ch.j)
            ks = energy_ks(cfg.params, ch.j)
            bg = energy_bg(lam, ch.j, cfg.params.mass)
            row.update(
                **{"lambda": lam},
                E_ks=None if ks is None else ks.energy,
                E_bg=None if bg is None else bg.energy,
                kappa=None if bg is None else bg.kappa,
                bound_state=bg is not None,
            )
        rows.append(row)
    if cfg.fmt == "csv":
        return render_csv(SPECTRUM_COLUMNS, rows)
    for row in rows:
        row["lambda"] = _lambda_json(row["lambda"])
    return render_json({"command": "spectrum", "params": _params_json(cfg), "rows": rows})


def cmd_scatter(cfg: RunConfig) -> str:
    rows = []
    for ch, regime in channels(cfg.params, cfg.n_min, cfg.n_max):
        lam = None
        if regime is Regime.EXTENSION_REQUIRED:
            lam = _extension_lambda(cfg, ch.j)
        for k in cfg.k_list:
            res = scatter(0.0 if lam is None else lam, ch.j, ch.m, cfg.params.flux, cfg.physical_k(k))
            rows.append(
                {
                    "n": ch.n,
                    "j": ch.j,
                    "k": res.k,
                    "delta_m": res.delta_m,
                    "mu": res.mu,
                    "theta": res.theta,
                    "delta": res.delta,
                    "re_S": res.s_value.real,
                    "im_S": res.s_value.imag,
                    "abs_S": abs(res.s_value),
                }
            )
    if cfg.fmt == "csv":
        return render_csv(SCATTER_COLUMNS, rows)
    for row in rows:
        row["mu"] = _json_value(row["mu"])
    return render_json({"command": "scatter", "params": _params_json(cfg), "rows": rows})


def cmd_xsec(cfg: RunConfig) -> str:
    k = cfg.physical_k(cfg.k_list[0])
    overrides = None
    if cfg.lambda_override is not None:
        overrides = {
            ch.n: cfg.lambda_override
            for ch, regime in channels(cfg.params, cfg.n_min, cfg.n_max)
            if regime is Regime.EXTENSION_REQUIRED
        }
    prof = amplitude(cfg.params, overrides, k, cfg.angles, cfg.n_min, cfg.n_max)
    rows = [
        {"angle": float(a), "re_f": float(f.real), "im_f": float(f.imag), "dcs": float(d)}
        for a, f, d in zip(prof.angles, prof.amplitude, prof.dcs)
    ]
    header = {
        "k": k,
        "n_min": prof.n_min,
        "n_max": prof.n_max,
        "edge_weight": prof.edge_weight,
        "convention": prof.convention,
    }
    if cfg.fmt == "csv":
        comments = [f"{key}={fmt_csv(val)}" for key, val in header.items()]
        return render_csv(XSEC_COLUMNS, rows, comments)
    return render_json({"command": "xsec", "params": _params_json(cfg), **header, "rows": rows})


def cmd_shell(cfg: RunConfig) -> str:
    rows = []
    for ch, regime in channels(cfg.params, cfg.n_min, cfg.n_max):
        if regime is Regime.DEGENERATE:
            continue
        for r0 in cfg.r0_sweep:
            p = SystemParams(
                alpha=cfg.params.alpha,
                flux=cfg.params.flux,
                spin=cfg.params.spin,
                mass=cfg.params.mass,
                core_radius=r0,
            )
            res = shell_bound_state(p, ch.j)
            ks = energy_ks(p, ch.j) if regime is Regime.EXTENSION_REQUIRED else None
            rows.append(
                {
                    "n": ch.n,
                    "j": ch.j,
                    "r0": r0,
                    "kappa": None if res is None else res.kappa,
                    "E": None if res is None else res.energy,
                    "M_r0sq_absE": None if res is None else res.dimensionless_product,
                    "ratio_E_ks": None if res is None or ks is None else res.energy / ks.energy,
                }
            )
    if cfg.fmt == "csv":
        return render_csv(SHELL_COLUMNS, rows)
    return render_json({"command": "shell", "params": _params_json(cfg), "rows": rows})


def cmd_verify(cfg: RunConfig) -> tuple[str, bool]:
    entries = None
    if cfg.single:
        entries = [
            (cfg.params, ch.n, ch.j)
            for ch, regime in channels(cfg.params, cfg.n_min, cfg.n_max)
            if regime is Regime.EXTENSION_REQUIRED
        ]
    report = run_verification(entries if cfg.single else extension_grid(), cfg.tolerance_scale)
    return dumps_report(report), report["summary"]["passed"]


def _params_json(cfg: RunConfig) -> dict[str, Any]:
    p = cfg.params
    return {
        "alpha": p.alpha,
        "flux": p.flux,
        "spin": p.spin,
        "mass": p.mass,
        "r0": p.core_radius,
        "n_min": cfg.n_min,
        "n_max": cfg.n_max,
        "lambda_override": _lambda_json(cfg.lambda_override),
    }


# --------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse already uses exit status 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key = value file; flags win over it")
    common.add_argument("--alpha", help="cone parameter (default 1)")
    common.add_argument("--flux", help="effective flux parameter (default 0)")
    common.add_argument("--spin", help="+1 or -1 (default +1)")
    common.add_argument("--mass", help="particle mass M (default 1)")
    common.add_argument("--r0", help="core radius (default 1)")
    common.add_argument("--n-min", dest="n_min", help="lowest channel index (default -2)")
    common.add_argument("--n-max", dest="n_max", help="highest channel index (default 2)")
    common.add_argument("--k", help="comma-separated wavenumbers, in units of 1/r0 unless --k-absolute")
    common.add_argument("--k-range", dest="k_range", help="START:STOP:NUM, geometric spacing")
    common.add_argument("--k-absolute", dest="k_absolute", action="store_const", const=True, help="k in 1/length")
    common.add_argument("--lambda-override", dest="lambda_override", help="extension parameter for every extension channel (number or inf)")
    common.add_argument("--n-angles", dest="n_angles", help="angle grid size for xsec (default 72)")
    common.add_argument("--r0-sweep", dest="r0_sweep", help="comma-separated core radii for shell (default r0, r0/10, r0/100)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--output", "-o", help="output file (default standard output)")

    parser = _Parser(prog="abcone", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("spectrum", parents=[common], help="bound states and extension parameters per channel")
    sub.add_parser("scatter", parents=[common], help="phase shifts and S-matrix per channel and k")
    sub.add_parser("xsec", parents=[common], help="partial-wave amplitude and differential cross-section")
    verify = sub.add_parser("verify", parents=[common], help="cross-route consistency report (JSON)")
    verify.add_argument("--tolerance-scale", dest="tolerance_scale", help="multiply every check tolerance (default 1)")
    verify.add_argument("--single", action="store_const", const=True, help="check the configured channels instead of the built-in grid")
    sub.add_parser("shell", parents=[common], help="finite-radius delta-shell bound states")
    return parser


def merge_settings(args: argparse.Namespace) -> dict[str, Any]:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(read_config_file(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args.command, merge_settings(args))
    except ConfigError as exc:
        print(f"abcone: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        if args.command == "verify":
            text, passed = cmd_verify(cfg)
            data = json.loads(text)["summary"]
            status = "PASS" if passed else "FAIL"
            print(f"verify: {status} ({data['checks'] - data['failed']}/{data['checks']} checks, {data['channels']} channels)", file=sys.stderr)
            _emit(text, cfg.output)
            return EXIT_OK if passed else EXIT_VERIFY_FAILED
        command = {"spectrum": cmd_spectrum, "scatter": cmd_scatter, "xsec": cmd_xsec, "shell": cmd_shell}[args.command]
        text = command(cfg)
    except (ConvergenceError, OverflowError, ArithmeticError) as exc:
        print(f"abcone: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(text, cfg.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
