"""Command line: derive, schmidt, curves, sweep, spectrum.

Exit codes: 0 success, 2 configuration or usage error, 3 computation error.
Floats are written with ``repr`` (shortest round-trip decimal) so output is
byte-stable for identical input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import estimator, spectral
from .errors import ConfigError, InvalidInputError, PdcError
from .kernels import FULL_SINC, THIN_CRYSTAL, KernelSpec
from .params import ExperimentConfig, derive, retarget

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3

# unit -> power of ten to SI
LENGTH = {"m": 0, "mm": -3, "um": -6, "nm": -9}
AREA = {"m2": 0, "mm2": -6, "um2": -12, "nm2": -18}
POWER = {"W": 0, "mW": -3, "kW": 3}
FREQ = {"Hz": 0, "kHz": 3, "MHz": 6, "GHz": 9}
NONE = {"": 0}

KEY_UNITS = {
    "lambda_p": LENGTH,
    "delta_lambda": LENGTH,
    "pump_power": POWER,
    "rep_rate": FREQ,
    "n_o": NONE,
    "n_eff": NONE,
    "sigma_II": AREA,
    "crystal_length": LENGTH,
    "waist": LENGTH,
}
SI_UNIT = {"lambda_p": "m", "delta_lambda": "m", "pump_power": "W", "rep_rate": "Hz", "n_o": "",
           "n_eff": "", "sigma_II": "m2", "crystal_length": "m", "waist": "m"}

METHOD_NAMES = {
    "quadratic": estimator.QUADRATIC,
    "series-tc": estimator.SERIES_TC,
    "series-pw": estimator.SERIES_PW,
    "model": estimator.CLOSED_MODEL,
    "oracle": estimator.SPECTRAL_ORACLE,
}
VARIANT_NAMES = {"full-sinc": FULL_SINC, "thin-crystal": THIN_CRYSTAL}

# sweep parameter -> (config field or special, power of ten from CLI unit to SI)
SWEEP_PARAMS = {
    "enhanced_cross_section": ("enhanced_cross_section", -12),  # um^2
    "pump_power": ("pump_power", 0),  # W
    "waist": ("waist", -3),  # mm
    "crystal_length": ("crystal_length", -3),  # mm
}


def _scale(value, exponent):
    # dividing by an exact power of ten rounds once
    return value * 10.0**exponent if exponent >= 0 else value / 10.0 ** (-exponent)


def parse_config(text) -> ExperimentConfig:
    """Parse the flat ``key = value unit`` format; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, rhs = (part.strip() for part in line.split("=", 1))
        if key not in KEY_UNITS:
            raise ConfigError(f"unknown key {key!r}", lineno, key)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno, key)
        parts = rhs.split()
        if not parts or len(parts) > 2:
            raise ConfigError(f"{key}: expected a number and a unit", lineno, key)
        try:
            number = float(parts[0])
        except ValueError:
            raise ConfigError(f"{key}: not a number: {parts[0]!r}", lineno, key) from None
        unit = parts[1] if len(parts) == 2 else ""
        table = KEY_UNITS[key]
        if unit not in table:
            allowed = ", ".join(u for u in table if u) or "none"
            raise ConfigError(f"{key}: bad unit {unit!r} (allowed: {allowed})", lineno, key)
        if not math.isfinite(number):
            raise ConfigError(f"{key}: must be finite", lineno, key)
        if number < 0 or (number == 0 and key != "pump_power"):
            raise ConfigError(f"{key}: must be positive, got {parts[0]}", lineno, key)
        values[key] = (_scale(number, table[unit]), lineno)
    missing = [k for k in KEY_UNITS if k not in values]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    try:
        return ExperimentConfig(**{k: v for k, (v, _) in values.items()})
    except InvalidInputError as exc:
        raise ConfigError(str(exc), values.get(exc.field, (None, None))[1], exc.field) from None


def emit_config(cfg: ExperimentConfig) -> str:
    """Config text in SI units; parses back to identical values."""
    lines = ["# pdc-schmidt experiment config"]
    for key, value in cfg.as_dict().items():
        unit = SI_UNIT[key]
        lines.append(f"{key} = {value!r} {unit}".rstrip())
    return "\n".join(lines) + "\n"


def _dumps(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _plain(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def derive_document(cfg):
    params = derive(cfg)
    doc = {k: _plain(v) for k, v in params.as_dict().items()}
    doc["enhanced_cross_section_um2"] = params.enhanced_cross_section * 1e12
    return doc


def oracle_options(args):
    opts = {}
    for name in ("r_max", "n_radial", "n_angle", "l_max", "rel_tol"):
        value = getattr(args, name, None)
        if value is not None:
            opts[name] = value
    if getattr(args, "check", False):
        opts["check"] = True
    return opts


def _method_options(method, args):
    if method == estimator.SPECTRAL_ORACLE:
        opts = oracle_options(args)
        opts["variant"] = VARIANT_NAMES[getattr(args, "variant", "full-sinc")]
        return opts
    if method in (estimator.SERIES_TC, estimator.SERIES_PW):
        return {"order": getattr(args, "order", 4), "source": getattr(args, "source", "engine")}
    return {}


def schmidt_document(cfg, method, options):
    est = estimator.estimate(derive(cfg), method, config=cfg, **options)
    return {k: _plain(v) for k, v in est.as_dict().items()}


def curves_rows(xmax, points):
    if not xmax > 0:
        raise ConfigError("--xmax must be > 0")
    if points < 2:
        raise ConfigError("--points must be >= 2")
    rows = []
    for i in range(points):
        x = xmax * i / (points - 1)
        p = estimator.f_curves(x)
        rows.append((p.x, p.f_model, p.f_quad, p.f_tc, p.f_pw))
    return rows


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    points: int
    scale: str = "log"
    methods: tuple = (estimator.CLOSED_MODEL,)

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMS:
            raise ConfigError(f"unknown sweep parameter {self.parameter!r}")
        if not (0 < self.start < self.stop):
            raise ConfigError("sweep bounds must satisfy 0 < from < to")
        if not 2 <= self.points <= 10**6:
            raise ConfigError("--points must be in [2, 1e6]")
        if self.scale not in ("log", "linear"):
            raise ConfigError(f"unknown scale {self.scale!r}")
        for m in self.methods:
            if m not in estimator.METHODS:
                raise ConfigError(f"unknown method {m!r}")

    def values(self):
        if self.scale == "log":
            v = np.geomspace(self.start, self.stop, self.points)
        else:
            v = np.linspace(self.start, self.stop, self.points)
        v[0], v[-1] = self.start, self.stop
        return [float(x) for x in v]


def _sweep_point(args):
    cfg, parameter, value, methods, options = args
    field_name, exponent = SWEEP_PARAMS[parameter]
    si = _scale(value, exponent)
    if field_name == "enhanced_cross_section":
        point = retarget(cfg, enhanced_cross_section=si)
    else:
        point = replace(cfg, **{field_name: si})
    params = derive(point)
    row = [value, params.big_x, params.big_a]
    for m in methods:
        row.append(estimator.estimate(params, m, config=point, **options.get(m, {})).ln_k)
    return row


def sweep_rows(cfg, sweep: SweepSpec, options=None, workers=1):
    options = options or {}
    jobs = [(cfg, sweep.parameter, v, sweep.methods, options) for v in sweep.values()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_sweep_point(j) for j in jobs]


def _csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _column_name(method):
    for cli_name, internal in METHOD_NAMES.items():
        if internal == method:
            return "ln_k_" + cli_name.replace("-", "_")
    return "ln_k_" + method


def _read_config(path):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text)


def _add_oracle_args(p):
    p.add_argument("--variant", choices=sorted(VARIANT_NAMES), default="full-sinc")
    p.add_argument("--r-max", dest="r_max", type=float)
    p.add_argument("--n-radial", dest="n_radial", type=int)
    p.add_argument("--n-angle", dest="n_angle", type=int)
    p.add_argument("--l-max", dest="l_max", type=int)
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--check", action="store_true", help="repeat at doubled resolution")


def build_parser():
    ap = argparse.ArgumentParser(prog="pdc-schmidt", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="derived and dimensionless parameters (JSON)")
    p.add_argument("config")

    p = sub.add_parser("schmidt", help="ln K from one method (JSON)")
    p.add_argument("config")
    p.add_argument("--method", choices=list(METHOD_NAMES), required=True)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--source", choices=["engine", "printed"], default="engine")
    _add_oracle_args(p)

    p = sub.add_parser("curves", help="comparison curves f_model, f_quad, f_tc, f_pw (CSV)")
    p.add_argument("--xmax", type=float, default=0.8)
    p.add_argument("--points", type=int, default=81)

    p = sub.add_parser("sweep", help="ln K along one parameter (CSV)")
    p.add_argument("config")
    p.add_argument("--param", choices=list(SWEEP_PARAMS), required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--scale", choices=["log", "linear"], default="log")
    p.add_argument("--methods", default="model", help="comma-separated method list")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--source", choices=["engine", "printed"], default="engine")
    _add_oracle_args(p)

    p = sub.add_parser("spectrum", help="singular spectrum l,k,s (CSV) plus JSON summary")
    p.add_argument("config")
    p.add_argument("--summary", help="write the JSON summary here (default: stderr)")
    _add_oracle_args(p)

    for p in sub.choices.values():
        p.add_argument("--out", help="write to FILE instead of stdout")
    return ap


def _run(args):
    if args.command == "derive":
        return _dumps(derive_document(_read_config(args.config)))

    if args.command == "schmidt":
        cfg = _read_config(args.config)
        method = METHOD_NAMES[args.method]
        return _dumps(schmidt_document(cfg, method, _method_options(method, args)))

    if args.command == "curves":
        return _csv(["x", "f_model", "f_quad", "f_tc", "f_pw"], curves_rows(args.xmax, args.points))

    if args.command == "sweep":
        cfg = _read_config(args.config)
        names = [m.strip() for m in args.methods.split(",") if m.strip()]
        unknown = [m for m in names if m not in METHOD_NAMES]
        if unknown or not names:
            raise ConfigError(f"unknown methods: {unknown or names}")
        methods = tuple(METHOD_NAMES[m] for m in names)
        sweep = SweepSpec(args.param, args.start, args.stop, args.points, args.scale, methods)
        options = {m: _method_options(m, args) for m in methods}
        rows = sweep_rows(cfg, sweep, options, workers=args.workers)
        header = ["param_value", "big_x", "big_a"] + [_column_name(m) for m in methods]
        return _csv(header, rows)

    if args.command == "spectrum":
        cfg = _read_config(args.config)
        params = derive(cfg)
        spec = KernelSpec.from_params(params, VARIANT_NAMES[args.variant])
        res = spectral.compute_spectrum(spec, **oracle_options(args))
        summary = {
            "variant": spec.variant,
            "ln_k": res.ln_k,
            "k": res.k,
            "overflow": res.k is None and res.ln_k >= spectral.OVERFLOW_LN,
            "k_biphot_spectral": res.k_biphot_spectral,
            "tail_bound": res.tail_bound,
            "converged": res.converged,
            "truncation": {k: _plain(v) for k, v in res.truncation.items()},
        }
        text = _dumps(summary)
        if args.summary:
            with open(args.summary, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stderr.write(text)
        return _csv(["l", "k", "s"], res.rows())

    raise ConfigError(f"unknown command {args.command!r}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        output = _run(args)
    except (ConfigError, InvalidInputError) as exc:
        sys.stderr.write(f"pdc-schmidt: configuration error: {exc}\n")
        return EXIT_CONFIG
    except PdcError as exc:
        body = {"error": type(exc).__name__, "message": str(exc)}
        sys.stdout.write(_dumps(body))
        return EXIT_COMPUTE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
