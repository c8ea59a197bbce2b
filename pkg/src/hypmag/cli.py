"""Command-line front end.

Reads a JSON surface description, dispatches to library computations,
and prints deterministic single-line JSON or RFC-4180 CSV.  Exit codes:
0 success, 1 configuration or validation failure (message on stderr),
2 non-converged numerics (results are still printed, flagged).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .essential import (MorseOptions, cusp_is_integral, essential_spectrum,
                        holonomy, morse_check)
from .landau import landau_count, landau_level_set
from .model import (CUSP_KIND, FUNNEL_KIND, CuspEnd, FunnelEnd, RadialField,
                    SurfaceEnds, check_growth_hypotheses)
from .modes import EndOptions, count_end
from .weyl import WeylOptions, fit_exponent, theorem1_bracket, weyl_integral

SCHEMA_VERSION = 1

_NUMERIC_DEFAULTS = {
    "grid_n": None,
    "t_max": None,
    "quad_tol": 1e-6,
    "delta": 0.35,
    "bracket_C": 1.0,
}


class ConfigError(ValueError):
    """Invalid config file or flag; the message names the offending field."""


# ---------------------------------------------------------------------------
# Config schema


@dataclass(frozen=True)
class NumericsConfig:
    grid_n: int | None = None
    t_max: float | None = None
    quad_tol: float = 1e-6
    delta: float = 0.35
    bracket_C: float = 1.0


@dataclass(frozen=True)
class EndConfig:
    type: str
    scale: float      # tau for funnels, L for cusps
    t0: float
    xi: float
    coeffs: tuple[float, ...]


@dataclass(frozen=True)
class SurfaceConfig:
    schema_version: int
    ends: tuple[EndConfig, ...]
    numerics: NumericsConfig


def _want(obj, key, types, path, required=True, default=None):
    if key not in obj:
        if required:
            raise ConfigError(f"{path}.{key}: missing required field")
        return default
    val = obj[key]
    if types is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError(f"{path}.{key}: expected a number, got {val!r}")
        val = float(val)
        if not math.isfinite(val):
            raise ConfigError(f"{path}.{key}: must be finite, got {val!r}")
        return val
    if types is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise ConfigError(f"{path}.{key}: expected an integer, got {val!r}")
        return val
    if not isinstance(val, types):
        raise ConfigError(f"{path}.{key}: unexpected type {type(val).__name__}")
    return val


def _no_extras(obj, allowed, path):
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}: unknown field")


def _parse_end(obj, path) -> EndConfig:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: each end must be an object")
    typ = _want(obj, "type", str, path)
    if typ == "funnel":
        _no_extras(obj, {"type", "tau", "t0", "xi", "field"}, path)
        scale = _want(obj, "tau", float, path)
        kind_wanted = "cosh-poly"
    elif typ == "cusp":
        _no_extras(obj, {"type", "L", "t0", "xi", "field"}, path)
        scale = _want(obj, "L", float, path)
        kind_wanted = "y-poly"
    else:
        raise ConfigError(f"{path}.type: must be 'funnel' or 'cusp', got {typ!r}")
    t0 = _want(obj, "t0", float, path)
    xi = _want(obj, "xi", float, path)
    field = _want(obj, "field", dict, path)
    fpath = f"{path}.field"
    _no_extras(field, {"kind", "coeffs"}, fpath)
    kind = _want(field, "kind", str, fpath)
    if kind != kind_wanted:
        raise ConfigError(
            f"{fpath}.kind: {typ} ends require {kind_wanted!r}, got {kind!r}")
    coeffs = _want(field, "coeffs", list, fpath)
    if not coeffs:
        raise ConfigError(f"{fpath}.coeffs: must be nonempty")
    out = []
    for i, c in enumerate(coeffs):
        if isinstance(c, bool) or not isinstance(c, (int, float)):
            raise ConfigError(f"{fpath}.coeffs[{i}]: expected a number, got {c!r}")
        out.append(float(c))
    return EndConfig(type=typ, scale=scale, t0=t0, xi=xi, coeffs=tuple(out))


def parse_config(obj) -> SurfaceConfig:
    """Validate a decoded JSON object into a SurfaceConfig."""
    if not isinstance(obj, dict):
        raise ConfigError("config: top level must be an object")
    _no_extras(obj, {"schema_version", "ends", "numerics"}, "config")
    version = _want(obj, "schema_version", int, "config")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"config.schema_version: expected {SCHEMA_VERSION}, got {version}")
    ends_raw = _want(obj, "ends", list, "config")
    if not ends_raw:
        raise ConfigError("config.ends: need at least one end")
    ends = tuple(_parse_end(e, f"config.ends[{i}]")
                 for i, e in enumerate(ends_raw))
    numerics_raw = obj.get("numerics", {})
    if not isinstance(numerics_raw, dict):
        raise ConfigError("config.numerics: must be an object")
    _no_extras(numerics_raw, set(_NUMERIC_DEFAULTS), "config.numerics")
    path = "config.numerics"
    grid_n = numerics_raw.get("grid_n", None)
    if grid_n is not None:
        grid_n = _want(numerics_raw, "grid_n", int, path)
        if grid_n < 16:
            raise ConfigError(f"{path}.grid_n: must be >= 16 or null")
    t_max = numerics_raw.get("t_max", None)
    if t_max is not None:
        t_max = _want(numerics_raw, "t_max", float, path)
    quad_tol = _want(numerics_raw, "quad_tol", float, path,
                     required=False, default=_NUMERIC_DEFAULTS["quad_tol"])
    if not (quad_tol > 0.0):
        raise ConfigError(f"{path}.quad_tol: must be positive")
    delta = _want(numerics_raw, "delta", float, path,
                  required=False, default=_NUMERIC_DEFAULTS["delta"])
    if not (1.0 / 3.0 < delta < 2.0 / 5.0):
        raise ConfigError(f"{path}.delta: must lie strictly in (1/3, 2/5)")
    bracket_C = _want(numerics_raw, "bracket_C", float, path,
                      required=False, default=_NUMERIC_DEFAULTS["bracket_C"])
    if bracket_C < 0.0:
        raise ConfigError(f"{path}.bracket_C: must be >= 0")
    numerics = NumericsConfig(grid_n=grid_n, t_max=t_max, quad_tol=quad_tol,
                              delta=delta, bracket_C=bracket_C)
    cfg = SurfaceConfig(schema_version=version, ends=ends, numerics=numerics)
    # late structural validation with model-level invariants, mapped to paths
    for i, e in enumerate(cfg.ends):
        try:
            build_end(e)
        except ValueError as exc:
            raise ConfigError(f"config.ends[{i}]: {exc}") from exc
    return cfg


def config_to_dict(cfg: SurfaceConfig) -> dict:
    """Serialized form; parse_config(config_to_dict(cfg)) == cfg."""
    ends = []
    for e in cfg.ends:
        scale_key = "tau" if e.type == "funnel" else "L"
        kind = "cosh-poly" if e.type == "funnel" else "y-poly"
        ends.append({
            "type": e.type,
            scale_key: e.scale,
            "t0": e.t0,
            "xi": e.xi,
            "field": {"kind": kind, "coeffs": list(e.coeffs)},
        })
    n = cfg.numerics
    return {
        "schema_version": cfg.schema_version,
        "ends": ends,
        "numerics": {"grid_n": n.grid_n, "t_max": n.t_max,
                     "quad_tol": n.quad_tol, "delta": n.delta,
                     "bracket_C": n.bracket_C},
    }


def load_config(path: str) -> SurfaceConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"--config: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--config: {path} is not valid JSON: {exc}") from exc
    return parse_config(obj)


def build_end(e: EndConfig):
    if e.type == "funnel":
        field = RadialField(kind=FUNNEL_KIND, coeffs=e.coeffs)
        return FunnelEnd(tau=e.scale, t0=e.t0, field=field, xi=e.xi)
    field = RadialField(kind=CUSP_KIND, coeffs=e.coeffs)
    return CuspEnd(L=e.scale, t0=e.t0, field=field, xi=e.xi)


def build_ends(cfg: SurfaceConfig) -> list:
    """Model ends in config order."""
    return [build_end(e) for e in cfg.ends]


def build_surface(cfg: SurfaceConfig) -> SurfaceEnds:
    ends = build_ends(cfg)
    return SurfaceEnds(
        funnels=tuple(e for e in ends if isinstance(e, FunnelEnd)),
        cusps=tuple(e for e in ends if isinstance(e, CuspEnd)))


def _end_options(cfg: SurfaceConfig) -> EndOptions:
    return EndOptions(grid_n=cfg.numerics.grid_n, t_max=cfg.numerics.t_max)


def _weyl_options(cfg: SurfaceConfig) -> WeylOptions:
    n = cfg.numerics
    return WeylOptions(delta=n.delta, bracket_C=n.bracket_C, quad_tol=n.quad_tol)


# ---------------------------------------------------------------------------
# Output formatting


def _collapse(x):
    """Floats with integral values print as integers ('2', not '2.0')."""
    if isinstance(x, float) and math.isfinite(x) and x == int(x) and abs(x) < 1e15:
        return int(x)
    return x


def _jdump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _csv_cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _emit_csv(rows, header, out_path):
    text = "\r\n".join([",".join(header)]
                       + [",".join(_csv_cell(c) for c in row) for row in rows])
    text += "\r\n"
    if out_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# Flag helpers


def _parse_lambdas(args) -> list[float]:
    if args.lambdas is not None:
        try:
            vals = [float(s) for s in args.lambdas.split(",") if s.strip() != ""]
        except ValueError as exc:
            raise ConfigError(f"--lambdas: {exc}") from exc
        if not vals:
            raise ConfigError("--lambdas: need at least one value")
        return vals
    parts = args.lambda_geom.split(",")
    if len(parts) != 3:
        raise ConfigError("--lambda-geom: expected start,factor,count")
    try:
        start, factor = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--lambda-geom: {exc}") from exc
    if start <= 0.0 or factor <= 0.0 or count < 1:
        raise ConfigError("--lambda-geom: start, factor must be > 0 and count >= 1")
    return [start * factor ** i for i in range(count)]


def _pick_end(cfg: SurfaceConfig, index: int):
    ends = build_ends(cfg)
    if not (0 <= index < len(ends)):
        raise ConfigError(
            f"--end: index {index} out of range (config has {len(ends)} ends)")
    return ends[index]


def _sum_counts(cfg: SurfaceConfig, lam: float):
    opts = _end_options(cfg)
    total = 0
    converged = True
    for end in build_ends(cfg):
        res = count_end(end, lam, opts)
        total += res.count
        converged = converged and res.converged
    return total, converged


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_nlandau(args) -> int:
    if args.b < 0.0:
        raise ConfigError("--b: intensity must be >= 0")
    print(_jdump(_collapse(landau_count(args.mu, args.b))))
    return 0


def _cmd_sset(args) -> int:
    levels = landau_level_set(args.beta).levels
    print(_jdump([_collapse(v) for v in levels]))
    return 0


def _cmd_count_end(args) -> int:
    cfg = load_config(args.config)
    end = _pick_end(cfg, args.end)
    res = count_end(end, args.lam, _end_options(cfg))
    if args.json:
        payload = {
            "count": res.count,
            "lambda": _collapse(res.lam),
            "n": res.n,
            "t_hi": _collapse(res.t_hi),
            "mode_range": list(res.mode_range) if res.mode_range else None,
            "converged": res.converged,
        }
        print(_jdump(payload))
    else:
        print(res.count)
    return 0 if res.converged else 2


def _cmd_weyl(args) -> int:
    cfg = load_config(args.config)
    value = weyl_integral(build_surface(cfg), args.lam, _weyl_options(cfg))
    print(_jdump(_collapse(value)))
    return 0


def _cmd_compare(args) -> int:
    cfg = load_config(args.config)
    lams = _parse_lambdas(args)
    surface = build_surface(cfg)
    wopts = _weyl_options(cfg)
    rows = []
    all_converged = True
    for lam in lams:
        count, converged = _sum_counts(cfg, lam)
        wv = weyl_integral(surface, lam, wopts)
        lower, upper = theorem1_bracket(surface, lam, wopts)
        ratio = count / wv if wv > 0.0 else math.nan
        all_converged = all_converged and converged
        rows.append([_collapse(float(lam)), count, wv, lower, upper, ratio,
                     converged])
    _emit_csv(rows, ["lambda", "count", "weyl", "lower", "upper", "ratio",
                     "converged"], args.out)
    return 0 if all_converged else 2


def _cmd_fit(args) -> int:
    cfg = load_config(args.config)
    lams = _parse_lambdas(args)
    samples = []
    all_converged = True
    for lam in lams:
        count, converged = _sum_counts(cfg, lam)
        all_converged = all_converged and converged
        samples.append((lam, count))
    fit = fit_exponent(samples)
    print(_jdump({"slope": fit.slope, "alpha": fit.alpha}))
    return 0 if all_converged else 2


def _cmd_essential(args) -> int:
    cfg = load_config(args.config)
    spec = essential_spectrum(build_surface(cfg))
    payload = {"bottom": spec.bottom, "points": list(spec.points),
               "empty": spec.empty}
    print(_jdump(payload))
    return 0


def _cmd_morse_check(args) -> int:
    kwargs = {}
    if args.window is not None:
        parts = args.window.split(",")
        if len(parts) != 2:
            raise ConfigError("--window: expected LO,HI")
        try:
            kwargs["s_lo"], kwargs["s_hi"] = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ConfigError(f"--window: {exc}") from exc
    if args.grid is not None:
        kwargs["n"] = args.grid
    try:
        opts = MorseOptions(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"--window/--grid: {exc}") from exc
    rep = morse_check(args.beta, opts)
    err = None if math.isinf(rep.max_abs_err) else rep.max_abs_err
    payload = {
        "beta": _collapse(rep.beta),
        "predicted": [_collapse(v) for v in rep.predicted],
        "computed": list(rep.computed),
        "max_abs_err": err,
        "converged": rep.converged,
    }
    print(_jdump(payload))
    return 0 if rep.converged else 2


def _cmd_holonomy(args) -> int:
    cfg = load_config(args.config)
    end = _pick_end(cfg, args.end)
    if not isinstance(end, CuspEnd):
        raise ConfigError(f"--end: end {args.end} is a funnel; holonomy "
                          "is defined for cusp ends")
    value = holonomy(end)
    print(_jdump({"holonomy": value, "integral": cusp_is_integral(end)}))
    return 0


def _cmd_hypcheck(args) -> int:
    import numpy as np

    cfg = load_config(args.config)
    reports = []
    all_hold = True
    for i, end in enumerate(build_ends(cfg)):
        grid = np.linspace(end.t0, end.t0 + args.span, args.grid)
        rep = check_growth_hypotheses(end, grid)
        ok = rep.h0 and rep.h1_or_h2
        all_hold = all_hold and ok
        reports.append({
            "index": i,
            "type": cfg.ends[i].type,
            "h0": rep.h0,
            "h1_or_h2": rep.h1_or_h2,
            "witness": None if math.isinf(rep.witness) else rep.witness,
        })
    print(_jdump({"ends": reports, "all_hold": all_hold}))
    return 0


# ---------------------------------------------------------------------------
# Parser


class _Parser(argparse.ArgumentParser):
    # argparse exits with its own status 2 on bad flags; route through
    # ConfigError instead so 2 stays reserved for non-converged numerics
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hypmag",
                     description="Eigenvalue counting for magnetic Laplacians "
                                 "on funnel and cusp ends.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nlandau",
                       help="Landau counting weight N(mu, b)")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.set_defaults(func=_cmd_nlandau)

    p = sub.add_parser("sset",
                       help="discrete Landau levels of a constant field")
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=_cmd_sset)

    p = sub.add_parser("count-end",
                       help="Dirichlet eigenvalue count of one end below lambda")
    p.add_argument("--config", required=True)
    p.add_argument("--end", type=int, required=True,
                   help="index into the config's ends list")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--json", action="store_true",
                   help="print the full result object instead of the count")
    p.set_defaults(func=_cmd_count_end)

    p = sub.add_parser("weyl",
                       help="semiclassical counting integral at lambda")
    p.add_argument("--config", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.set_defaults(func=_cmd_weyl)

    p = sub.add_parser("compare",
                       help="CSV sweep: counts vs integral vs bracket")
    p.add_argument("--config", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--lambdas", help="comma-separated lambda values")
    group.add_argument("--lambda-geom", help="start,factor,count")
    p.add_argument("--out", default="-", help="output CSV path (default stdout)")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("fit",
                       help="log-log growth exponent of the count")
    p.add_argument("--config", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--lambdas", help="comma-separated lambda values")
    group.add_argument("--lambda-geom", help="start,factor,count")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("essential",
                       help="essential spectrum for constant end fields")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_essential)

    p = sub.add_parser("morse-check",
                       help="verify the Morse-limit ladder numerically")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--window", default=None, help="LO,HI in log coordinates")
    p.set_defaults(func=_cmd_morse_check)

    p = sub.add_parser("holonomy",
                       help="cusp holonomy and integer-class membership")
    p.add_argument("--config", required=True)
    p.add_argument("--end", type=int, required=True)
    p.set_defaults(func=_cmd_holonomy)

    p = sub.add_parser("hypcheck",
                       help="field growth hypotheses on each end")
    p.add_argument("--config", required=True)
    p.add_argument("--span", type=float, default=12.0,
                   help="grid extent beyond t0")
    p.add_argument("--grid", type=int, default=512,
                   help="number of grid points")
    p.set_defaults(func=_cmd_hypcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
