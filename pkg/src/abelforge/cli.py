"""Command line front end for the oscillator toolkit.

Five subcommands cover the workflow end to end:

* ``check``     -- test a (g, h) pair for the proportionality condition
                   (h/g)' = k g and report the measured constant;
* ``construct`` -- build the branch field eta and the missing companion
                   coefficient from g alone or from h alone;
* ``solve``     -- sample a trajectory of u' = eta(u) on a uniform grid;
* ``verify``    -- cross-check a model three ways (grid inversion against
                   a fixed-step second-order reference, the packaged closed
                   form against the oscillator, eta against its defining
                   first-order identity) and report PASS or FAIL;
* ``catalog``   -- list the packaged worked families and their parameters.

Configuration is plain flags, an optional JSON file (``--config path``,
flags override its fields), or both.  Each command accepts exactly the
fields it needs; stray fields are rejected so a config written for one
command cannot silently leak defaults into another.

Exit codes are a stable contract: 0 success (and verify PASS), 1 verify
FAIL, 2 usage or runtime error, 3 NotIntegrable verdict from ``check``,
4 Indeterminate verdict from ``check``.

Reports are JSON on stdout.  Trajectory output (``solve``) is CSV or JSON,
written to stdout or to ``--out``; the environment variable ABELFORGE_OUT
supplies an output path when no flag or config field names one.  Numbers
in CSV are rendered with 17 significant digits so identical configurations
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import catalog as _catalog
from .abelcore import (
    AllPointsSingular,
    DissipativeOde,
    EmptyDomain,
    NoRealRoot,
    ck_roots,
    classify_chiellini,
    eta_from_g,
    eta_from_h,
    eta_from_ratio,
    second_kind_residual,
)
from .expr import DomainError, ParseError
from .quadinvert import InteriorZero, invert, rk4_reference
from .quadrature import QuadratureFailure


class CliError(Exception):
    """Bad invocation or a condition the command cannot work around."""


# ---------------------------------------------------------------------------
# JobConfig assembly: flags over config file, strict field accounting

_COMMON_OPTIONAL = {"outputPath"}

_FIELDS = {
    "check": {
        "required": {"g", "h", "interval"},
        "optional": {"gridN"} | _COMMON_OPTIONAL,
    },
    "construct": {
        # one of g / h; checked separately because "exactly one" is not
        # expressible as a required set
        "required": set(),
        "optional": {"g", "h", "k", "c0", "c1", "ckBranch", "sign",
                     "interval"} | _COMMON_OPTIONAL,
    },
    "solve": {
        "required": {"u0", "span", "step"},
        "optional": {"catalog", "params", "g", "h", "interval", "k",
                     "ckBranch", "gridN", "zeta0",
                     "outputFormat"} | _COMMON_OPTIONAL,
    },
    "verify": {
        "required": set(),
        "optional": {"catalog", "params", "g", "h", "interval", "k",
                     "ckBranch", "gridN", "zeta0", "u0", "span",
                     "step"} | _COMMON_OPTIONAL,
    },
    "catalog": {
        "required": set(),
        "optional": {"entry", "params", "json"} | _COMMON_OPTIONAL,
    },
}

_ALL_KEYS = {"command"}
for _spec in _FIELDS.values():
    _ALL_KEYS |= _spec["required"] | _spec["optional"]


def _parse_params(pairs) -> dict:
    out = {}
    for raw in pairs:
        name, sep, value = str(raw).partition("=")
        if not sep or not name:
            raise CliError(f"--param expects name=value, got {raw!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise CliError(f"--param {name}: {value!r} is not a number") from None
    return out


def _coerce_pair(value, field: str) -> tuple[float, float]:
    try:
        lo, hi = value
        return float(lo), float(hi)
    except (TypeError, ValueError):
        raise CliError(f"{field} must be a pair of numbers, got {value!r}") from None


def _coerce_scalar(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CliError(f"{field} must be a number, got {value!r}")
    return float(value)


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CliError(f"config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise CliError(f"config {path}: expected a JSON object")
    unknown = set(data) - _ALL_KEYS
    if unknown:
        raise CliError(f"config {path}: unknown fields {sorted(unknown)}")
    return data


def _merge_config(args: argparse.Namespace) -> dict:
    command = args.command
    cfg: dict = {}
    if getattr(args, "config", None):
        cfg.update(_load_config(args.config))
    if cfg.get("command", command) != command:
        raise CliError(
            f"config names command {cfg['command']!r} but {command!r} was invoked")
    cfg["command"] = command

    # flags override config fields; absent flags leave config values alone
    flag_map = {
        "g": "g", "h": "h", "k": "k", "c0": "c0", "c1": "c1",
        "ck_branch": "ckBranch", "sign": "sign", "interval": "interval",
        "grid_n": "gridN", "zeta0": "zeta0", "u0": "u0", "span": "span",
        "step": "step", "format": "outputFormat", "out": "outputPath",
        "catalog": "catalog", "entry": "entry",
    }
    for attr, field in flag_map.items():
        value = getattr(args, attr, None)
        if value is not None:
            cfg[field] = list(value) if isinstance(value, tuple) else value
    if getattr(args, "param", None):
        merged = dict(cfg.get("params") or {})
        merged.update(_parse_params(args.param))
        cfg["params"] = merged
    if getattr(args, "json", False):
        cfg["json"] = True

    spec = _FIELDS[command]
    allowed = spec["required"] | spec["optional"]
    extras = set(cfg) - allowed - {"command"}
    if extras:
        raise CliError(f"{command}: unexpected fields {sorted(extras)}")
    missing = spec["required"] - set(cfg)
    if missing:
        raise CliError(f"{command}: missing required fields {sorted(missing)}")

    # normalize value types coming from the config file
    for field in ("interval", "span"):
        if field in cfg:
            cfg[field] = _coerce_pair(cfg[field], field)
    for field in ("k", "c0", "c1", "sign", "zeta0", "u0", "step"):
        if field in cfg:
            cfg[field] = _coerce_scalar(cfg[field], field)
    if "gridN" in cfg:
        n = cfg["gridN"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 2:
            raise CliError(f"gridN must be an integer >= 2, got {n!r}")
    if "ckBranch" in cfg and cfg["ckBranch"] not in ("minus", "plus"):
        raise CliError(f"ckBranch must be 'minus' or 'plus', got {cfg['ckBranch']!r}")
    if "sign" in cfg and cfg["sign"] not in (1.0, -1.0):
        raise CliError(f"sign must be +1 or -1, got {cfg['sign']!r}")
    if "outputFormat" in cfg and cfg["outputFormat"] not in ("csv", "json"):
        raise CliError(f"outputFormat must be 'csv' or 'json', got {cfg['outputFormat']!r}")
    if "params" in cfg:
        params = cfg["params"]
        if not isinstance(params, dict):
            raise CliError(f"params must be an object, got {params!r}")
        cfg["params"] = {str(k): _coerce_scalar(v, f"params.{k}")
                         for k, v in params.items()}
    return cfg


# ---------------------------------------------------------------------------
# Output plumbing


def _emit(text: str, cfg: dict) -> None:
    """Write to the configured path (atomically) or to stdout."""
    path = cfg.get("outputPath") or os.environ.get("ABELFORGE_OUT")
    if not path:
        sys.stdout.write(text)
        return
    tmp = path + ".partial"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _report(payload: dict, cfg: dict) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", cfg)


def _pick_branch_root(k: float, branch: str) -> float:
    roots = ck_roots(k)
    if not roots:
        raise NoRealRoot(f"k c^2 + c + 1 = 0 has no real root for k = {k!r} > 1/4")
    if branch == "plus" and len(roots) < 2:
        raise CliError(f"k = {k!r} has a single admissible root; only the "
                       "minus branch exists")
    return roots[1] if branch == "plus" else roots[0]


# ---------------------------------------------------------------------------
# check


def _cmd_check(cfg: dict) -> int:
    ode = DissipativeOde.from_text(cfg["g"], cfg["h"])
    report = classify_chiellini(ode, cfg["interval"], n=cfg.get("gridN", 16))
    payload = {
        "command": "check",
        "k": float(report.k),
        "residual": float(report.residual),
        "verdict": report.verdict,
        "ckRoots": [float(c) for c in report.ck_roots],
        "gridUsed": [float(u) for u in report.grid_used],
    }
    _report(payload, cfg)
    return {"Integrable": 0, "NotIntegrable": 3, "Indeterminate": 4}[report.verdict]


# ---------------------------------------------------------------------------
# construct


def _cmd_construct(cfg: dict) -> int:
    has_g = "g" in cfg
    has_h = "h" in cfg
    if has_g == has_h:
        raise CliError("construct takes exactly one of --g or --h")
    k = cfg.get("k", -2.0)
    branch = cfg.get("ckBranch", "minus")
    root = _pick_branch_root(k, branch)
    interval = cfg.get("interval", (-5.0, 5.0))

    if has_g:
        for field in ("c1", "sign"):
            if field in cfg:
                raise CliError(f"{field} applies only to --h constructions")
        eta = eta_from_g(cfg["g"], k=k, c0=cfg.get("c0", 0.0),
                         ck_root=root, interval=interval)
    else:
        if "c0" in cfg:
            raise CliError("c0 applies only to --g constructions")
        eta = eta_from_h(cfg["h"], k=k, c1=cfg.get("c1", 0.0),
                         ck_root=root, sign=cfg.get("sign", 1.0),
                         interval=interval)

    g_text = eta.ode.g.text
    h_text = eta.ode.h.text
    if eta.text is None or g_text is None or h_text is None:
        raise CliError(
            "the antiderivative left the symbolic table; the construction "
            "is only available through the library API on an interval")
    payload = {
        "command": "construct",
        "provenance": eta.provenance,
        "g": g_text,
        "h": h_text,
        "eta": eta.text,
        "constants": {key: float(val) for key, val in eta.constants.items()},
        "domain": None if eta.domain is None
        else [[float(a), float(b)] for a, b in eta.domain],
    }
    _report(payload, cfg)
    return 0


# ---------------------------------------------------------------------------
# shared model resolution for solve / verify


def _resolve_model(cfg: dict):
    """Return (eta, entry_or_None) from catalog fields or from g/h text."""
    if "catalog" in cfg:
        if "g" in cfg or "h" in cfg:
            raise CliError("give either --catalog or --g/--h, not both")
        entry = _catalog.build(cfg["catalog"], cfg.get("params") or {})
        return entry.eta, entry
    if "params" in cfg:
        raise CliError("--param requires --catalog")
    if not ("g" in cfg and "h" in cfg):
        raise CliError("name a catalog entry (--catalog) or give the full "
                       "oscillator (--g and --h)")
    if "interval" not in cfg:
        raise CliError("--interval is required with --g/--h (the window for "
                       "the proportionality test)")
    ode = DissipativeOde.from_text(cfg["g"], cfg["h"])
    report = classify_chiellini(ode, cfg["interval"], n=cfg.get("gridN", 16))
    if report.verdict != "Integrable":
        raise CliError(
            f"{report.verdict} precondition: (h/g)' = k g fails on the "
            f"interval (k estimate {report.k:.6g}, residual "
            f"{report.residual:.3g})")
    k = cfg.get("k", report.k)
    eta = eta_from_ratio(ode, k=k, root_choice=cfg.get("ckBranch", "minus"))
    return eta, None


# ---------------------------------------------------------------------------
# solve


def _render_csv(curve) -> str:
    lines = ["zeta,u,uprime"]
    for z, u, v in curve.samples:
        lines.append(f"{z:.17g},{u:.17g},{v:.17g}")
    return "\n".join(lines) + "\n"


def _render_solve_json(curve, cfg: dict) -> str:
    payload = {
        "command": "solve",
        "zeta0": float(cfg.get("zeta0", 0.0)),
        "u0": float(cfg["u0"]),
        "span": [float(cfg["span"][0]), float(cfg["span"][1])],
        "step": float(cfg["step"]),
        "samples": [[float(z), float(u), float(v)] for z, u, v in curve.samples],
        "events": [{"zeta": float(z), "kind": kind} for z, kind in curve.events],
    }
    return json.dumps(payload, indent=2) + "\n"


def _cmd_solve(cfg: dict) -> int:
    eta, _entry = _resolve_model(cfg)
    step = cfg["step"]
    if step <= 0.0:
        raise CliError(f"step must be positive, got {step!r}")
    lo, hi = cfg["span"]
    if hi < lo:
        raise CliError(f"span must satisfy lo <= hi, got ({lo!r}, {hi!r})")
    curve = invert(eta, cfg["u0"], zeta0=cfg.get("zeta0", 0.0),
                   span=(lo, hi), step=step)
    if cfg.get("outputFormat", "csv") == "json":
        text = _render_solve_json(curve, cfg)
    else:
        text = _render_csv(curve)
    _emit(text, cfg)
    return 0


# ---------------------------------------------------------------------------
# verify


_TOL_INVERT_VS_RK4 = 1e-5
_TOL_CLOSED_FORM = 1e-6
_TOL_ETA_RESIDUAL = 1e-8


def _default_anchor(entry):
    """Pick (zeta0, u0, uprime0, span) inside the entry's good window."""
    if entry.validity is not None and entry.closed_form is not None:
        vlo, vhi = entry.validity
        width = vhi - vlo
        lo = vlo + 0.1 * width
        hi = vhi - 0.1 * width
        if hi - lo > 6.0:
            if lo < -3.0 < 3.0 < hi:
                lo, hi = -3.0, 3.0
            else:
                hi = lo + 6.0
        zeta0 = lo
        u0 = float(np.asarray(entry.closed_form(zeta0)))
        uprime0 = float(np.asarray(entry.closed_form_d(zeta0)))
        return zeta0, u0, uprime0, (lo, hi)
    wlo, whi = entry.u_window
    u0 = 0.5 * (wlo + whi)
    return 0.0, u0, float(entry.eta(u0)), (0.0, 2.0)


def _first_event_zeta(curve, zeta0: float) -> float:
    cut = math.inf
    for z, _kind in curve.events:
        if z > zeta0 and z < cut:
            cut = z
    return cut


def _compare_curves(inv_curve, ref_curve, zeta0: float):
    """Max |u_invert - u_rk4| on shared grid points of the monotone arc."""
    cut = min(_first_event_zeta(inv_curve, zeta0),
              _first_event_zeta(ref_curve, zeta0))
    ref = {round(z, 6): u for z, u, _v in ref_curve.samples if z < cut}
    worst = 0.0
    matched = 0
    for z, u, _v in inv_curve.samples:
        if z >= cut:
            continue
        ru = ref.get(round(z, 6))
        if ru is None:
            continue
        matched += 1
        worst = max(worst, abs(u - ru))
    if matched == 0:
        raise CliError("no shared grid points between the inversion and the "
                       "reference integration; widen the span or shrink step")
    return worst, matched


def _closed_form_residual(entry) -> float:
    vlo, vhi = entry.validity
    zs = np.linspace(vlo, vhi, 202)[1:-1]
    u = np.asarray(entry.closed_form(zs), dtype=float)
    du = np.asarray(entry.closed_form_d(zs), dtype=float)
    ddu = np.asarray(entry.closed_form_dd(zs), dtype=float)
    res = ddu + entry.ode.g(u) * du + entry.ode.h(u)
    return float(np.max(np.abs(res)))


def _cmd_verify(cfg: dict) -> int:
    eta, entry = _resolve_model(cfg)

    if entry is not None:
        zeta0, u0, uprime0, span = _default_anchor(entry)
        wlo, whi = entry.u_window
        target = {"catalog": entry.name,
                  "parameters": {key: float(val)
                                 for key, val in entry.parameters.items()}}
    else:
        if "u0" not in cfg:
            raise CliError("--u0 is required when verifying a --g/--h pair")
        zeta0, u0 = 0.0, cfg["u0"]
        uprime0 = float(eta(u0))
        span = (zeta0, zeta0 + 1.0)
        wlo, whi = cfg["interval"]
        target = {"g": cfg["g"], "h": cfg["h"]}

    zeta0 = cfg.get("zeta0", zeta0)
    if "u0" in cfg:
        u0 = cfg["u0"]
        uprime0 = float(eta(u0))
    span = cfg.get("span", span)
    step = cfg.get("step", 0.05)
    if step <= 0.0:
        raise CliError(f"step must be positive, got {step!r}")
    if not span[0] <= zeta0 <= span[1]:
        raise CliError(f"zeta0 = {zeta0!r} must lie inside span {span!r}")

    inv_curve = invert(eta, u0, zeta0=zeta0, span=span, step=step)
    ref_curve = rk4_reference(eta.ode, u0, uprime0, zeta0=zeta0,
                              span=span, step=1e-3)
    dev, matched = _compare_curves(inv_curve, ref_curve, zeta0)
    checks = {
        "invertVsRk4": {
            "max": dev,
            "tolerance": _TOL_INVERT_VS_RK4,
            "points": matched,
            "pass": dev <= _TOL_INVERT_VS_RK4,
        }
    }

    if entry is not None and entry.closed_form is not None:
        res = _closed_form_residual(entry)
        checks["closedFormResidual"] = {
            "max": res,
            "tolerance": _TOL_CLOSED_FORM,
            "pass": res <= _TOL_CLOSED_FORM,
        }
    else:
        checks["closedFormResidual"] = None

    us = np.linspace(wlo, whi, 201)
    eta_res = float(np.max(np.abs(second_kind_residual(eta, us))))
    checks["etaResidual"] = {
        "max": eta_res,
        "tolerance": _TOL_ETA_RESIDUAL,
        "pass": eta_res <= _TOL_ETA_RESIDUAL,
    }

    passed = all(c["pass"] for c in checks.values() if c is not None)
    payload = {
        "command": "verify",
        "target": target,
        "anchor": {"zeta0": float(zeta0), "u0": float(u0),
                   "span": [float(span[0]), float(span[1])],
                   "step": float(step)},
        "checks": checks,
        "overall": "PASS" if passed else "FAIL",
    }
    _report(payload, cfg)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# catalog


def _entry_summary(name: str) -> dict:
    schema = _catalog.parameter_schema(name)
    entry = _catalog.build(name, {})
    return {
        "name": name,
        "parameters": {key: float(val) for key, val in schema.items()},
        "figure": entry.figure_tag,
        "closedForm": entry.closed_form is not None,
        "validity": None if entry.validity is None
        else [float(entry.validity[0]), float(entry.validity[1])],
    }


def _cmd_catalog(cfg: dict) -> int:
    if "entry" in cfg:
        name = cfg["entry"]
        entry = _catalog.build(name, cfg.get("params") or {})
        if cfg.get("json"):
            payload = {
                "command": "catalog",
                "entry": _entry_summary(name),
                "doc": _catalog.describe(name),
                "notes": entry.notes,
                "uWindow": [float(entry.u_window[0]), float(entry.u_window[1])],
                "g": entry.ode.g.text,
                "h": entry.ode.h.text,
            }
            _report(payload, cfg)
        else:
            lines = [f"{name}  [{entry.figure_tag}]", ""]
            lines.append(_catalog.describe(name).rstrip())
            lines.append("")
            lines.append("parameters (defaults): " + ", ".join(
                f"{key}={val!r}" for key, val in
                _catalog.parameter_schema(name).items()))
            if entry.notes:
                lines.append("notes: " + entry.notes)
            _emit("\n".join(lines) + "\n", cfg)
        return 0

    if "params" in cfg:
        raise CliError("--param requires --entry")
    names = _catalog.names()
    if cfg.get("json"):
        payload = {"command": "catalog",
                   "entries": [_entry_summary(name) for name in names]}
        _report(payload, cfg)
        return 0
    rows = []
    for name in names:
        schema = _catalog.parameter_schema(name)
        params = ", ".join(f"{key}={val!r}" for key, val in schema.items())
        rows.append((name, params, _catalog.build(name, {}).figure_tag))
    name_w = max(len(r[0]) for r in rows)
    par_w = max(len(r[1]) for r in rows)
    lines = [f"{n:<{name_w}}  {p:<{par_w}}  {f}" for n, p, f in rows]
    _emit("\n".join(lines) + "\n", cfg)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH",
                     help="JSON file with JobConfig fields; flags override")
    sub.add_argument("--out", metavar="PATH",
                     help="write the result to PATH instead of stdout")


def _add_ode_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--g", metavar="EXPR", help="dissipation coefficient g(u)")
    sub.add_argument("--h", metavar="EXPR", help="restoring coefficient h(u)")


def _add_model_flags(sub: argparse.ArgumentParser) -> None:
    _add_ode_flags(sub)
    sub.add_argument("--catalog", metavar="NAME", help="packaged family name")
    sub.add_argument("--param", action="append", metavar="NAME=VALUE",
                     help="catalog parameter override (repeatable)")
    sub.add_argument("--interval", nargs=2, type=float, metavar=("LO", "HI"),
                     help="u window for the proportionality test (with --g/--h)")
    sub.add_argument("--k", type=float, help="proportionality constant override")
    sub.add_argument("--ck-branch", choices=("minus", "plus"),
                     help="which root of k c^2 + c + 1 = 0 scales eta")
    sub.add_argument("--grid-n", type=int, metavar="N",
                     help="test-grid size for the proportionality check")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abelforge",
        description="construct, test and solve dissipative oscillators "
                    "u'' + g(u) u' + h(u) = 0 through their first-order "
                    "branch fields")
    subs = parser.add_subparsers(dest="command", required=True)

    p_check = subs.add_parser(
        "check", help="measure (h/g)'/g and classify the pair")
    _add_ode_flags(p_check)
    p_check.add_argument("--interval", nargs=2, type=float,
                         metavar=("LO", "HI"),
                         help="u window for the test grid")
    p_check.add_argument("--grid-n", type=int, metavar="N",
                         help="test-grid size (default 16)")
    _add_common(p_check)

    p_con = subs.add_parser(
        "construct", help="build eta and the companion coefficient")
    _add_ode_flags(p_con)
    p_con.add_argument("--k", type=float,
                       help="proportionality constant (default -2)")
    p_con.add_argument("--c0", type=float,
                       help="integration constant for --g constructions")
    p_con.add_argument("--c1", type=float,
                       help="integration constant for --h constructions")
    p_con.add_argument("--ck-branch", choices=("minus", "plus"),
                       help="which root of k c^2 + c + 1 = 0 scales eta")
    p_con.add_argument("--sign", type=float, choices=(1.0, -1.0),
                       help="square-root branch for --h constructions")
    p_con.add_argument("--interval", nargs=2, type=float,
                       metavar=("LO", "HI"),
                       help="u window used to locate admissible runs")
    _add_common(p_con)

    p_solve = subs.add_parser(
        "solve", help="sample a trajectory on a uniform zeta grid")
    _add_model_flags(p_solve)
    p_solve.add_argument("--u0", type=float, help="initial value u(zeta0)")
    p_solve.add_argument("--zeta0", type=float, help="anchor abscissa (default 0)")
    p_solve.add_argument("--span", nargs=2, type=float, metavar=("LO", "HI"),
                         help="zeta window to sample")
    p_solve.add_argument("--step", type=float, help="grid spacing")
    p_solve.add_argument("--format", choices=("csv", "json"),
                         help="output format (default csv)")
    _add_common(p_solve)

    p_ver = subs.add_parser(
        "verify", help="cross-check inversion, closed form and eta residual")
    _add_model_flags(p_ver)
    p_ver.add_argument("--u0", type=float, help="anchor value u(zeta0)")
    p_ver.add_argument("--zeta0", type=float, help="anchor abscissa")
    p_ver.add_argument("--span", nargs=2, type=float, metavar=("LO", "HI"),
                       help="zeta window for the cross-check")
    p_ver.add_argument("--step", type=float,
                       help="inversion grid spacing (default 0.05)")
    _add_common(p_ver)

    p_cat = subs.add_parser(
        "catalog", help="list the packaged families")
    p_cat.add_argument("--entry", metavar="NAME",
                       help="show one family in detail")
    p_cat.add_argument("--param", action="append", metavar="NAME=VALUE",
                       help="parameter override for --entry (repeatable)")
    p_cat.add_argument("--json", action="store_true",
                       help="machine-readable output")
    _add_common(p_cat)

    return parser


_HANDLERS = {
    "check": _cmd_check,
    "construct": _cmd_construct,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "catalog": _cmd_catalog,
}

_RUNTIME_ERRORS = (
    CliError,
    ParseError,
    DomainError,
    AllPointsSingular,
    EmptyDomain,
    NoRealRoot,
    QuadratureFailure,
    InteriorZero,
    OSError,
    ValueError,
)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        return _HANDLERS[cfg["command"]](cfg)
    except _RUNTIME_ERRORS as exc:
        print(f"abelforge {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
