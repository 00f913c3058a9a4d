"""Command-line front end: ground states, γ sweeps and the ball probes.

Exit codes: 0 success, 1 numerical or I/O failure (diagnostic JSON on
stderr), 2 invalid arguments (one-line message, nothing computed).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import __version__
from .ball_lab import (blowup_family, default_mu_grid, eps_regularity_probe,
                       sup_inf_probe)
from .errors import DomainError, IntegrationError
from .ode_core import ProblemParams, critical_exponent, ground_state
from .solution_family import (c_gamma_prime_quadrature, default_radii, entire_solution,
                              far_field_constants, newton_potential, total_mass)

SUBCOMMANDS = ("ground", "sweep", "entire", "blowup", "supinf", "epsreg")

GROUND_COLUMNS = ["n", "gamma", "q", "r_star", "alpha_star", "lambda_flux",
                  "lambda_flux_quad", "lambda_mass", "flux_rel_gap", "mass_minus_flux"]
ENTIRE_COLUMNS = ["radius", "v", "newton_potential", "residual", "c_gamma",
                  "c_gamma_prime", "c_gamma_prime_quad", "total_mass"]
BLOWUP_COLUMNS = ["mu", "center_value", "mass", "quantum", "residual", "sup", "inf",
                  "v_half", "v_edge", "support_radius"]
SUPINF_COLUMNS = ["mu", "sup", "inf", "value", "C_used", "C_star", "bound"]
EPSREG_COLUMNS = ["eps", "eps_fraction", "mu_eps", "c_of_eps", "quantum", "c_limit"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    params: ProblemParams
    output_format: str = "csv"
    output_path: Optional[str] = None
    options: dict = field(default_factory=dict)


def _float_list(text):
    return [float(x) for x in text.replace(",", " ").split()]


def _build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--gamma", type=float)
    common.add_argument("--oracle", action="store_true", default=None,
                        help="admit gamma = 1 for closed-form validation")
    common.add_argument("--tol-ode", type=float)
    common.add_argument("--tol-root", type=float)
    common.add_argument("--r-max", type=float)
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--output", help="write to this file instead of stdout")
    common.add_argument("--config", help="file of `key = value` lines; flags win")

    parser = _Parser(prog="bubblelab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="store_true", help="print the version and exit")
    sub = parser.add_subparsers(dest="subcommand")

    sub.add_parser("ground", parents=[common], help="ground-state constants")

    p = sub.add_parser("sweep", parents=[common], help="ground states over a gamma grid")
    p.add_argument("--gamma-min", type=float)
    p.add_argument("--gamma-max", type=float)
    p.add_argument("--steps", type=int)

    p = sub.add_parser("entire", parents=[common], help="entire solution and its potential")
    p.add_argument("--mu", type=float)
    p.add_argument("--radii", type=_float_list, help="distances from the center")
    p.add_argument("--count", type=int, help="number of default radii in [0, 10 r*]")

    for name, helptext in (("blowup", "single-bubble quantization"),
                           ("supinf", "sup + C inf along the family"),
                           ("epsreg", "ε-regularity constant of the family")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--R", type=float, dest="R")
        if name != "epsreg":
            p.add_argument("--a0", type=float)
            p.add_argument("--mu-values", type=_float_list)
            p.add_argument("--mu-exp-min", type=int)
            p.add_argument("--mu-exp-max", type=int)
        if name == "supinf":
            p.add_argument("--c-used", type=float)
            p.add_argument("--c-factor", type=float, help="C_used as a multiple of C_star")
        if name == "epsreg":
            p.add_argument("--eps-fractions", type=_float_list)
            p.add_argument("--eps", type=_float_list, help="absolute mass thresholds")
    return parser


def read_config(path):
    """Parse `key = value` lines (``#`` starts a comment); keys use - or _."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected `key = value`")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_").lower()] = value
    return out


_DEFAULTS = {
    "n": 3, "gamma": 2.0, "oracle": False, "tol_ode": 1e-10, "tol_root": 1e-12,
    "r_max": 50.0, "format": "csv", "output": None,
    "gamma_min": None, "gamma_max": None, "steps": 9,
    "mu": 1.0, "radii": None, "count": 64,
    "R": 1.0, "a0": 1.0, "mu_values": None, "mu_exp_min": 0, "mu_exp_max": 12,
    "c_used": None, "c_factor": 2.0, "eps_fractions": [0.25, 0.5, 0.9, 0.99], "eps": None,
}

_CONVERT = {
    "n": int, "steps": int, "count": int, "mu_exp_min": int, "mu_exp_max": int,
    "oracle": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "radii": _float_list, "mu_values": _float_list, "eps_fractions": _float_list,
    "eps": _float_list, "format": str, "output": str,
}


def parse_config(argv) -> RunConfig:
    """Parse and validate ``argv``; raises UsageError or DomainError."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.version:
        return RunConfig(subcommand="version", params=None)
    if ns.subcommand is None:
        raise UsageError(f"a subcommand is required: {', '.join(SUBCOMMANDS)}")
    given = {k: v for k, v in vars(ns).items() if v is not None}
    merged = dict(_DEFAULTS)
    if ns.config:
        for key, text in read_config(ns.config).items():
            key = "R" if key == "r" else key
            if key not in _DEFAULTS:
                raise UsageError(f"unknown config key {key!r}")
            try:
                merged[key] = _CONVERT.get(key, float)(text)
            except ValueError:
                raise UsageError(f"bad value for {key}: {text!r}") from None
    merged.update(given)
    if merged["format"] not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {merged['format']!r}")

    params = ProblemParams(merged["n"], merged["gamma"], tol_ode=merged["tol_ode"],
                           tol_root=merged["tol_root"], r_max=merged["r_max"],
                           oracle_mode=bool(merged["oracle"]))
    opts = {}
    sc = ns.subcommand
    if sc == "sweep":
        lo, hi, steps = merged["gamma_min"], merged["gamma_max"], merged["steps"]
        if lo is None or hi is None:
            raise UsageError("sweep needs --gamma-min and --gamma-max")
        if steps < 1 or (steps > 1 and not hi > lo):
            raise UsageError("sweep needs steps >= 1 and gamma-max > gamma-min")
        gammas = [lo] if steps == 1 else np.linspace(lo, hi, steps).tolist()
        opts["params"] = [ProblemParams(params.n, g, tol_ode=params.tol_ode,
                                        tol_root=params.tol_root, r_max=params.r_max,
                                        oracle_mode=params.oracle_mode) for g in gammas]
    elif sc == "entire":
        if not params.gamma > 1.0:
            raise DomainError("entire needs gamma > 1")
        if not merged["mu"] > 0.0:
            raise DomainError(f"mu must be positive, got {merged['mu']:g}")
        if merged["radii"] is not None and any(r < 0 for r in merged["radii"]):
            raise DomainError("radii must be nonnegative")
        if merged["count"] < 2:
            raise UsageError("count must be at least 2")
        opts.update(mu=merged["mu"], radii=merged["radii"], count=merged["count"])
    elif sc in ("blowup", "supinf", "epsreg"):
        if not params.gamma > 1.0:
            raise DomainError(f"{sc} needs gamma > 1")
        if not merged["R"] > 0.0:
            raise DomainError(f"R must be positive, got {merged['R']:g}")
        opts["R"] = merged["R"]
        if sc != "epsreg":
            if not merged["a0"] > 0.0:
                raise DomainError(f"A0 must be positive, got {merged['a0']:g}")
            mus = merged["mu_values"]
            if mus is None:
                mus = default_mu_grid(merged["mu_exp_min"], merged["mu_exp_max"])
            if not mus or any(m <= 0 for m in mus) or any(
                    b <= a for a, b in zip(mus, mus[1:])):
                raise DomainError("mu values must be positive and strictly increasing")
            opts.update(a0=merged["a0"], mu_values=mus)
        if sc == "supinf":
            if merged["c_used"] is not None and merged["c_used"] < 0:
                raise DomainError("C_used must be nonnegative")
            if merged["c_factor"] < 0:
                raise DomainError("c-factor must be nonnegative")
            opts.update(c_used=merged["c_used"], c_factor=merged["c_factor"])
        if sc == "epsreg":
            if merged["eps"] is not None:
                if any(e <= 0 for e in merged["eps"]):
                    raise DomainError("eps values must be positive")
                opts["eps"] = merged["eps"]
            else:
                fr = merged["eps_fractions"]
                if not fr or any(not 0.0 < f < 1.0 for f in fr):
                    raise DomainError("eps fractions must lie in (0, 1): "
                                      "eps >= quantum violates the mass hypothesis")
                opts["eps_fractions"] = fr
    return RunConfig(subcommand=sc, params=params, output_format=merged["format"],
                     output_path=merged["output"], options=opts)


def _ground_row(gs):
    p = gs.params
    return {"n": p.n, "gamma": p.gamma, "q": gs.q, "r_star": gs.r_star,
            "alpha_star": gs.alpha_star, "lambda_flux": gs.lambda_flux,
            "lambda_flux_quad": gs.lambda_flux_quad, "lambda_mass": gs.lambda_mass,
            "flux_rel_gap": gs.flux_gap, "mass_minus_flux": gs.lambda_mass - gs.lambda_flux}


def compute_rows(cfg: RunConfig):
    """Run the subcommand; returns ``(columns, rows)``."""
    sc, params, opts = cfg.subcommand, cfg.params, cfg.options
    if sc == "ground":
        return GROUND_COLUMNS, [_ground_row(ground_state(params))]
    if sc == "sweep":
        return GROUND_COLUMNS, [_ground_row(ground_state(p)) for p in opts["params"]]
    if sc == "entire":
        gs = ground_state(params)
        sol = entire_solution(gs, np.zeros(params.n), opts["mu"])
        radii = opts["radii"] if opts["radii"] is not None else default_radii(
            sol, opts["count"])
        ff = far_field_constants(sol)
        cq = c_gamma_prime_quadrature(sol)
        mass = total_mass(sol)
        rows = []
        for s in radii:
            v = sol.radial(float(s))
            pot = newton_potential(sol, float(s))
            rows.append({"radius": float(s), "v": v, "newton_potential": pot,
                         "residual": v - (pot - ff.c_gamma), "c_gamma": ff.c_gamma,
                         "c_gamma_prime": ff.c_gamma_prime, "c_gamma_prime_quad": cq,
                         "total_mass": mass})
        return ENTIRE_COLUMNS, rows
    if sc == "blowup":
        rep = blowup_family(params, opts["a0"], opts["mu_values"], opts["R"])
        rows = []
        for i, mu in enumerate(rep.mu_values):
            rows.append({"mu": mu, "center_value": rep.sups[i], "mass": rep.masses[i],
                         "quantum": rep.quantum, "residual": rep.residuals[i],
                         "sup": rep.sups[i], "inf": rep.infs[i], "v_half": rep.v_half[i],
                         "v_edge": rep.v_edge[i], "support_radius": rep.support_radii[i]})
        return BLOWUP_COLUMNS, rows
    if sc == "supinf":
        c_used = opts["c_used"]
        if c_used is None:
            probe = sup_inf_probe(params, opts["a0"], opts["mu_values"][:1], opts["R"], 0.0)
            c_used = opts["c_factor"] * probe.C_star
        rep = sup_inf_probe(params, opts["a0"], opts["mu_values"], opts["R"], c_used)
        rows = [{"mu": mu, "sup": rep.sups[i], "inf": rep.infs[i], "value": rep.values[i],
                 "C_used": rep.C_used, "C_star": rep.C_star, "bound": rep.bound}
                for i, mu in enumerate(rep.mu_values)]
        return SUPINF_COLUMNS, rows
    if sc == "epsreg":
        quantum = ground_state(params).lambda_mass
        if "eps" in opts:
            targets = [(e, e / quantum) for e in opts["eps"]]
        else:
            targets = [(f * quantum, f) for f in opts["eps_fractions"]]
        rows = []
        for eps, frac in targets:
            rep = eps_regularity_probe(params, eps, opts["R"])
            rows.append({"eps": eps, "eps_fraction": frac, "mu_eps": rep.mu_at_sup,
                         "c_of_eps": rep.c_of_eps, "quantum": rep.quantum,
                         "c_limit": rep.c_limit})
        return EPSREG_COLUMNS, rows
    raise UsageError(f"unknown subcommand {sc!r}")


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    value = float(value)
    return value if math.isfinite(value) else _fmt(value)


def emit_table(rows, fmt, destination=None, columns=None):
    """Write ``rows`` (dicts sharing one schema) as CSV or JSON.

    CSV floats use 17 significant digits, so every value parses back to the
    same double; JSON uses the shortest round-trip repr. ``destination`` is a
    path, a text stream, or None for stdout.
    """
    if columns is None:
        if not rows:
            raise ValueError("columns are required for an empty table")
        columns = list(rows[0])
    for row in rows:
        if list(row) != list(columns):
            raise ValueError("rows do not share the table schema")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps([{c: _json_value(row[c]) for c in columns} for row in rows],
                          indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run_cli(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
    except (UsageError, DomainError) as exc:
        print(f"bubblelab: error: {exc}", file=sys.stderr)
        return 2
    if cfg.subcommand == "version":
        print(__version__)
        return 0
    try:
        columns, rows = compute_rows(cfg)
    except IntegrationError as exc:
        print(json.dumps(exc.payload()), file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"bubblelab: error: {exc}", file=sys.stderr)
        return 2
    try:
        emit_table(rows, cfg.output_format, cfg.output_path, columns)
    except OSError as exc:
        print(json.dumps({"error": f"cannot write output: {exc.strerror}",
                          "path": cfg.output_path}), file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run_cli())
