"""Scenario-driven command line front end.

    congruence-kit <check|reconstruct|curves|spaceform|gaussbonnet>
                   --config <path> [--scenario KEY] [overrides]

Configs are TOML (JSON also accepted); every gated tolerance defaults from
one central table and can be overridden per run.  Each command writes a
deterministic report.json plus CSV artifacts into the output directory.
Exit codes: 0 every check passed, 1 a check failed or integration was
refused, 2 the configuration is invalid.  The CONGRUENCE_KIT_THREADS
environment variable caps worker threads; results do not depend on it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .congruence import (
    COMPAT_GATE,
    STABILITY_GATE,
    check_lagrangian,
    check_symmetry,
    curvature_pairing,
    kernel_stability_residual,
)
from .curvature4 import gauss_bonnet, omega_forms, pointwise_curvatures
from .curves import (
    equidistance_check,
    initial_support_vector,
    singular_parameters,
    solve_curve_closed_form,
    solve_curve_ode,
    tangency_residual,
)
from .errors import ConfigError, GeometryError, IntegrabilityError
from .numerics import worker_count
from .reconstruct import (
    _gate_points,
    fit_constants,
    foliation_check,
    reconstruct,
    regularize_search,
    verify_gauss_map,
)
from .report import RunReport, write_csv, write_json
from .scenarios import build_scenario
from .spaceform import (
    CLOSEDNESS_GATE,
    FOOT_TOL,
    build_normal_pair,
    check_hyperquadric,
    immersion_normal_residual,
    parallel_family_rank,
    rank1_parallel_section,
    singular_shifts,
    theta_equation,
)

COMMANDS = ("check", "reconstruct", "curves", "spaceform", "gaussbonnet")

# every gated tolerance, defaulted centrally; config [tolerances] overrides
# entries of the running command's table by check name
TOLERANCES = {
    "check": {
        "hyperquadric_foot": FOOT_TOL,
        "hyperquadric_beta": FOOT_TOL,
        "symmetry_defect": 0.5,
        "kernel_stability": STABILITY_GATE,
        "curl_kernel_residual": COMPAT_GATE,
        "image_residual": COMPAT_GATE,
        "preimage_residual": COMPAT_GATE,
    },
    "reconstruct": {
        "stability_residual": STABILITY_GATE,
        "curl_kernel_residual": COMPAT_GATE,
        "image_residual": COMPAT_GATE,
        "preimage_residual": COMPAT_GATE,
        "path_residual": 1e-6,
        "incidence": 1e-8,
        "tangency": None,          # grid step squared unless overridden
        "foliation_spread": 1e-6,
        "roundtrip_deviation": 1e-5,
        "degenerate_nodes": 0.5,
    },
    "curves": {
        "route_agreement": 1e-8,
        "tangency": 1e-9,
        "equidistance_spread": 1e-6,
    },
    "spaceform": {
        "closedness_residual": CLOSEDNESS_GATE,
        "path_residual": 1e-8,
        "immersion_residual": 1e-3,
        "singular_leaf_count": None,   # plane dimension unless overridden
        "hyperquadric_foot": FOOT_TOL,
        "hyperquadric_beta": FOOT_TOL,
        "section_proportionality": 1e-4,
        "section_mu_closedness": 2e-3,
        "section_path": 1e-3,
        "section_quadric_spread": 1e-3,
    },
    "gaussbonnet": {
        "identity_tangent": 1e-3,
        "identity_normal": 1e-3,
        "pointwise_identity_t": 1e-3,
        "pointwise_identity_n": 1e-3,
        "overlap_residual": 1e-6,
        "euler_tangent_integer": 1e-3,
        "euler_normal_integer": 1e-3,
        "degree_1_integer": 1e-3,
        "degree_2_integer": 1e-3,
    },
}

GRID_DEFAULTS = {
    "check": {},
    "reconstruct": {"res": 17},
    "curves": {"res": 65},
    "spaceform": {"sweep": 64},     # res defaults depend on the branch
    "gaussbonnet": {"res": 48, "csv_res": 24},
}

CONFIG_KEYS = {"scenario", "output_dir", "fd_step", "dims", "grid", "tolerances", "params"}


@dataclass
class RunConfig:
    command: str
    scenario: str
    params: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    fd_step: float = None
    dims: dict = None
    output_dir: str = "."

    def tol(self, name: str, fallback: float = None) -> float:
        value = self.tolerances.get(name)
        if value is None:
            value = fallback
        if value is None:
            raise ConfigError(f"no threshold available for check {name!r}")
        return float(value)

    def echo(self) -> dict:
        return {
            "scenario": self.scenario,
            "params": dict(self.params),
            "grid": dict(self.grid),
            "tolerances": dict(self.tolerances),
            "fd_step": self.fd_step,
            "dims": dict(self.dims) if self.dims else None,
            "output_dir": self.output_dir,
        }


def load_config_file(path: str) -> dict:
    try:
        if path.endswith(".json"):
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        else:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}")
    if not isinstance(data, dict):
        raise ConfigError(f"config root must be a table, got {type(data).__name__}")
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _parse_assignments(pairs, label: str) -> dict:
    out = {}
    for raw in pairs or []:
        if "=" not in raw:
            raise ConfigError(f"{label} expects NAME=VALUE, got {raw!r}")
        name, text = raw.split("=", 1)
        try:
            out[name.strip()] = json.loads(text)
        except json.JSONDecodeError:
            out[name.strip()] = text
    return out


def resolve_config(args) -> RunConfig:
    raw = load_config_file(args.config) if args.config else {}
    scenario = args.scenario or raw.get("scenario")
    if not scenario:
        raise ConfigError("no scenario given (config 'scenario' key or --scenario)")

    params = dict(raw.get("params", {}))
    params.update(_parse_assignments(args.param, "--param"))
    for flag, key in (("seed", "seed"), ("amplitude", "amplitude"),
                      ("a0", "A0"), ("b0", "B0")):
        value = getattr(args, flag, None)
        if value is not None:
            params[key] = value

    grid = {**GRID_DEFAULTS[args.command], **raw.get("grid", {})}
    if getattr(args, "res", None) is not None:
        grid["res"] = args.res
    if getattr(args, "t_sweep", None) is not None:
        grid["sweep"] = args.t_sweep
    for name, value in grid.items():
        if not isinstance(value, int) or value < 3:
            raise ConfigError(f"grid.{name} must be an integer >= 3, got {value!r}")

    tolerances = dict(TOLERANCES[args.command])
    overrides = dict(raw.get("tolerances", {}))
    overrides.update(_parse_assignments(args.tol, "--tol"))
    for name, value in overrides.items():
        if name not in tolerances:
            known = ", ".join(sorted(tolerances))
            raise ConfigError(f"unknown tolerance {name!r} for {args.command}; known: {known}")
        tolerances[name] = float(value)

    fd_step = args.fd_step if args.fd_step is not None else raw.get("fd_step")
    if fd_step is not None:
        fd_step = float(fd_step)
        if not 1e-8 <= fd_step <= 1e-2:
            raise ConfigError(f"fd_step must lie in [1e-8, 1e-2], got {fd_step}")

    dims = raw.get("dims")
    if dims is not None:
        unknown = sorted(set(dims) - {"n", "k", "m", "p"})
        if unknown:
            raise ConfigError(f"unknown dims keys: {', '.join(unknown)}")

    output_dir = args.output_dir or raw.get("output_dir") or "."
    return RunConfig(args.command, scenario, params, grid, tolerances,
                     fd_step, dims, output_dir)


def prepare_scenario(cfg: RunConfig) -> dict:
    data = build_scenario(cfg.scenario, cfg.params)
    sc = data["scenario"]
    if cfg.command not in sc.commands:
        supported = ", ".join(sc.commands)
        raise ConfigError(
            f"scenario {cfg.scenario!r} does not support {cfg.command!r} "
            f"(supported: {supported})")
    if cfg.dims:
        if sc.kind == "curve":
            actual = {"n": 1, "k": 1, "m": data["curve"].m, "p": 0}
        else:
            c = data["congruence"]
            actual = {"n": c.domain_dim, "k": c.nplane, "m": c.m, "p": c.sig.p}
        for name, want in cfg.dims.items():
            if int(want) != actual[name]:
                raise ConfigError(
                    f"dims mismatch for {cfg.scenario!r}: {name} = {actual[name]}, "
                    f"config says {want}")
    if cfg.fd_step is not None and "congruence" in data:
        data["congruence"].h = cfg.fd_step
    return data


def _artifact(cfg: RunConfig, name: str) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return os.path.join(cfg.output_dir, name)


def _refuse(report: RunReport, cfg: RunConfig, err: IntegrabilityError):
    report.details["refusal"] = str(err)
    for name in sorted(err.details):
        report.add(name, err.details[name], cfg.tol(name, COMPAT_GATE))


# -- commands -----------------------------------------------------------------------


def cmd_check(cfg: RunConfig) -> RunReport:
    data = prepare_scenario(cfg)
    c = data["congruence"]
    report = RunReport("check", cfg.echo())
    xs = _gate_points(c)

    hq = check_hyperquadric(c, xs)
    report.details["hyperquadric"] = {
        "max_foot": hq.max_foot, "max_beta": hq.max_beta,
        "is_vectorial": hq.is_vectorial,
    }
    if "spaceform" in data["scenario"].commands:
        report.add("hyperquadric_foot", hq.max_foot, cfg.tol("hyperquadric_foot"))
        report.add("hyperquadric_beta", hq.max_beta, cfg.tol("hyperquadric_beta"))
    else:
        report.skip("hyperquadric_foot",
                    "planes need not pass through the origin for this scenario")

    sym = check_symmetry(c, c.box.center())
    report.details["symmetry"] = {"status": sym.status, "nullspace_dim": sym.nullspace_dim}
    report.add("symmetry_defect", 0.0 if sym.status == "invertible" else 1.0,
               cfg.tol("symmetry_defect"))

    try:
        splits = [curvature_pairing(c, x) for x in xs]
    except GeometryError as exc:
        for name in ("kernel_stability", "curl_kernel_residual",
                     "image_residual", "preimage_residual"):
            report.skip(name, str(exc))
        return report

    ranks = sorted({s.rank for s in splits})
    kernel_dims = sorted({c.codim - s.rank for s in splits})
    report.details["curvature_rank"] = {"ranks": ranks, "kernel_dims": kernel_dims}
    if max(kernel_dims) > 0:
        stab = kernel_stability_residual(c, xs[:4])
        report.add("kernel_stability", stab, cfg.tol("kernel_stability"))
    else:
        report.skip("kernel_stability", "curvature pairing has a trivial kernel")

    lag = check_lagrangian(c, xs)
    report.details["lagrangian"] = {
        "total_curl": lag.total_curl, "normal_flatness": lag.normal_flatness,
        "points": lag.points,
    }
    report.add("curl_kernel_residual", lag.kernel_residual, cfg.tol("curl_kernel_residual"))
    report.add("image_residual", lag.image_residual, cfg.tol("image_residual"))
    report.add("preimage_residual", lag.preimage_residual, cfg.tol("preimage_residual"))
    return report


def cmd_reconstruct(cfg: RunConfig) -> RunReport:
    data = prepare_scenario(cfg)
    c = data["congruence"]
    report = RunReport("reconstruct", cfg.echo())
    res = cfg.grid["res"]

    try:
        recon = reconstruct(c, res)
    except IntegrabilityError as exc:
        _refuse(report, cfg, exc)
        return report

    support = recon.support
    report.details["branch"] = support.branch
    report.details["rank"] = support.rank
    report.details["kernel_dim"] = recon.frames.rank
    for name, value in support.gate_report().items():
        report.add(name, value, cfg.tol(name, COMPAT_GATE))
    report.add("path_residual", support.path_residual, cfg.tol("path_residual"))

    gauss = verify_gauss_map(recon)
    report.add("incidence", gauss["incidence"], cfg.tol("incidence"))
    report.add("tangency", gauss["tangency"],
               cfg.tol("tangency", gauss["grid_step"] ** 2))

    fol = foliation_check(recon)
    report.details["foliation"] = fol
    report.add("foliation_spread", fol["max_spread"], cfg.tol("foliation_spread"))

    if "immersion" in data:
        coeff, deviation = fit_constants(recon, data["immersion"])
        report.details["fitted_constants"] = list(np.asarray(coeff, dtype=float))
        report.add("roundtrip_deviation", deviation, cfg.tol("roundtrip_deviation"))
    else:
        report.skip("roundtrip_deviation", "scenario has no reference immersion")

    degenerate = recon.singular_nodes + recon.orientation_flips
    report.details["immersion_margin"] = recon.immersion_margin
    report.details["singular_nodes"] = recon.singular_nodes
    report.details["orientation_flips"] = recon.orientation_flips
    if degenerate and recon.frames.rank:
        search = regularize_search(recon)
        report.details["regularize_search"] = {
            "shift": list(np.asarray(search["shift"], dtype=float)),
            "margin": search["margin"],
        }
    report.add("degenerate_nodes", float(degenerate), cfg.tol("degenerate_nodes"))

    u_ax, v_ax = recon.axes
    rows = []
    for i in range(len(u_ax)):
        for j in range(len(v_ax)):
            rows.append([u_ax[i], v_ax[j], *recon.phi[i, j]])
    header = ["u", "v"] + [f"phi_{k + 1}" for k in range(c.m)]
    write_csv(_artifact(cfg, "immersion.csv"), header, rows)
    report.artifacts.append("immersion.csv")
    return report


def cmd_curves(cfg: RunConfig) -> RunReport:
    data = prepare_scenario(cfg)
    curve, lam, dlam = data["curve"], data["lam"], data["dlam"]
    a0, b0 = float(data["A0"]), float(data["B0"])
    report = RunReport("curves", cfg.echo())
    ts = np.linspace(curve.t0, curve.t1, cfg.grid["res"])

    closed = solve_curve_closed_form(curve, lam, ts, a0, b0)
    ode = solve_curve_ode(curve, lam, ts, initial_support_vector(curve, a0, b0))
    agreement = float(np.max(np.linalg.norm(closed.gamma - ode.gamma, axis=1)))
    report.add("route_agreement", agreement, cfg.tol("route_agreement"))
    tangency = max(tangency_residual(curve, closed, lam),
                   tangency_residual(curve, ode, lam))
    report.add("tangency", tangency, cfg.tol("tangency"))

    a0_alt = float(cfg.params.get("second_a0", a0 + 0.3))
    b0_alt = float(cfg.params.get("second_b0", b0 + 0.1))
    second = solve_curve_closed_form(curve, lam, ts, a0_alt, b0_alt)
    eq = equidistance_check(closed, second)
    report.details["equidistance"] = eq
    report.details["second_constants"] = {"A0": a0_alt, "B0": b0_alt}
    report.add("equidistance_spread", eq["spread"], cfg.tol("equidistance_spread"))

    report.details["singular_parameters"] = singular_parameters(curve, closed, dlam)

    rows = []
    for i, t in enumerate(ts):
        theta = closed.theta[i] if closed.theta is not None else None
        rows.append([t, closed.A[i], closed.B[i], theta, *closed.gamma[i]])
    header = ["t", "A", "B", "theta"] + [f"gamma_{k + 1}" for k in range(curve.m)]
    write_csv(_artifact(cfg, "curve.csv"), header, rows)
    report.artifacts.append("curve.csv")
    return report


def _spaceform_pair(cfg: RunConfig, data: dict, report: RunReport):
    c = data["congruence"]
    pair = build_normal_pair(c)
    report.details["eps"] = pair.eps
    res = cfg.grid.get("res", 33)

    try:
        sol = theta_equation(pair, res)
    except IntegrabilityError as exc:
        _refuse(report, cfg, exc)
        return

    report.add("closedness_residual", sol.closedness_residual, cfg.tol("closedness_residual"))
    report.add("path_residual", sol.path_residual, cfg.tol("path_residual"))
    report.add("immersion_residual", immersion_normal_residual(sol),
               cfg.tol("immersion_residual"))

    sweep = cfg.grid["sweep"]
    found = singular_shifts(sol, sweep=sweep)
    report.details["singular_shifts"] = found["singular_shifts"]
    report.details["margin_scale"] = found["margin_scale"]
    report.add("singular_leaf_count", float(len(found["singular_shifts"])),
               cfg.tol("singular_leaf_count", float(c.nplane)))

    u_ax, v_ax = sol.axes
    rows = []
    for i in range(len(u_ax)):
        for j in range(len(v_ax)):
            rows.append([u_ax[i], v_ax[j], sol.theta[i, j]])
    write_csv(_artifact(cfg, "theta.csv"), ["u", "v", "theta"], rows)
    report.artifacts.append("theta.csv")

    tmax = np.pi if pair.eps == 1 else 2.0
    shifts = np.linspace(0.0, tmax, sweep, endpoint=False)
    family = [[t, parallel_family_rank(sol, t)] for t in shifts]
    write_csv(_artifact(cfg, "family.csv"), ["shift", "immersion_margin"], family)
    report.artifacts.append("family.csv")


def _spaceform_rank1(cfg: RunConfig, data: dict, report: RunReport):
    c = data["congruence"]
    res = cfg.grid.get("res", 25)
    try:
        section = rank1_parallel_section(c, res)
    except IntegrabilityError as exc:
        _refuse(report, cfg, exc)
        return

    report.add("section_proportionality", section.proportionality_residual,
               cfg.tol("section_proportionality"))
    report.add("section_mu_closedness", section.mu_closedness,
               cfg.tol("section_mu_closedness"))
    report.add("section_path", section.path_residual, cfg.tol("section_path"))
    report.add("section_quadric_spread", section.quadric_spread,
               cfg.tol("section_quadric_spread"))
    g = c.sig.metric_signs()
    center = section.s[len(section.axes[0]) // 2, len(section.axes[1]) // 2]
    report.details["quadric_value"] = float(np.dot(g * center, center))

    u_ax, v_ax = section.axes
    rows = []
    for i in range(len(u_ax)):
        for j in range(len(v_ax)):
            rows.append([u_ax[i], v_ax[j], *section.s[i, j]])
    header = ["u", "v"] + [f"s_{k + 1}" for k in range(c.m)]
    write_csv(_artifact(cfg, "section.csv"), header, rows)
    report.artifacts.append("section.csv")


def cmd_spaceform(cfg: RunConfig) -> RunReport:
    data = prepare_scenario(cfg)
    c = data["congruence"]
    report = RunReport("spaceform", cfg.echo())

    xs = _gate_points(c)
    hq = check_hyperquadric(c, xs)
    report.add("hyperquadric_foot", hq.max_foot, cfg.tol("hyperquadric_foot"))
    report.add("hyperquadric_beta", hq.max_beta, cfg.tol("hyperquadric_beta"))

    # codimension 2 integrates a rotation angle; higher codimension with a
    # rank-1 kernel integrates the parallel section of the kernel line
    if c.codim == 2:
        _spaceform_pair(cfg, data, report)
    else:
        _spaceform_rank1(cfg, data, report)
    return report


def cmd_gaussbonnet(cfg: RunConfig) -> RunReport:
    data = prepare_scenario(cfg)
    report = RunReport("gaussbonnet", cfg.echo())
    res = cfg.grid["res"]

    rep = gauss_bonnet(data["closed"], res=res)
    report.details["gauss_bonnet"] = {
        "euler_tangent": rep.euler_tangent,
        "euler_normal": rep.euler_normal,
        "degree_1": rep.degree_1,
        "degree_2": rep.degree_2,
        "total_tangent": rep.total_tangent,
        "total_normal": rep.total_normal,
        "refinement_delta": rep.refinement_delta,
        "resolution": rep.resolution,
    }
    report.add("identity_tangent",
               abs(rep.euler_tangent - (rep.degree_1 + rep.degree_2)),
               cfg.tol("identity_tangent"))
    report.add("identity_normal",
               abs(rep.euler_normal - (rep.degree_1 - rep.degree_2)),
               cfg.tol("identity_normal"))
    report.add("pointwise_identity_t", rep.identity_residual_t,
               cfg.tol("pointwise_identity_t"))
    report.add("pointwise_identity_n", rep.identity_residual_n,
               cfg.tol("pointwise_identity_n"))
    report.add("overlap_residual", rep.overlap_residual, cfg.tol("overlap_residual"))
    for name, value in (("euler_tangent_integer", rep.euler_tangent),
                        ("euler_normal_integer", rep.euler_normal),
                        ("degree_1_integer", rep.degree_1),
                        ("degree_2_integer", rep.degree_2)):
        report.add(name, abs(value - round(value)), cfg.tol(name))

    c = data["congruence"]
    psi = data.get("immersion")
    csv_res = cfg.grid["csv_res"]
    u_ax, v_ax = c.box.axes(csv_res)
    rows = []
    for xu in u_ax:
        for xv in v_ax:
            x = np.array([xu, xv])
            if psi is not None:
                lam = c.plane(x).normal(psi(x))
                K, K_N, _ = pointwise_curvatures(c, x, lam)
            else:
                K = K_N = None
            omega_t, omega_n = omega_forms(c, x)
            rows.append([xu, xv, omega_t, omega_n, K, K_N])
    write_csv(_artifact(cfg, "pointwise.csv"),
              ["u", "v", "omega_t", "omega_n", "K", "K_N"], rows)
    report.artifacts.append("pointwise.csv")
    return report


COMMAND_FNS = {
    "check": cmd_check,
    "reconstruct": cmd_reconstruct,
    "curves": cmd_curves,
    "spaceform": cmd_spaceform,
    "gaussbonnet": cmd_gaussbonnet,
}


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="congruence-kit",
        description="Integrability checks, reconstructions, and curvature "
                    "integrals for affine plane congruences.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="TOML or JSON config file")
        sp.add_argument("--scenario", help="catalog scenario key")
        sp.add_argument("--output-dir", help="directory for report.json and CSVs")
        sp.add_argument("--res", type=int, help="grid resolution override")
        sp.add_argument("--fd-step", type=float, help="finite-difference step")
        sp.add_argument("--seed", type=int, help="scenario seed parameter")
        sp.add_argument("--amplitude", type=float, help="scenario amplitude parameter")
        sp.add_argument("--param", action="append", metavar="NAME=VALUE",
                        help="extra scenario parameter")
        sp.add_argument("--tol", action="append", metavar="NAME=VALUE",
                        help="tolerance override")
        if name == "curves":
            sp.add_argument("--a0", type=float, help="initial tangential coefficient")
            sp.add_argument("--b0", type=float, help="initial binormal coefficient")
        if name == "spaceform":
            sp.add_argument("--t-sweep", type=int, dest="t_sweep",
                            help="shifts sampled over one family period")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    start = time.time()
    try:
        cfg = resolve_config(args)
        report = COMMAND_FNS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report.wall_time = time.time() - start

    report_path = _artifact(cfg, "report.json")
    write_json(report_path, report.to_dict())

    for check in report.checks:
        state = "PASS" if check.passed else "FAIL"
        print(f"  {state} {check.name}: {check.value:.6e} (threshold {check.threshold:.6e})")
    for entry in report.skipped:
        print(f"  SKIP {entry['name']}: {entry['reason']}")
    print(f"report: {report_path} ({report.wall_time:.1f}s, threads={worker_count()})")
    if not report.passed:
        failed = ", ".join(report.failed_names())
        print(f"failed checks: {failed}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
