"""Command-line front end.

Subcommands:

  run         single simulation -> snapshot/series/meta files
  sweep-mesh  same experiment on a decreasing sequence of mesh sizes
  compare     hyperbolic vs parabolic on a shared configuration
  ap-probe    large-damping flux probe over a sequence of eps values
  stationary  sample a closed-form stationary profile onto a grid

Every subcommand accepts `--config <path>` (flat `key = value` file) plus a
small set of overrides.  Exit codes: 0 success, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .aplimit import ap_flux_probe
from .core import Grid, ModelParams
from .harness import (
    ConfigError,
    ExperimentConfig,
    NumericalError,
    compare_models,
    config_from_mapping,
    mesh_refinement_study,
    parse_config_file,
    run,
    write_series,
    write_sidecar,
    write_snapshot,
)
from .hyperbolic import CflError, ReconstructionKind
from .stationary import NoBumpError, Orientation, central_bump, constant_state, half_bump

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_OVERRIDE_KEYS = ("model", "gamma", "dx", "tend", "flux", "reconstruction", "damping")


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=Path, help="flat key = value configuration file")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--model", choices=["hyperbolic", "parabolic"])
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--dx", type=float)
    parser.add_argument("--tend", type=float)
    parser.add_argument("--flux", choices=["hll", "hll-roe", "suliciu"])
    parser.add_argument("--reconstruction", choices=["e", "p"])
    parser.add_argument("--damping", choices=["explicit", "implicit"])


def _load_config(args) -> ExperimentConfig:
    mapping = parse_config_file(args.config) if args.config else {}
    overrides = {
        "model": args.model,
        "gamma": args.gamma,
        "dx": args.dx,
        "tend": args.tend,
        "flux": args.flux,
        "reconstruction": args.reconstruction,
        "damping": args.damping,
    }
    for key, value in overrides.items():
        if value is None:
            continue
        name = "t_end" if key == "tend" else key
        if name == "dx":
            mapping.pop("n", None)
        mapping[name] = str(value)
    return config_from_mapping(mapping)


def _write_run(out: Path, stem: str, report):
    out.mkdir(parents=True, exist_ok=True)
    write_snapshot(out / f"{stem}_snapshot.csv", report.x, report.rho, report.u, report.phi)
    write_series(out / f"{stem}_series.csv", report)
    write_sidecar(out / f"{stem}_meta.txt", report)


def _cmd_run(args) -> int:
    config = _load_config(args)
    report = run(config)
    _write_run(args.out, "run", report)
    print(
        f"t_final = {report.t_final:.6g}  bumps = {report.bumps[-1]}  "
        f"residual = {report.residuals[-1]:.3e}  "
        f"stopped_on_residual = {report.stopped_on_residual}"
    )
    return EXIT_OK


def _cmd_sweep_mesh(args) -> int:
    config = _load_config(args)
    dx_list = [float(s) for s in args.dx_list.split(",")]
    study = mesh_refinement_study(config, dx_list, profile_tol=args.profile_tol)
    args.out.mkdir(parents=True, exist_ok=True)
    for dx, report in zip(study.dx_list, study.reports):
        _write_run(args.out, f"mesh_{dx:g}", report)
        print(f"dx = {dx:g}  bumps = {report.bumps[-1]}  residual = {report.residuals[-1]:.3e}")
    if study.stable_from is None:
        print("no mesh-stable resolution within the sweep")
    else:
        print(f"profiles stable from dx = {study.dx_list[study.stable_from]:g}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    config = _load_config(args)
    from dataclasses import replace

    comparison = compare_models(
        replace(config, model="hyperbolic"),
        replace(config, model="parabolic"),
        profile_tol=args.profile_tol,
    )
    _write_run(args.out, "hyperbolic", comparison.report_a)
    _write_run(args.out, "parabolic", comparison.report_b)
    for label, trans in (("hyperbolic", comparison.transitions_a), ("parabolic", comparison.transitions_b)):
        for t, old, new in trans:
            print(f"{label}: bumps {old} -> {new} at t = {t:.4g}")
    print(f"same_asymptotics = {comparison.same_asymptotics}")
    return EXIT_OK


def _cmd_ap_probe(args) -> int:
    config = _load_config(args)
    eps_list = [float(s) for s in args.eps_list.split(",")]
    kind = config.scheme.reconstruction
    if args.reconstruction:
        kind = ReconstructionKind(args.reconstruction)
    chi = config.params.chi

    def r_fn(x):
        return 2.0 + 0.5 * np.sin(2.0 * np.pi * x)

    def phi_fn(x):
        return x + 0.1 * np.cos(2.0 * np.pi * x)

    entries = ap_flux_probe(r_fn, phi_fn, config.params, eps_list, kind, config.scheme)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "ap_probe.csv", "w") as fh:
        fh.write("eps,dx,err_conservative,err_nonconservative,reference_gap\n")
        for e in entries:
            fh.write(
                f"{e.eps:.17g},{e.dx:.17g},{e.err_vs_conservative:.17g},"
                f"{e.err_vs_nonconservative:.17g},{e.reference_gap:.17g}\n"
            )
    print(f"reconstruction = {kind.value}  chi = {chi:g}")
    for e in entries:
        print(
            f"eps = {e.eps:.1e}  dx = {e.dx:.1e}  "
            f"|F/eps - cons| = {e.err_vs_conservative:.3e}  "
            f"|F/eps - noncons| = {e.err_vs_nonconservative:.3e}"
        )
    return EXIT_OK


def _cmd_stationary(args) -> int:
    config = _load_config(args)
    params = config.params
    if args.kind == "constant":
        profile = constant_state(config.length, args.mass, params)
    elif args.kind == "central":
        profile = central_bump(config.length, args.mass, params)
    else:
        orientation = Orientation(args.orientation)
        profile = half_bump(config.length, args.mass, params, orientation)
    grid = Grid(config.length, config.n)
    rho, phi = profile.sample(grid)
    args.out.mkdir(parents=True, exist_ok=True)
    write_snapshot(args.out / "stationary_snapshot.csv", grid.centers, rho, np.zeros(grid.n), phi)
    if profile.xbar is not None:
        print(f"xbar = {profile.xbar:.12g}  K = {profile.K:.12g}")
    print(f"mass = {grid.dx * rho.sum():.12g} (target {args.mass:g})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chemotax", description="1D chemotaxis simulation suite"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single simulation")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep-mesh", help="mesh-refinement sweep")
    _add_common(p_sweep)
    p_sweep.add_argument("--dx-list", required=True, help="comma-separated, decreasing")
    p_sweep.add_argument("--profile-tol", type=float, default=0.1)
    p_sweep.set_defaults(func=_cmd_sweep_mesh)

    p_cmp = sub.add_parser("compare", help="hyperbolic vs parabolic")
    _add_common(p_cmp)
    p_cmp.add_argument("--profile-tol", type=float, default=0.1)
    p_cmp.set_defaults(func=_cmd_compare)

    p_ap = sub.add_parser("ap-probe", help="large-damping flux probe")
    _add_common(p_ap)
    p_ap.add_argument("--eps-list", required=True, help="comma-separated eps values")
    p_ap.set_defaults(func=_cmd_ap_probe)

    p_st = sub.add_parser("stationary", help="sample a closed-form stationary profile")
    _add_common(p_st)
    p_st.add_argument("--kind", choices=["half", "central", "constant"], default="half")
    p_st.add_argument("--mass", type=float, default=1.0)
    p_st.add_argument("--orientation", choices=["left", "right"], default="left")
    p_st.set_defaults(func=_cmd_stationary)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, NoBumpError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, CflError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
