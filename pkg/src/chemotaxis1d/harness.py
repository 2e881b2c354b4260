"""Experiment driver: configuration, coupled time loops, residual and bump
diagnostics, mesh/model studies and CSV output.

A run couples one density step (well-balanced hyperbolic or BGK parabolic)
with one concentration step (Crank-Nicolson for delta=1, steady elliptic
solve for delta=0) per time step, and records residual/mass/bump series at a
fixed physical-time cadence.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .chemo import chemo_solve_elliptic
from .core import Grid, ModelParams, total_mass, velocity_from
from .fastpath import STATUS_NEGATIVE, STATUS_NONFINITE, hyperbolic_chunk
from .hyperbolic import DampingMode, ReconstructionKind, SchemeConfig
from .parabolic import run_parabolic_chunk
from .riemann import FluxKind
from .stationary import Orientation, concatenate, half_bump

__all__ = [
    "ConfigError",
    "NumericalError",
    "ExperimentConfig",
    "RunReport",
    "BumpReport",
    "run",
    "residual",
    "count_bumps",
    "mesh_refinement_study",
    "compare_models",
    "write_snapshot",
    "write_series",
    "write_sidecar",
    "parse_config_file",
    "config_from_mapping",
    "preset",
    "PRESETS",
]

STOP_STREAK = 10  # consecutive below-threshold outputs before early stop


class ConfigError(ValueError):
    pass


class NumericalError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "hyperbolic"
    params: ModelParams = field(default_factory=ModelParams)
    length: float = 1.0
    n: int = 100
    scheme: SchemeConfig = field(default_factory=SchemeConfig)
    beta: float = 0.95
    safety: float = 0.9
    initial: str = "constant:1"
    phi_initial: str = "zero"
    t_end: float = 1.0
    output_dt: float = 0.1
    residual_tol: float = 1e-12
    bump_threshold: float = 1e-3

    def __post_init__(self):
        if self.model not in ("hyperbolic", "parabolic"):
            raise ConfigError(f"unknown model {self.model!r}")
        if self.t_end <= 0:
            raise ConfigError("t_end must be positive")
        if self.n < 4:
            raise ConfigError("need at least 4 cells")
        if not 0 < self.bump_threshold < 1:
            raise ConfigError("bump_threshold must lie in (0, 1)")

    @property
    def grid(self) -> Grid:
        return Grid(self.length, self.n)


@dataclass
class BumpReport:
    count: int
    wall_runs: int  # how many of the runs touch a wall (half bumps)


@dataclass
class RunReport:
    config: ExperimentConfig
    x: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    phi: np.ndarray
    t_final: float
    times: np.ndarray
    residuals: np.ndarray
    masses: np.ndarray
    bumps: np.ndarray
    wall_seconds: float
    stopped_on_residual: bool


def residual(rho_next: np.ndarray, rho: np.ndarray) -> float:
    """L-infinity norm of the per-step density change."""
    if rho_next.shape != rho.shape:
        raise ValueError("fields must share the grid")
    return float(np.max(np.abs(rho_next - rho)))


def count_bumps(rho: np.ndarray, rel_threshold: float = 1e-3) -> BumpReport:
    if not 0 < rel_threshold < 1:
        raise ValueError("rel_threshold must lie in (0, 1)")
    peak = float(np.max(rho, initial=0.0))
    if peak <= 0.0:
        return BumpReport(0, 0)
    above = rho > rel_threshold * peak
    starts = np.flatnonzero(above & ~np.concatenate(([False], above[:-1])))
    if starts.size == 0:
        return BumpReport(0, 0)
    ends = np.flatnonzero(above & ~np.concatenate((above[1:], [False])))
    wall = int(above[0]) + int(above[-1]) if starts.size > 1 else int(above[0] or above[-1])
    return BumpReport(int(starts.size), wall)


# ---------------------------------------------------------------------------
# initial data


def _initial_fields(config: ExperimentConfig):
    grid = config.grid
    x = grid.centers
    L = config.length
    spec = config.initial
    phi = None

    if spec.startswith("constant:"):
        mass = float(spec.split(":", 1)[1])
        rho = np.full(grid.n, mass / L)
    elif spec == "sin4pi-1":
        rho = 1.0 + np.sin(4.0 * np.pi * np.abs(x - 0.25 * L))
    elif spec == "sin4pi-1.5":
        rho = 1.5 + np.sin(4.0 * np.pi * np.abs(x - 0.25 * L))
    elif spec == "two-bumps":
        # non-symmetric pair of lateral half bumps on unit subdomains
        if L < 4.0 - 1e-12:
            raise ConfigError("two-bumps initial datum needs L = 4")
        left = half_bump(1.0, 1.0, config.params, Orientation.LEFT)
        right = half_bump(1.0, 3.0, config.params, Orientation.RIGHT)
        rho, phi = concatenate([(left, (0.0, 1.0)), (right, (3.0, 4.0))], grid)
    elif spec.startswith("expr:"):
        rho = np.asarray(
            eval(spec[5:], {"np": np, "x": x, "L": L, "pi": np.pi}), dtype=float
        )
        rho = np.broadcast_to(rho, x.shape).copy()
    else:
        raise ConfigError(f"unknown initial datum {spec!r}")

    if np.any(rho < 0):
        raise ConfigError("initial density must be non-negative")

    pspec = config.phi_initial
    if pspec == "zero":
        if phi is None:
            phi = np.zeros(grid.n)
    elif pspec == "steady":
        phi = chemo_solve_elliptic(rho, config.params, grid.dx)
    elif pspec == "from-initial":
        if phi is None:
            raise ConfigError(f"initial datum {spec!r} carries no concentration")
    elif pspec.startswith("expr:"):
        phi = np.asarray(
            eval(pspec[5:], {"np": np, "x": x, "L": L, "pi": np.pi}), dtype=float
        )
        phi = np.broadcast_to(phi, x.shape).copy()
    else:
        raise ConfigError(f"unknown phi_initial {pspec!r}")
    if phi is None:
        phi = np.zeros(grid.n)
    return rho, phi


# ---------------------------------------------------------------------------
# time loops


class _SeriesRecorder:
    def __init__(self, config: ExperimentConfig, grid: Grid):
        self.config = config
        self.grid = grid
        self.times = []
        self.residuals = []
        self.masses = []
        self.bumps = []
        self.streak = 0

    def record(self, t, res, rho) -> bool:
        """Append one output row; True if the residual-stop rule fires."""
        self.times.append(t)
        self.residuals.append(res)
        self.masses.append(total_mass(rho, self.grid))
        self.bumps.append(count_bumps(rho, self.config.bump_threshold).count)
        if res < self.config.residual_tol:
            self.streak += 1
        else:
            self.streak = 0
        return self.streak >= STOP_STREAK


def _run_hyperbolic(config: ExperimentConfig, rho0, phi0):
    grid = config.grid
    dx = grid.dx
    params = config.params
    rho = rho0.copy()
    mom = np.zeros_like(rho0)
    phi = phi0.copy()
    rec = _SeriesRecorder(config, grid)
    rec.record(0.0, np.inf, rho)

    t = 0.0
    stopped = False
    while t < config.t_end:
        t_stop = min(t + config.output_dt, config.t_end)
        rho, mom, phi, t, steps, res, status = hyperbolic_chunk(
            rho, mom, phi, t, t_stop, params, dx, config.scheme
        )
        if status == STATUS_NEGATIVE:
            raise NumericalError(f"density became negative at t = {t:.6g}")
        if status == STATUS_NONFINITE or not np.all(np.isfinite(rho)):
            raise NumericalError(f"non-finite density at t = {t:.6g}")
        if rec.record(min(t, config.t_end), res, rho):
            stopped = True
            break
    return rho, velocity_from(rho, mom), phi, t, rec, stopped


def _run_parabolic(config: ExperimentConfig, rho0, phi0):
    grid = config.grid
    dx = grid.dx
    params = config.params
    rho = rho0.copy()
    phi = phi0.copy()
    rec = _SeriesRecorder(config, grid)
    rec.record(0.0, np.inf, rho)

    t = 0.0
    stopped = False
    while t < config.t_end - 1e-12:
        t_stop = min(t + config.output_dt, config.t_end)
        rho, phi, t, steps, res = run_parabolic_chunk(
            rho, phi, t, t_stop, params, config.beta, config.safety, dx
        )
        if not np.all(np.isfinite(rho)):
            raise NumericalError(f"non-finite density at t = {t:.6g}")
        if rec.record(t, res, rho):
            stopped = True
            break
    return rho, np.zeros_like(rho), phi, t, rec, stopped


def run(config: ExperimentConfig) -> RunReport:
    start = time.perf_counter()
    rho0, phi0 = _initial_fields(config)
    if config.model == "hyperbolic":
        rho, u, phi, t, rec, stopped = _run_hyperbolic(config, rho0, phi0)
    else:
        rho, u, phi, t, rec, stopped = _run_parabolic(config, rho0, phi0)
    return RunReport(
        config=config,
        x=config.grid.centers,
        rho=rho,
        u=u,
        phi=phi,
        t_final=t,
        times=np.asarray(rec.times),
        residuals=np.asarray(rec.residuals),
        masses=np.asarray(rec.masses),
        bumps=np.asarray(rec.bumps, dtype=int),
        wall_seconds=time.perf_counter() - start,
        stopped_on_residual=stopped,
    )


# ---------------------------------------------------------------------------
# studies


@dataclass
class MeshStudy:
    dx_list: list
    reports: list
    stable_from: int | None  # first index whose bump count and profile match the next-finer mesh


def _profile_distance(coarse: RunReport, fine: RunReport) -> float:
    interp = np.interp(coarse.x, fine.x, fine.rho)
    scale = max(float(np.max(np.abs(fine.rho))), 1e-300)
    return float(np.max(np.abs(coarse.rho - interp))) / scale


def mesh_refinement_study(
    base: ExperimentConfig, dx_list, profile_tol: float = 0.1
) -> MeshStudy:
    if any(b >= a for a, b in zip(dx_list, dx_list[1:])):
        raise ConfigError("dx_list must be strictly decreasing")
    reports = []
    for dx in dx_list:
        n = int(round(base.length / dx))
        reports.append(run(replace(base, n=n)))
    stable_from = None
    if len(reports) == 1:
        stable_from = 0
    else:
        for i in range(len(reports) - 1):
            same_bumps = reports[i].bumps[-1] == reports[i + 1].bumps[-1]
            close = _profile_distance(reports[i], reports[i + 1]) <= profile_tol
            if same_bumps and close:
                stable_from = i
                break
    return MeshStudy(list(dx_list), reports, stable_from)


@dataclass
class ModelComparison:
    report_a: RunReport
    report_b: RunReport
    transitions_a: list
    transitions_b: list
    same_asymptotics: bool


def _transitions(report: RunReport):
    out = []
    b = report.bumps
    for i in range(1, len(b)):
        if b[i] != b[i - 1]:
            out.append((float(report.times[i]), int(b[i - 1]), int(b[i])))
    return out


def compare_models(
    config_a: ExperimentConfig, config_b: ExperimentConfig, profile_tol: float = 0.1
) -> ModelComparison:
    ra = run(config_a)
    rb = run(config_b)
    same = bool(ra.bumps[-1] == rb.bumps[-1]) and _profile_distance(ra, rb) <= profile_tol
    return ModelComparison(ra, rb, _transitions(ra), _transitions(rb), same)


# ---------------------------------------------------------------------------
# file formats


def write_snapshot(path, x, rho, u, phi):
    rows = np.column_stack([x, rho, u, phi])
    with open(path, "w") as fh:
        fh.write("x,rho,u,phi\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def write_series(path, report: RunReport):
    with open(path, "w") as fh:
        fh.write("t,residual,mass,bumps\n")
        for t, r, m, b in zip(report.times, report.residuals, report.masses, report.bumps):
            fh.write(f"{t:.17g},{r:.17g},{m:.17g},{b}\n")


def write_sidecar(path, report: RunReport):
    from . import __version__

    cfg = report.config
    pairs = {
        "model": cfg.model,
        "kappa": cfg.params.kappa,
        "gamma": cfg.params.gamma,
        "chi": cfg.params.chi,
        "alpha": cfg.params.alpha,
        "D": cfg.params.diff,
        "a": cfg.params.prod,
        "b": cfg.params.degr,
        "delta": cfg.params.delta,
        "L": cfg.length,
        "n": cfg.n,
        "flux": cfg.scheme.flux.value,
        "reconstruction": cfg.scheme.reconstruction.value,
        "damping": cfg.scheme.damping.value,
        "cfl_factor": cfg.scheme.cfl_factor,
        "beta": cfg.beta,
        "safety": cfg.safety,
        "initial": cfg.initial,
        "phi_initial": cfg.phi_initial,
        "t_end": cfg.t_end,
        "output_dt": cfg.output_dt,
        "residual_tol": cfg.residual_tol,
        "bump_threshold": cfg.bump_threshold,
        "t_final": report.t_final,
        "stopped_on_residual": report.stopped_on_residual,
        "wall_seconds": f"{report.wall_seconds:.3f}",
        "version": __version__,
    }
    with open(path, "w") as fh:
        for k, v in pairs.items():
            fh.write(f"{k} = {v}\n")


# ---------------------------------------------------------------------------
# config files and presets

_CONFIG_KEYS = {
    "model",
    "kappa",
    "gamma",
    "chi",
    "alpha",
    "D",
    "a",
    "b",
    "delta",
    "L",
    "n",
    "dx",
    "flux",
    "reconstruction",
    "damping",
    "cfl_factor",
    "beta",
    "safety",
    "initial",
    "phi_initial",
    "t_end",
    "output_dt",
    "residual_tol",
    "bump_threshold",
}

_FLOAT_KEYS = {
    "kappa", "gamma", "chi", "alpha", "D", "a", "b", "L", "dx",
    "cfl_factor", "beta", "safety", "t_end", "output_dt",
    "residual_tol", "bump_threshold",
}


def parse_config_file(path) -> dict:
    """Flat `key = value` text; '#' starts a comment; unknown keys are errors."""
    mapping = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            mapping[key] = value
    return mapping


def config_from_mapping(mapping: dict) -> ExperimentConfig:
    unknown = set(mapping) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    m = dict(mapping)
    try:
        for key in list(m):
            if key in _FLOAT_KEYS:
                m[key] = float(m[key])
        if "delta" in m:
            m["delta"] = int(m["delta"])
        if "n" in m:
            m["n"] = int(m["n"])
    except ValueError as exc:
        raise ConfigError(f"bad numeric value: {exc}") from exc

    length = m.get("L", 1.0)
    if "n" in m and "dx" in m:
        raise ConfigError("give either n or dx, not both")
    if "dx" in m:
        n = int(round(length / m["dx"]))
    else:
        n = m.get("n", 100)

    try:
        params = ModelParams(
            kappa=m.get("kappa", 1.0),
            gamma=m.get("gamma", 2.0),
            chi=m.get("chi", 1.0),
            alpha=m.get("alpha", 1.0),
            diff=m.get("D", 1.0),
            prod=m.get("a", 1.0),
            degr=m.get("b", 1.0),
            delta=m.get("delta", 1),
        )
        scheme = SchemeConfig(
            flux=FluxKind(m.get("flux", "suliciu")),
            reconstruction=ReconstructionKind(m.get("reconstruction", "p")),
            damping=DampingMode(m.get("damping", "implicit")),
            cfl_factor=m.get("cfl_factor", 0.5),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return ExperimentConfig(
        model=m.get("model", "hyperbolic"),
        params=params,
        length=length,
        n=n,
        scheme=scheme,
        beta=m.get("beta", 0.95),
        safety=m.get("safety", 0.9),
        initial=m.get("initial", "constant:1"),
        phi_initial=m.get("phi_initial", "zero"),
        t_end=m.get("t_end", 1.0),
        output_dt=m.get("output_dt", 0.1),
        residual_tol=m.get("residual_tol", 1e-12),
        bump_threshold=m.get("bump_threshold", 1e-3),
    )


def preset(name: str, **overrides) -> ExperimentConfig:
    try:
        cfg = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None
    return replace(cfg, **overrides) if overrides else cfg


def _build_presets() -> dict:
    damp_study = ModelParams(kappa=1.0, gamma=2.0, chi=50.0, alpha=1.0, diff=1.0, prod=1.0, degr=1.0)
    mesh_study = ModelParams(kappa=1.0, gamma=2.0, chi=10.0, alpha=1.0, diff=0.1, prod=20.0, degr=10.0)
    return {
        # lateral-bump formation, damping-treatment study
        "lateral-bump-g2": ExperimentConfig(
            model="hyperbolic", params=damp_study, length=1.0, n=200,
            initial="sin4pi-1", t_end=300.0,
        ),
        "lateral-bump-g3": ExperimentConfig(
            model="hyperbolic", params=replace(damp_study, gamma=3.0), length=1.0, n=200,
            initial="sin4pi-1", t_end=300.0,
        ),
        # mesh-refinement study
        "mesh-study-g2": ExperimentConfig(
            model="hyperbolic", params=mesh_study, length=3.0, n=600,
            initial="sin4pi-1.5", t_end=300.0,
        ),
        "mesh-study-g3": ExperimentConfig(
            model="hyperbolic", params=replace(mesh_study, gamma=3.0), length=3.0, n=600,
            initial="sin4pi-1.5", t_end=300.0,
        ),
        # exact two-bump datum, hyperbolic vs parabolic
        "two-bumps-hyp": ExperimentConfig(
            model="hyperbolic", params=damp_study, length=4.0, n=400,
            initial="two-bumps", phi_initial="from-initial", t_end=150.0,
        ),
        # metastable plateaus dip below any practical residual threshold long
        # before the final merge, so the parabolic runs never stop early
        "two-bumps-par": ExperimentConfig(
            model="parabolic", params=damp_study, length=4.0, n=400,
            initial="two-bumps", phi_initial="from-initial", t_end=150.0,
            residual_tol=0.0,
        ),
        # generic datum, gamma = 3: metastability comparison
        "generic-g3-hyp": ExperimentConfig(
            model="hyperbolic", params=replace(mesh_study, gamma=3.0), length=3.0, n=300,
            initial="sin4pi-1.5", t_end=400.0,
        ),
        "generic-g3-par": ExperimentConfig(
            model="parabolic", params=replace(mesh_study, gamma=3.0), length=3.0, n=300,
            initial="sin4pi-1.5", t_end=400.0, residual_tol=0.0,
        ),
    }


PRESETS = _build_presets()
