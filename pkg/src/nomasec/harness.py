"""Run configuration and the four run modes.

Every mode writes CSV files (UTF-8, LF) whose first line is a ``#`` metadata
comment; nothing time-dependent goes into them, so reruns are byte-identical.
"""

from __future__ import annotations

import configparser
import csv
import dataclasses
import hashlib
import json
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .checks import CheckResult, run_checks
from .config import ConstraintSpec, SystemConfig, TxParams
from .metrics import average_noise_variance
from .optimizer import FRACTIONS, GridResult, GridSpec, PointMetrics, evaluate_grid, grid_search
from .outage import disc_g_sum, disc_u_sum, mc_probability

log = logging.getLogger(__name__)

MODES = ("sweep", "optimize", "validate", "outage-check")
SWEEP_VARS = ("rho", "theta_g", "beta_u", "N_u", "beta_g", "N_g", "N_cp")
INT_VARS = ("N_u", "N_g", "N_cp")

# Target mean-SNR range at u (dB) used to pick P_t.
SNR_U_RANGE_DB = (27.0, 45.0)

RHO_CURVES = (0.15, 0.35, 0.55, 0.75, 0.95)
THETA_CURVES = (0.55, 0.65, 0.75, 0.85, 0.95)

# Standard sweeps: (swept variable, swept values, curve variable, curve values, pinned values).
PRESETS = {
    "rho_theta_g": ("rho", FRACTIONS, "theta_g", THETA_CURVES, dict(N_g=24, beta_g=0.5)),
    "beta_g_rho": ("beta_g", FRACTIONS, "rho", RHO_CURVES, dict(N_g=24, theta_g=0.75)),
    "N_g_rho": ("N_g", tuple(range(0, 49, 4)), "rho", RHO_CURVES, dict(theta_g=0.75, beta_g=0.5)),
}


@dataclass
class SweepSpec:
    variable: str
    values: Sequence
    curve: Optional[str] = None
    curve_values: Sequence = (None,)
    pinned: TxParams = field(default_factory=lambda: TxParams.from_theta_g(0.75, rho=0.75))

    def __post_init__(self):
        for name in (self.variable, self.curve):
            if name is not None and name not in SWEEP_VARS:
                raise ValueError(f"sweep variable {name!r} is not one of {SWEEP_VARS}")
        if self.curve == self.variable:
            raise ValueError("sweep and curve variable must differ")

    @classmethod
    def preset(cls, name: str, pinned: Optional[TxParams] = None) -> "SweepSpec":
        var, values, curve, curve_values, pins = PRESETS[name]
        base = pinned or TxParams.from_theta_g(0.75, rho=0.75, beta_u=0.5, N_u=16)
        return cls(var, values, curve, curve_values, base.replace(**pins))


@dataclass
class ReferenceSpec:
    """Target optimum used by ``optimize`` to decide whether to write a deviation report."""

    rho: float = 0.75
    theta_g: float = 0.75
    beta_g: float = 0.85
    N_g: int = 32
    Rs_u: float = 4.0
    Rs_g: float = 0.7
    rel_tol: float = 0.25
    scan_decades: float = 0.9
    scan_points: int = 5
    scan_trials: int = 64


@dataclass
class OutageCheckSpec:
    points: int = 20
    v_min: float = 1e-3
    v_max: float = 10.0
    samples: int = 1_000_000


@dataclass
class RunConfig:
    system: SystemConfig
    mode: str = "validate"
    constraints: ConstraintSpec = field(default_factory=ConstraintSpec)
    grid: GridSpec = field(default_factory=GridSpec)
    sweep: Optional[SweepSpec] = None
    reference: Optional[ReferenceSpec] = None
    outage_check: OutageCheckSpec = field(default_factory=OutageCheckSpec)
    pinned: TxParams = field(default_factory=lambda: TxParams.from_theta_g(0.75, rho=0.75, beta_g=0.85, N_g=32))
    n_trials: int = 500
    master_seed: int = 0
    out_dir: Path = Path("results")
    workers: int = 1
    calibrate_snr: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    def digest(self) -> str:
        """Short hash of everything that determines the outputs."""
        payload = {
            "system": self.system.as_dict(),
            "constraints": dataclasses.asdict(self.constraints),
            "grid": {k: list(v) if v is not None else None for k, v in dataclasses.asdict(self.grid).items()},
            "sweep": None if self.sweep is None else _jsonable(dataclasses.asdict(self.sweep)),
            "reference": None if self.reference is None else dataclasses.asdict(self.reference),
            "outage_check": dataclasses.asdict(self.outage_check),
            "pinned": dataclasses.asdict(self.pinned),
            "mode": self.mode,
            "trials": self.n_trials,
            "seed": self.master_seed,
        }
        blob = json.dumps(_jsonable(payload), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# -- config file -----------------------------------------------------------------


def parse_values(text: str, integer: bool = False) -> list:
    """``"0.1, 0.2"`` or ``"start:stop:step"`` (inclusive) to a list of numbers."""
    text = text.strip()
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        n = int(round((stop - start) / step)) + 1
        vals = [round(start + k * step, 10) for k in range(n)]
    else:
        vals = [float(x) for x in text.replace(",", " ").split()]
    if integer:
        return [int(round(v)) for v in vals]
    return vals


def _field_types(cls) -> dict:
    return {f.name: f.type for f in dataclasses.fields(cls)}


def _coerce(value: str, typ: str):
    typ = str(typ)
    if "int" in typ and "float" not in typ:
        return None if value.strip().lower() == "none" else int(value)
    if "bool" in typ:
        return value.strip().lower() in ("1", "true", "yes", "on")
    return float(value)


def _section(cp: configparser.ConfigParser, name: str, cls) -> dict:
    if not cp.has_section(name):
        return {}
    types = _field_types(cls)
    out = {}
    for key, value in cp.items(name):
        if key not in types:
            raise ValueError(f"[{name}] unknown key {key!r}")
        out[key] = _coerce(value, types[key])
    return out


def _tx_from_section(cp, name: str, default: TxParams) -> TxParams:
    if not cp.has_section(name):
        return default
    changes = {}
    for key, value in cp.items(name):
        if key in ("N_u", "N_g"):
            changes[key] = int(value)
        elif key == "N_cp_override":
            changes[key] = None if value.lower() == "none" else int(value)
        elif key in ("rho", "beta_u", "beta_g", "theta_g", "theta_u"):
            changes[key] = float(value)
        else:
            raise ValueError(f"[{name}] unknown key {key!r}")
    return default.replace(**changes)


def load_run_config(path, overrides: Optional[dict] = None) -> RunConfig:
    """Read an INI-style config file; ``overrides`` (e.g. CLI flags) win over file values."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keys are case-sensitive field names
    path = Path(path)
    if not cp.read(path, encoding="utf-8"):
        raise FileNotFoundError(f"cannot read config file {path}")
    overrides = overrides or {}

    run = dict(cp.items("run")) if cp.has_section("run") else {}
    system = _section(cp, "system", SystemConfig)
    calibrate = overrides.get("calibrate_snr") or run.get("calibrate_snr", "false").lower() in ("1", "true", "yes", "on")
    if "P_t" not in system:
        if not calibrate:
            raise ValueError("[system] P_t is required unless calibrate_snr is set")
        system["P_t"] = 1.0  # replaced by calibration below
    sys_cfg = SystemConfig(**system)

    constraints = ConstraintSpec(**_section(cp, "constraints", ConstraintSpec))

    grid_kw = {}
    if cp.has_section("grid"):
        for key, value in cp.items("grid"):
            if key not in GridSpec.AXES and key != "N_cp":
                raise ValueError(f"[grid] unknown key {key!r}")
            if key == "N_cp" and value.strip().lower() == "none":
                grid_kw[key] = (None,)
            else:
                grid_kw[key] = tuple(parse_values(value, integer=key in INT_VARS))
    grid = GridSpec(**grid_kw)

    pinned = _tx_from_section(cp, "pinned", RunConfig.__dataclass_fields__["pinned"].default_factory())

    sweep = None
    if cp.has_section("sweep"):
        s = dict(cp.items("sweep"))
        if "preset" in s:
            sweep = SweepSpec.preset(s["preset"], pinned)
        else:
            var, curve = s["variable"], s.get("curve")
            sweep = SweepSpec(
                variable=var,
                values=parse_values(s["values"], integer=var in INT_VARS),
                curve=curve,
                curve_values=parse_values(s["curve_values"], integer=curve in INT_VARS) if curve else (None,),
                pinned=pinned,
            )

    reference = ReferenceSpec(**_section(cp, "reference", ReferenceSpec)) if cp.has_section("reference") else None
    ocheck = OutageCheckSpec(**_section(cp, "outage_check", OutageCheckSpec))
    if cp.has_section("outage_check"):
        ocheck = dataclasses.replace(ocheck, points=int(ocheck.points), samples=int(ocheck.samples))

    cfg = RunConfig(
        system=sys_cfg,
        mode=overrides.get("mode") or run.get("mode", "validate"),
        constraints=constraints,
        grid=grid,
        sweep=sweep,
        reference=reference,
        outage_check=ocheck,
        pinned=pinned,
        n_trials=int(overrides.get("trials") or run.get("trials", 500)),
        master_seed=int(overrides["seed"] if overrides.get("seed") is not None else run.get("seed", 0)),
        out_dir=Path(overrides.get("out") or run.get("out", "results")),
        workers=int(overrides.get("workers") or run.get("workers", 1)),
        calibrate_snr=bool(calibrate),
    )
    if cfg.calibrate_snr:
        P_t, _ = calibrate_pt(cfg.system, cfg.grid.rho, cfg.grid.theta_g, cfg.pinned.beta_u, cfg.pinned.N_u)
        cfg.system = cfg.system.replace(P_t=P_t)
    return cfg


# -- P_t calibration -------------------------------------------------------------


def mean_snr_u_db(config: SystemConfig, rho, theta_g, beta_u: float, N_u: int):
    """Mean per-sub-channel SNR at u after SIC (uniform-PDP taps: E|H_k|^2 = num_taps)."""
    s2 = average_noise_variance(config.sigma2, config.N_s, N_u, beta_u)
    gain = config.P_t * config.c_u**2 * config.num_taps / config.N_t
    return 10 * np.log10(np.asarray(rho) * (1.0 - np.asarray(theta_g)) * gain / s2)


def mean_sinr_g_db(config: SystemConfig, rho, theta_g, beta_g: float, N_g: int):
    """Mean per-sub-channel SINR at g with u's signal as interference."""
    s2 = average_noise_variance(config.sigma2, config.N_s, N_g, beta_g)
    gain = config.P_t * config.c_g**2 * config.num_taps / config.N_t
    rho, theta_g = np.asarray(rho), np.asarray(theta_g)
    return 10 * np.log10(rho * theta_g * gain / (rho * (1.0 - theta_g) * gain + s2))


def calibrate_pt(
    config: SystemConfig,
    rho_values: Sequence[float] = FRACTIONS,
    theta_values: Sequence[float] = THETA_CURVES,
    beta_u: float = 0.5,
    N_u: int = 16,
    target_db: tuple[float, float] = SNR_U_RANGE_DB,
) -> tuple[float, dict]:
    """P_t placing the midpoint of u's mean-SNR range (over the grid) at the target midpoint.

    SNR is linear in P_t, so this is a closed-form dB shift.
    """
    unit = config.replace(P_t=1.0)
    r, t = np.meshgrid(np.asarray(rho_values, float), np.asarray(theta_values, float))
    snr = mean_snr_u_db(unit, r, t, beta_u, N_u)
    lo, hi = float(snr.min()), float(snr.max())
    P_t = 10 ** ((sum(target_db) / 2 - (lo + hi) / 2) / 10)
    span_u = (lo + 10 * np.log10(P_t), hi + 10 * np.log10(P_t))
    sinr_g = mean_sinr_g_db(config.replace(P_t=P_t), r, t, 0.5, 24)
    info = {
        "P_t": P_t,
        "snr_u_db": span_u,
        "sinr_g_db": (float(sinr_g.min()), float(sinr_g.max())),
        "target_u_db": target_db,
    }
    return P_t, info


# -- CSV output --------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if x is None:
        return ""
    return str(x)


def write_csv(path: Path, header: Sequence[str], rows, meta: dict) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write("# " + " ".join(f"{k}={_fmt(v)}" for k, v in meta.items()) + "\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _meta(run: RunConfig, **extra) -> dict:
    meta = {
        "nomasec": __version__,
        "mode": run.mode,
        "config_hash": run.digest(),
        "seed": run.master_seed,
        "trials": run.n_trials,
        "P_t": run.system.P_t,
    }
    meta.update(extra)
    return meta


# -- sweep -----------------------------------------------------------------------

SWEEP_HEADER = (
    "swept_var", "curve_var", "mean_Rs_u", "mean_Rs_g", "P_o_u", "P_o_g",
    "mean_E_u", "mean_E_g", "Rs_sum_bound", "trials", "seed",
)


def sweep_points(run: RunConfig) -> list[tuple]:
    """``(swept value, curve value, PointMetrics)`` for every sweep point, curve-major."""
    sw = run.sweep
    if sw is None:
        raise ValueError("sweep mode needs a [sweep] section")
    pin = sw.pinned
    axes = {a: (getattr(pin, a),) for a in GridSpec.AXES}
    cps = (pin.N_cp_override,)
    for name, vals in ((sw.variable, sw.values), (sw.curve, sw.curve_values)):
        if name is None:
            continue
        if name == "N_cp":
            cps = tuple(vals)
        else:
            axes[name] = tuple(vals)
    by_cp = {}
    for cp in cps:
        grid = GridSpec(**axes, N_cp=(cp,))
        ev = evaluate_grid(run.system, grid, run.constraints, run.n_trials, run.master_seed, run.workers, n_cp=cp)
        by_cp[cp] = ev
    out = []
    for cval in sw.curve_values:
        for sval in sw.values:
            lookup = {sw.variable: sval}
            if sw.curve is not None:
                lookup[sw.curve] = cval
            ev = by_cp[lookup.get("N_cp", pin.N_cp_override)]
            idx = tuple(
                int(np.flatnonzero(np.isclose(ev.axes[a], lookup[a]))[0]) if a in lookup else 0
                for a in GridSpec.AXES
            )
            out.append((sval, cval, ev.point(idx)))
    return out


def run_sweep(run: RunConfig) -> Path:
    pts = sweep_points(run)
    rows = [
        (s, c, p.mean_Rs_u, p.mean_Rs_g, p.P_o_u, p.P_o_g, p.mean_E_u, p.mean_E_g,
         p.mean_Rs_sum_bound, p.trials, run.master_seed)
        for s, c, p in pts
    ]
    sw = run.sweep
    meta = _meta(run, swept_var=sw.variable, curve_var=sw.curve)
    return write_csv(run.out_dir / "sweep.csv", SWEEP_HEADER, rows, meta)


# -- optimize ------------------------------------------------------------------------

OPT_HEADER = (
    "rho", "theta_u", "theta_g", "beta_u", "beta_g", "N_u", "N_g", "N_cp",
    "mean_Rs_u", "mean_Rs_g", "objective", "P_o_u", "P_o_g", "mean_E_u", "mean_E_g",
    "Rs_sum_bound", "feasible", "n_points", "n_feasible", "trials", "seed",
)


def _opt_row(run: RunConfig, res: GridResult, P_t: Optional[float] = None) -> tuple:
    p, tx = res.best, res.best.tx
    cp = tx.N_cp_override if tx.N_cp_override is not None else run.system.N_cp
    row = (
        tx.rho, round(tx.theta_u, 12), tx.theta_g, tx.beta_u, tx.beta_g, tx.N_u, tx.N_g, cp,
        p.mean_Rs_u, p.mean_Rs_g, p.objective, p.P_o_u, p.P_o_g, p.mean_E_u, p.mean_E_g,
        p.mean_Rs_sum_bound, res.feasible, res.n_points, res.n_feasible, res.trials, res.master_seed,
    )
    return row if P_t is None else (P_t,) + row


def _step(values: Sequence[float]) -> float:
    v = np.unique(np.asarray(values, dtype=float))
    return float(np.min(np.diff(v))) if v.size > 1 else 0.0


def check_reproduction(res: GridResult, ref: ReferenceSpec, grid: GridSpec, config: SystemConfig) -> list[str]:
    """Sub-checks of the reference optimum that ``res`` fails (empty list: reproduced)."""
    failures = []
    if not res.feasible:
        failures.append("no feasible grid point")
    ax = grid.axes(config)
    best = res.best
    for name in ("rho", "theta_g", "beta_g", "N_g"):
        got, want = getattr(best.tx, name), getattr(ref, name)
        step = _step(ax[name])
        if abs(got - want) > step + 1e-9:
            failures.append(f"{name}: argmax {got:g} is more than one grid step ({step:g}) from {want:g}")
    for name, got, want in (("Rs_u", best.mean_Rs_u, ref.Rs_u), ("Rs_g", best.mean_Rs_g, ref.Rs_g)):
        if not (abs(got - want) <= ref.rel_tol * want):
            failures.append(f"mean_{name}: {got:.4g} outside {want:g} +/- {100 * ref.rel_tol:g}%")
    return failures


@dataclass
class OptimizeOutcome:
    result: GridResult
    failures: list[str]
    scan: list[tuple] = field(default_factory=list)  # (P_t, GridResult, failures)
    report: Optional[Path] = None
    reproduced_at: Optional[float] = None


def _scan_factors(ref: ReferenceSpec) -> np.ndarray:
    return np.linspace(-ref.scan_decades, ref.scan_decades, ref.scan_points)


def run_optimize(run: RunConfig) -> OptimizeOutcome:
    res = grid_search(run.system, run.grid, run.constraints, run.n_trials, run.master_seed, run.workers)
    write_csv(run.out_dir / "optimum.csv", OPT_HEADER, [_opt_row(run, res)], _meta(run))
    if run.reference is None:
        return OptimizeOutcome(res, [])
    ref = run.reference
    failures = check_reproduction(res, ref, run.grid, run.system)
    out = OptimizeOutcome(res, failures)
    if not failures:
        out.reproduced_at = run.system.P_t
        return out

    for dec in _scan_factors(ref):
        if abs(dec) < 1e-12:
            continue
        P_t = run.system.P_t * 10**dec
        cfg = run.system.replace(P_t=P_t)
        r = grid_search(cfg, run.grid, run.constraints, ref.scan_trials, run.master_seed, run.workers)
        f = check_reproduction(r, ref, run.grid, cfg)
        if not f:
            full = grid_search(cfg, run.grid, run.constraints, run.n_trials, run.master_seed, run.workers)
            f = check_reproduction(full, ref, run.grid, cfg)
            if not f:
                out.reproduced_at = P_t
            r = full
        out.scan.append((P_t, r, f))
    if out.reproduced_at is None:
        out.report = write_deviation_report(run, out)
    scan_rows = [_opt_row(run, r, P_t) for P_t, r, _ in out.scan]
    write_csv(run.out_dir / "pt_scan.csv", ("P_t",) + OPT_HEADER, scan_rows, _meta(run))
    return out


def write_deviation_report(run: RunConfig, out: OptimizeOutcome) -> Path:
    ref, res = run.reference, out.result
    lines = [
        "# Optimum reproduction: deviation report",
        "",
        f"Reference optimum: rho={ref.rho}, theta_g={ref.theta_g}, beta_g={ref.beta_g}, N_g={ref.N_g}; "
        f"E{{Rs_u}}={ref.Rs_u}, E{{Rs_g}}={ref.Rs_g} (+/- {100 * ref.rel_tol:g}%).",
        "",
        f"## Calibrated P_t = {run.system.P_t:.6g} W, {run.n_trials} trials, seed {run.master_seed}",
        "",
        _describe(res),
        "",
        "Failed sub-checks:",
        *[f"- {f}" for f in out.failures],
        "",
        f"## P_t scan over +/- {ref.scan_decades} decades ({ref.scan_trials} trials per point)",
        "",
        "| P_t (W) | feasible | rho | theta_g | beta_g | N_g | E{Rs_u} | E{Rs_g} | failed checks |",
        "|---|---|---|---|---|---|---|---|---|",
    ]
    for P_t, r, f in out.scan:
        b = r.best
        lines.append(
            f"| {P_t:.4g} | {r.feasible} | {b.tx.rho:g} | {b.tx.theta_g:g} | {b.tx.beta_g:g} | {b.tx.N_g} "
            f"| {b.mean_Rs_u:.4g} | {b.mean_Rs_g:.4g} | {len(f)} |"
        )
    edge = _edge_note(run, out)
    if edge:
        lines += ["", "## Observations", "", *edge]
    lines += ["", "No P_t in the scanned range reproduces the reference optimum."]
    path = run.out_dir / "deviation_report.md"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _describe(res: GridResult) -> str:
    b = res.best
    kind = "feasible argmax" if res.feasible else "least-violating point (nothing feasible)"
    return (
        f"Obtained {kind}: rho={b.tx.rho:g}, theta_g={b.tx.theta_g:g}, beta_g={b.tx.beta_g:g}, N_g={b.tx.N_g}; "
        f"E{{Rs_u}}={b.mean_Rs_u:.4g}, E{{Rs_g}}={b.mean_Rs_g:.4g}, P_o_u={b.P_o_u:.3g}, P_o_g={b.P_o_g:.3g}, "
        f"E{{E_u}}={b.mean_E_u:.4g}, E{{E_g}}={b.mean_E_g:.4g}; {res.n_feasible}/{res.n_points} points feasible."
    )


def _edge_note(run: RunConfig, out: OptimizeOutcome) -> list[str]:
    notes = []
    thetas = sorted(run.grid.theta_g)
    results = [out.result] + [r for _, r, _ in out.scan]
    feas = [r for r in results if r.feasible]
    if feas:
        top = {r.best.tx.theta_g for r in feas}
        notes.append(f"- argmax theta_g over all runs: {sorted(top)} (grid {thetas[0]:g}..{thetas[-1]:g}).")
        ratio = [r.best.mean_Rs_u / r.best.mean_Rs_g for r in feas if r.best.mean_Rs_g > 0]
        if ratio:
            notes.append(
                f"- E{{Rs_u}}/E{{Rs_g}} at the argmax ranges {min(ratio):.3g}..{max(ratio):.3g}; "
                "the min() objective is set by the far user."
            )
    infeas = [P for P, r, _ in out.scan if not r.feasible]
    if infeas:
        notes.append(f"- no feasible point at P_t = {', '.join(f'{p:.3g}' for p in infeas)} W.")
    return notes


# -- validate ------------------------------------------------------------------------


def run_validate(run: RunConfig) -> list[CheckResult]:
    results = run_checks(run.system, run.pinned)
    rows = [(r.name, r.passed, r.detail) for r in results]
    write_csv(run.out_dir / "validate.csv", ("suite", "passed", "detail"), rows, _meta(run))
    return results


# -- outage check --------------------------------------------------------------------

OUTAGE_HEADER = (
    "disc", "threshold", "alpha", "order", "closed_form", "oracle", "abs_diff",
    "sigma", "within_3sigma", "frobenius_oracle", "samples",
)


def outage_check_rows(run: RunConfig) -> list[tuple]:
    cfg, oc = run.system, run.outage_check
    thetas = np.logspace(math.log10(oc.v_min), math.log10(oc.v_max), oc.points)
    rows = []
    for d, disc in enumerate("UG"):
        for k, v in enumerate(thetas):
            if disc == "U":
                closed = float(np.clip(disc_u_sum(v, cfg.r_u, cfg.alpha, cfg.L), 0.0, 1.0))
                order = cfg.L
            else:
                closed = float(np.clip(disc_g_sum(v, cfg.r_g1, cfg.r_g2, cfg.alpha, cfg.M), 0.0, 1.0))
                order = cfg.M
            seed = np.random.SeedSequence([run.master_seed, 7, d, k])
            fseed = np.random.SeedSequence([run.master_seed, 8, d, k])
            oracle = mc_probability(float(v), disc, cfg, oc.samples, seed)
            frob = mc_probability(float(v), disc, cfg, oc.samples, fseed, gain="frobenius")
            sigma = math.sqrt(oracle * (1.0 - oracle) / oc.samples)
            diff = abs(closed - oracle)
            rows.append((disc, float(v), cfg.alpha, order, closed, oracle, diff, sigma, diff <= 3 * sigma, frob, oc.samples))
    return rows


def run_outage_check(run: RunConfig) -> Path:
    return write_csv(run.out_dir / "outage_check.csv", OUTAGE_HEADER, outage_check_rows(run), _meta(run))
