"""Exhaustive grid search for the max-min average secrecy rate.

All grid points share the same channel realizations (trial ``t`` always uses
``trial_seed(master_seed, t)``), so channel-dependent work is done once per
trial and the rate expressions are evaluated for the whole grid in batches.
Trials are processed in fixed-size blocks whose partial sums are reduced in
block order, which keeps results bit-identical for any number of workers.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .channel import ChannelSet, draw_channel_set, trial_seed
from .config import ConstraintSpec, SystemConfig, TxParams, validate
from .energy import EnergyTraces, cp_energy, energy_traces, split_energy
from .metrics import LN2, an_leakage_at_eve, average_noise_variance, logdet_hpd, secrecy_rates, split_profile
from .ofdm import OfdmMatrixSet, build
from .outage import outage_g_array, outage_u_array, threshold_arrays
from .precoder import AnPrecoder, DegenerateChannel, compute_precoder

log = logging.getLogger(__name__)

MAX_REDRAWS = 10
BLOCK = 8  # trials per reduction block; fixed so the summation order never changes

FRACTIONS = tuple(round(0.05 * k, 2) for k in range(1, 20))


class TrialExhausted(RuntimeError):
    """A trial kept producing degenerate channels."""


def draw_trial(config: SystemConfig, master_seed: int, trial: int, mats: Optional[OfdmMatrixSet] = None):
    """Channels and AN precoder for one trial, redrawing degenerate realizations."""
    mats = mats or build(config)
    for redraw in range(MAX_REDRAWS + 1):
        ch = draw_channel_set(trial_seed(master_seed, trial, redraw), config)
        try:
            return ch, compute_precoder(ch.Ht, ch.Gt, mats.Phi)
        except DegenerateChannel:
            log.warning("trial %d: degenerate sum channel, redraw %d", trial, redraw + 1)
    raise TrialExhausted(f"trial {trial}: {MAX_REDRAWS} redraws all degenerate")


@dataclass
class GridSpec:
    """Value lists per decision variable; a one-element list pins that variable."""

    rho: Sequence[float] = FRACTIONS
    theta_g: Sequence[float] = tuple(t for t in FRACTIONS if t > 0.5)
    beta_u: Sequence[float] = (0.5,)
    N_u: Sequence[int] = (16,)
    beta_g: Sequence[float] = FRACTIONS
    N_g: Optional[Sequence[int]] = None  # None -> 0, 4, ..., N_s
    N_cp: Sequence[Optional[int]] = (None,)  # None -> config.N_cp

    AXES = ("rho", "theta_g", "beta_u", "N_u", "beta_g", "N_g")

    @classmethod
    def single(cls, tx: TxParams) -> "GridSpec":
        return cls(
            rho=(tx.rho,), theta_g=(tx.theta_g,), beta_u=(tx.beta_u,), N_u=(tx.N_u,),
            beta_g=(tx.beta_g,), N_g=(tx.N_g,), N_cp=(tx.N_cp_override,),
        )

    def axes(self, config: SystemConfig) -> dict[str, np.ndarray]:
        N_g = self.N_g if self.N_g is not None else range(0, config.N_s + 1, 4)
        out = {
            "rho": np.asarray(self.rho, dtype=float),
            "theta_g": np.asarray(self.theta_g, dtype=float),
            "beta_u": np.asarray(self.beta_u, dtype=float),
            "N_u": np.asarray(self.N_u, dtype=int),
            "beta_g": np.asarray(self.beta_g, dtype=float),
            "N_g": np.asarray(list(N_g), dtype=int),
        }
        for k, v in out.items():
            if v.ndim != 1 or v.size == 0:
                raise ValueError(f"grid axis {k} is empty")
        return out

    @property
    def size(self) -> int:
        n_g = 1 if self.N_g is None else len(self.N_g)
        return math.prod(len(getattr(self, a)) for a in self.AXES[:-1]) * n_g * len(self.N_cp)


@dataclass(frozen=True)
class PointMetrics:
    tx: TxParams
    mean_Rs_u: float
    mean_Rs_g: float
    mean_E_u: float
    mean_E_g: float
    P_o_u: float
    P_o_g: float
    mean_Rs_sum_bound: float
    feasible: bool
    trials: int

    @property
    def objective(self) -> float:
        return float(np.minimum(self.mean_Rs_u, self.mean_Rs_g))  # NaN if pruned


@dataclass
class GridResult:
    best: PointMetrics
    feasible: bool
    all_points: list[PointMetrics] = field(default_factory=list)
    n_points: int = 0
    n_feasible: int = 0
    trials: int = 0
    master_seed: int = 0
    wall_time: float = 0.0


@dataclass(frozen=True)
class TrialData:
    """Channel-dependent quantities of one trial that the grid kernels need."""

    h2: np.ndarray
    g2: np.ndarray
    v2: np.ndarray
    DDh: np.ndarray
    tr_u: EnergyTraces
    tr_g: EnergyTraces
    c_u: float
    c_g: float
    c_e: float


def trial_data(config: SystemConfig, ch: ChannelSet, pre: AnPrecoder, mats: OfdmMatrixSet) -> TrialData:
    D = an_leakage_at_eve(ch, pre, mats)
    return TrialData(
        h2=np.abs(ch.h) ** 2,
        g2=np.abs(ch.g) ** 2,
        v2=np.abs(ch.v) ** 2,
        DDh=D @ D.conj().T,
        tr_u=energy_traces(ch.Ht, pre.K, mats),
        tr_g=energy_traces(ch.Gt, pre.K, mats),
        c_u=ch.c_u,
        c_g=ch.c_g,
        c_e=ch.c_e,
    )


# -- per-trial kernels --------------------------------------------------------


def _energies(config: SystemConfig, ax, td: TrialData):
    rho = ax["rho"][:, None, None]
    E_u = cp_energy(config, td.c_u, rho, td.tr_u) + split_energy(
        config, td.c_u, rho, ax["beta_u"][None, :, None], ax["N_u"][None, None, :], td.tr_u
    )
    E_g = cp_energy(config, td.c_g, rho, td.tr_g) + split_energy(
        config, td.c_g, rho, ax["beta_g"][None, :, None], ax["N_g"][None, None, :], td.tr_g
    )
    return E_u, E_g


def _circulant(F: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """``F diag(lam) F^*`` for a batch of diagonals ``lam[..., N_s]``."""
    C = (F * lam[..., None, :]) @ F.conj().T
    return 0.5 * (C + np.swapaxes(C, -1, -2).conj())


def _profiles(N_s: int, betas, ns) -> np.ndarray:
    return np.array([[split_profile(N_s, int(n), float(b)) for n in ns] for b in betas])


def _rates_u(config, F, ax, td: TrialData):
    N_t, N_s = config.N_t, config.N_s
    rho, th_u = ax["rho"][:, None], 1.0 - ax["theta_g"][None, :]
    a = (rho * th_u * config.P_t / N_t).ravel()
    prof = _profiles(N_s, ax["beta_u"], ax["N_u"])  # (nbu, nnu, N_s)
    lam = config.sigma2 / td.c_u**2 * prof
    base = _circulant(F, lam)
    ld0 = np.log(lam).sum(axis=-1)
    diag = np.zeros((a.size, N_s, N_s))
    diag[:, np.arange(N_s), np.arange(N_s)] = a[:, None] * td.h2
    ld = logdet_hpd(base[None, :, :] + diag[:, None, None])  # (nr*nt, nbu, nnu)
    R = (ld - ld0) / (N_t * LN2)
    return R.reshape(rho.shape[0], th_u.shape[1], *ld0.shape)


def _rates_g(config, F, ax, td: TrialData, need):
    N_t, N_s = config.N_t, config.N_s
    nr, nt = ax["rho"].size, ax["theta_g"].size
    nbg, nng = ax["beta_g"].size, ax["N_g"].size
    prof = _profiles(N_s, ax["beta_g"], ax["N_g"]).reshape(nbg * nng, N_s)
    noise = config.sigma2 / td.c_g**2
    X = _circulant(F, prof)
    Y = _circulant(F, prof * td.g2)
    G2 = np.diag(td.g2)
    log_prof = np.log(prof).sum(axis=-1)
    R = np.full((nr, nt, nbg * nng), np.nan)
    for i, j in itertools.product(range(nr), range(nt)):
        sel = np.flatnonzero(need[i, j].ravel())
        if sel.size == 0:
            continue
        rho, th_g = ax["rho"][i], ax["theta_g"][j]
        b = rho * (1.0 - th_g) * config.P_t / N_t  # u's signal seen as interference
        a = rho * th_g * config.P_t / N_t
        M = noise * X[sel] + b * Y[sel] + a * G2
        ld0 = np.log(noise + b * td.g2).sum() + log_prof[sel]
        R[i, j, sel] = (logdet_hpd(M) - ld0) / (N_t * LN2)
    return R.reshape(nr, nt, nbg, nng)


def _rates_eve(config, ax, td: TrialData):
    N_t, N_s, P = config.N_t, config.N_s, config.P_t
    rho, th_g = ax["rho"], ax["theta_g"]
    nr, nt = rho.size, th_g.size
    Q = ((1.0 - rho) * P / config.N_cp)[:, None, None] * td.DDh + (config.sigma2 / td.c_e**2) * np.eye(N_s)
    Q = 0.5 * (Q + np.swapaxes(Q, -1, -2).conj())
    # signal scalings: rho (everything), rho*theta_g, rho*theta_u, 0 (AN + noise only)
    s = np.concatenate(
        [rho[:, None], rho[:, None] * th_g[None, :], rho[:, None] * (1.0 - th_g)[None, :], np.zeros((nr, 1))],
        axis=1,
    ) * (P / N_t)
    M = Q[:, None] + s[:, :, None, None] * np.diag(td.v2)
    ld = logdet_hpd(M)
    full = ld[:, :1]
    R_E_u = (full - ld[:, 1 : 1 + nt]) / (N_t * LN2)
    R_E_g = (full - ld[:, 1 + nt : 1 + 2 * nt]) / (N_t * LN2)
    R_E = np.broadcast_to((full - ld[:, -1:]) / (N_t * LN2), (nr, nt))
    return R_E_u, R_E_g, R_E


def _secrecy(config, F, ax, td, need_g):
    R_u = _rates_u(config, F, ax, td)[:, :, :, :, None, None]
    R_g = _rates_g(config, F, ax, td, need_g)[:, :, None, None, :, :]
    R_E_u, R_E_g, R_E = (x[:, :, None, None, None, None] for x in _rates_eve(config, ax, td))
    with np.errstate(invalid="ignore"):
        return secrecy_rates(R_u, R_g, R_E_u, R_E_g, R_E)


# -- block workers (module level so they pickle) -------------------------------


def _block_pass1(args):
    config, master_seed, trials, ax = args
    mats = build(config)
    data, E_u, E_g = [], 0.0, 0.0
    for t in trials:
        td = trial_data(config, *draw_trial(config, master_seed, t, mats), mats)
        eu, eg = _energies(config, ax, td)
        E_u, E_g = E_u + eu, E_g + eg
        data.append(td)
    return data, E_u, E_g


def _block_pass2(args):
    config, data, ax, need_g = args
    F = build(config).F
    acc = None
    for td in data:
        out = _secrecy(config, F, ax, td, need_g)
        acc = out if acc is None else tuple(s + o for s, o in zip(acc, out))
    return acc


def _run_blocks(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, jobs))
    return [fn(j) for j in jobs]


# -- grid evaluation -----------------------------------------------------------


@dataclass
class GridEvaluation:
    """Ensemble means over one product grid at a fixed CP length.

    Arrays are indexed ``[rho, theta_g, beta_u, N_u, beta_g, N_g]`` (energies
    and outages on their own sub-axes). Secrecy means are NaN where the
    evaluation was pruned as infeasible.
    """

    config: SystemConfig
    axes: dict
    n_cp_override: Optional[int]
    trials: int
    mean_Rs_u: np.ndarray
    mean_Rs_g: np.ndarray
    mean_bound: np.ndarray
    mean_E_u: np.ndarray  # (rho, beta_u, N_u)
    mean_E_g: np.ndarray  # (rho, beta_g, N_g)
    P_o_u: np.ndarray  # (rho, theta_g, beta_u, N_u)
    P_o_g: np.ndarray  # (rho, theta_g, beta_g, N_g)
    feasible: np.ndarray  # full 6-D

    @property
    def shape(self) -> tuple:
        return tuple(self.axes[a].size for a in GridSpec.AXES)

    def tx_at(self, idx) -> TxParams:
        i, j, k, l, m, n = idx
        ax = self.axes
        return TxParams.from_theta_g(
            float(ax["theta_g"][j]),
            rho=float(ax["rho"][i]),
            beta_u=float(ax["beta_u"][k]),
            N_u=int(ax["N_u"][l]),
            beta_g=float(ax["beta_g"][m]),
            N_g=int(ax["N_g"][n]),
            N_cp_override=self.n_cp_override,
        )

    def point(self, idx) -> PointMetrics:
        i, j, k, l, m, n = idx
        return PointMetrics(
            tx=self.tx_at(idx),
            mean_Rs_u=float(self.mean_Rs_u[idx]),
            mean_Rs_g=float(self.mean_Rs_g[idx]),
            mean_E_u=float(self.mean_E_u[i, k, l]),
            mean_E_g=float(self.mean_E_g[i, m, n]),
            P_o_u=float(self.P_o_u[i, j, k, l]),
            P_o_g=float(self.P_o_g[i, j, m, n]),
            mean_Rs_sum_bound=float(self.mean_bound[idx]),
            feasible=bool(self.feasible[idx]),
            trials=self.trials,
        )

    def violation(self, constraints: ConstraintSpec) -> np.ndarray:
        """Aggregate constraint violation (relative for energy, absolute for outage)."""
        E_u = self.mean_E_u[:, None, :, :, None, None]
        E_g = self.mean_E_g[:, None, None, None, :, :]
        P_u = self.P_o_u[:, :, :, :, None, None]
        P_g = self.P_o_g[:, :, None, None, :, :]
        v = np.zeros(self.shape)
        for mean, mu in ((E_u, constraints.mu_u), (E_g, constraints.mu_g)):
            if mu > 0:
                v = v + np.maximum(mu - mean, 0.0) / mu
        v = v + np.maximum(P_u - constraints.eps_u, 0.0) + np.maximum(P_g - constraints.eps_g, 0.0)
        return v


def _check_axes(config: SystemConfig, ax) -> None:
    probe = TxParams.from_theta_g(0.75, rho=0.5)
    for name in ("rho", "beta_u", "beta_g", "theta_g"):
        if np.any((ax[name] < 0) | (ax[name] > 1)):
            raise ValueError(f"grid values of {name} must lie in [0, 1]")
    if np.any(ax["theta_g"] <= 0.5):
        raise ValueError("theta_g grid must satisfy theta_g > 0.5 (theta_u < theta_g)")
    for n_name in ("N_u", "N_g"):
        if np.any((ax[n_name] < 0) | (ax[n_name] > config.N_s)):
            raise ValueError(f"grid values of {n_name} must lie in 0..{config.N_s}")
    for b_name, n_name in (("beta_u", "N_u"), ("beta_g", "N_g")):
        if np.any(ax[b_name] <= 0) and np.any(ax[n_name] > 0):
            raise ValueError(f"{b_name} = 0 combined with {n_name} > 0 divides by zero")
    report = validate(config, probe)
    if not report.ok:
        raise ValueError(f"invalid configuration: {report.violations}")


def evaluate_grid(
    config: SystemConfig,
    grid: GridSpec,
    constraints: Optional[ConstraintSpec] = None,
    n_trials: int = 500,
    master_seed: int = 0,
    workers: int = 1,
    n_cp: Optional[int] = None,
    prune: bool = False,
) -> GridEvaluation:
    """Ensemble-average every metric over the product grid at one CP length.

    With ``prune=True`` the expensive far-user rate is skipped wherever the
    channel-independent outage constraints or the (already averaged) energy
    constraints fail; those points keep NaN secrecy means.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    constraints = constraints or ConstraintSpec()
    cfg = config.with_cp(n_cp)
    ax = grid.axes(cfg)
    _check_axes(cfg, ax)
    blocks = [range(s, min(s + BLOCK, n_trials)) for s in range(0, n_trials, BLOCK)]

    parts = _run_blocks(_block_pass1, [(cfg, master_seed, b, ax) for b in blocks], workers)
    mean_E_u = sum(p[1] for p in parts) / n_trials
    mean_E_g = sum(p[2] for p in parts) / n_trials

    rho, th_g = ax["rho"][:, None, None, None], ax["theta_g"][None, :, None, None]
    sau = np.array([[average_noise_variance(cfg.sigma2, cfg.N_s, int(n), float(b)) for n in ax["N_u"]] for b in ax["beta_u"]])
    sag = np.array([[average_noise_variance(cfg.sigma2, cfg.N_s, int(n), float(b)) for n in ax["N_g"]] for b in ax["beta_g"]])
    v_gu, v_uu, _ = threshold_arrays(cfg, rho, 1.0 - th_g, th_g, sau[None, None], sau[None, None])
    P_o_u = outage_u_array(cfg, v_gu, v_uu)
    _, _, v_gg = threshold_arrays(cfg, rho, 1.0 - th_g, th_g, sag[None, None], sag[None, None])
    P_o_g = outage_g_array(cfg, v_gg)

    ok_u = (P_o_u <= constraints.eps_u) & (mean_E_u[:, None] >= constraints.mu_u)
    ok_g = (P_o_g <= constraints.eps_g) & (mean_E_g[:, None] >= constraints.mu_g)
    feasible = ok_u[:, :, :, :, None, None] & ok_g[:, :, None, None, :, :]
    if prune:
        need_g = feasible.any(axis=(2, 3))
    else:
        need_g = np.ones(ok_g.shape, dtype=bool)

    jobs = [(cfg, p[0], ax, need_g) for p in parts]
    sums = _run_blocks(_block_pass2, jobs, workers)
    Rs_u, Rs_g, bound = (sum(s[k] for s in sums) / n_trials for k in range(3))
    return GridEvaluation(
        config=cfg, axes=ax, n_cp_override=n_cp, trials=n_trials,
        mean_Rs_u=Rs_u, mean_Rs_g=Rs_g, mean_bound=bound,
        mean_E_u=mean_E_u, mean_E_g=mean_E_g, P_o_u=P_o_u, P_o_g=P_o_g, feasible=feasible,
    )


def evaluate_point(
    config: SystemConfig,
    tx: TxParams,
    constraints: Optional[ConstraintSpec] = None,
    n_trials: int = 500,
    master_seed: int = 0,
    workers: int = 1,
) -> PointMetrics:
    ev = evaluate_grid(
        config, GridSpec.single(tx), constraints, n_trials, master_seed, workers, n_cp=tx.N_cp_override
    )
    return ev.point((0,) * 6)


def _select(points: list[PointMetrics]) -> PointMetrics:
    """Largest objective, then largest mean_E_g, then smallest tx key."""
    return min(points, key=lambda p: (-p.objective, -p.mean_E_g, p.tx.key()))


def grid_search(
    config: SystemConfig,
    grid: GridSpec,
    constraints: Optional[ConstraintSpec] = None,
    n_trials: int = 500,
    master_seed: int = 0,
    workers: int = 1,
    keep_points: bool = False,
    prune: bool = True,
) -> GridResult:
    """Feasible argmax of ``min(E{R_s,u}, E{R_s,g})`` over every grid point.

    If nothing is feasible the result has ``feasible=False`` and ``best`` is
    the point with the smallest aggregate constraint violation.
    """
    constraints = constraints or ConstraintSpec()
    start = time.perf_counter()
    evals = [
        evaluate_grid(config, grid, constraints, n_trials, master_seed, workers, n_cp=cp, prune=prune)
        for cp in grid.N_cp
    ]
    candidates, fallback, n_points, n_feasible = [], [], 0, 0
    all_points: list[PointMetrics] = []
    for ev in evals:
        n_points += ev.feasible.size
        n_feasible += int(ev.feasible.sum())
        if ev.feasible.any():
            obj = np.where(ev.feasible, np.minimum(ev.mean_Rs_u, ev.mean_Rs_g), -np.inf)
            top = obj.max()
            candidates += [ev.point(tuple(i)) for i in np.argwhere(obj == top)]
        else:
            viol = ev.violation(constraints)
            fallback += [(float(viol.min()), ev.point(tuple(i))) for i in np.argwhere(viol == viol.min())]
        if keep_points:
            all_points += [ev.point(idx) for idx in np.ndindex(ev.shape)]
    if candidates:
        top = max(p.objective for p in candidates)
        best = _select([p for p in candidates if p.objective == top])
    else:
        best = min(fallback, key=lambda vp: (vp[0], vp[1].tx.key()))[1]
        if prune:  # pruned points carry no rates; fill them in for the report
            best = evaluate_point(config, best.tx, constraints, n_trials, master_seed, workers)
    return GridResult(
        best=best,
        feasible=bool(candidates),
        all_points=all_points,
        n_points=n_points,
        n_feasible=n_feasible,
        trials=n_trials,
        master_seed=master_seed,
        wall_time=time.perf_counter() - start,
    )
