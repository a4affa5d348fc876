"""Self-check suites run by ``--mode validate``.

Each check returns ``(passed, detail)``. They are small, seeded versions of
the module invariants so a shipped configuration can be sanity-checked
without running the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import SystemConfig, TxParams, validate
from .energy import harvested_energy
from .metrics import noise_profiles, rate_report, rate_u
from .ofdm import build
from .optimizer import draw_trial
from .outage import disc_g_sum, disc_u_sum, quadrature_overshoot


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _config(config: SystemConfig, tx: TxParams):
    rep = validate(config, tx)
    return rep.ok, "ok" if rep.ok else "; ".join(rep.violations)


def _ofdm(config: SystemConfig, tx: TxParams):
    m = build(config)
    err_f = np.abs(m.F @ m.F_inv - np.eye(m.N_s)).max()
    err_cp = np.abs(m.Phi @ m.E_cp - np.eye(m.N_s)).max()
    return err_f < 1e-12 and err_cp == 0.0, f"|FF*-I|={err_f:.2e} |Phi E_cp - I|={err_cp:.1e}"


def _diagonal(config: SystemConfig, tx: TxParams, seed: int = 0, n: int = 20):
    m = build(config)
    worst = 0.0
    for t in range(n):
        ch, _ = draw_trial(config, seed, t, m)
        for Xt in (ch.Ht, ch.Gt, ch.Vt):
            X = m.F @ m.Phi @ Xt @ m.E_cp @ m.F_inv
            worst = max(worst, np.abs(X - np.diag(np.diag(X))).max())
    return worst < 1e-10, f"max off-diagonal {worst:.2e}"


def _null_space(config: SystemConfig, tx: TxParams, seed: int = 0, n: int = 20):
    m = build(config)
    rel, orth = 0.0, 0.0
    for t in range(n):
        _, pre = draw_trial(config, seed, t, m)
        rel = max(rel, pre.relative_residual)
        orth = max(orth, np.abs(pre.K.conj().T @ pre.K - np.eye(pre.K.shape[1])).max())
    return rel < 1e-9 and orth < 1e-10, f"relative residual {rel:.2e}, |K*K-I| {orth:.2e}"


def _sum_bound(config: SystemConfig, tx: TxParams, seed: int = 0, n: int = 50):
    m = build(config)
    worst = -np.inf
    for t in range(n):
        ch, pre = draw_trial(config, seed, t, m)
        r = rate_report(config, tx, ch, pre, mats=m)
        worst = max(worst, r.Rs_u + r.Rs_g - r.Rs_sum_bound)
    return worst <= 1e-12, f"max(Rs_u + Rs_g - bound) = {worst:.2e}"


def _per_bin(config: SystemConfig, tx: TxParams, seed: int = 0, n: int = 20):
    m = build(config)
    tx0 = tx.replace(N_u=0)
    worst = 0.0
    for t in range(n):
        ch, _ = draw_trial(config, seed, t, m)
        got = rate_u(config, tx0, ch, noise_profiles(config, tx0, ch), m)
        snr = tx0.rho * tx0.theta_u * config.P_t * ch.c_u**2 * np.abs(ch.h) ** 2 / (config.N_t * config.sigma2)
        ref = np.sum(np.log2(1.0 + snr)) / config.N_t
        worst = max(worst, abs(got - ref) / max(ref, 1e-300))
    return worst < 1e-9, f"max relative deviation {worst:.2e}"


def _outage(config: SystemConfig, tx: TxParams):
    v = np.logspace(-6, 3, 200)
    pu = disc_u_sum(v, config.r_u, config.alpha, config.L)
    pg = disc_g_sum(v, config.r_g1, config.r_g2, config.alpha, config.M)
    mono = bool(np.all(np.diff(pu) >= 0) and np.all(np.diff(pg) >= 0))
    top = 1.0 + max(quadrature_overshoot(config.L), quadrature_overshoot(config.M)) + 1e-12
    bounded = bool(pu.min() >= -1e-9 and pg.min() >= -1e-9 and pu.max() <= top and pg.max() <= top)
    return mono and bounded, f"monotone={mono} max_u={pu.max():.6f} max_g={pg.max():.6f}"


def _energy(config: SystemConfig, tx: TxParams, seed: int = 0):
    m = build(config)
    ch, pre = draw_trial(config, seed, 0, m)
    base = harvested_energy(config, tx, ch, pre, m)
    doubled = harvested_energy(config.replace(P_t=2 * config.P_t, eta=config.eta / 2), tx, ch, pre, m)
    ok = np.isclose(doubled.E_u, base.E_u, rtol=1e-12) and np.isclose(doubled.E_g, base.E_g, rtol=1e-12)
    ok = ok and base.E_u >= 0 and base.E_g >= 0
    return bool(ok), f"E_u={base.E_u:.4g} E_g={base.E_g:.4g}"


SUITES: dict[str, Callable] = {
    "config": _config,
    "ofdm_matrices": _ofdm,
    "channel_diagonal": _diagonal,
    "an_null_space": _null_space,
    "secrecy_sum_bound": _sum_bound,
    "rate_u_per_bin": _per_bin,
    "outage_quadrature": _outage,
    "energy_scaling": _energy,
}


def run_checks(config: SystemConfig, tx: TxParams) -> list[CheckResult]:
    out = []
    for name, fn in SUITES.items():
        try:
            passed, detail = fn(config, tx)
        except Exception as exc:  # a crashing suite is a failed suite
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(passed), detail))
    return out
