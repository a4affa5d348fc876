"""Acceptance criteria, one ``test_c<N>_*`` group per criterion.

The terminal summary prints one PASS/FAIL line per criterion (see conftest).
Criterion 6 runs the full 500-trial grid search and takes several minutes.
"""

import configparser
import filecmp
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import spearmanr

from nomasec.channel import draw_channel_set, trial_seed
from nomasec.config import SystemConfig, TxParams
from nomasec.harness import RunConfig, SweepSpec, load_run_config, outage_check_rows, run_optimize, sweep_points
from nomasec.metrics import noise_profiles, rate_report, rate_u
from nomasec.optimizer import draw_trial
from nomasec.outage import disc_g_sum, disc_u_sum

ROOT = Path(__file__).resolve().parents[1]
DEFAULT = ROOT / "configs" / "default.ini"
RESULTS = ROOT / "results" / "acceptance"


# 1. null-space cancellation


def test_c1_null_space(cfg, mats, record_property):
    rel = orth = 0.0
    for s in range(1000):
        _, pre = draw_trial(cfg, 100, s, mats)
        rel = max(rel, pre.relative_residual)
        orth = max(orth, np.abs(pre.K.conj().T @ pre.K - np.eye(cfg.N_cp)).max())
    record_property("detail", f"max relative residual {rel:.2e}, max |K*K - I| {orth:.2e}")
    assert rel < 1e-9 and orth < 1e-10


# 2. sum bound over 10^4 trials


def test_c2_sum_bound(cfg, mats, record_property):
    rng = np.random.default_rng(2)
    worst = -np.inf
    for t in range(10_000):
        tx = TxParams.from_theta_g(
            float(rng.uniform(0.55, 0.95)), rho=float(rng.uniform(0.05, 0.95)),
            beta_g=float(rng.uniform(0.05, 1.0)), N_g=int(rng.integers(0, cfg.N_s + 1)),
        )
        ch, pre = draw_trial(cfg, 200, t, mats)
        r = rate_report(cfg, tx, ch, pre, mats=mats)
        worst = max(worst, r.Rs_u + r.Rs_g - r.Rs_sum_bound)
    record_property("detail", f"max(Rs_u + Rs_g - bound) = {worst:.2e} over 10^4 trials")
    assert worst <= 1e-12


# 3. closed form vs Monte Carlo oracle


@pytest.fixture(scope="module")
def outage_rows(cfg):
    run = load_run_config(DEFAULT, {"seed": 0})
    return outage_check_rows(run)


def test_c3_max_abs_difference(outage_rows, record_property):
    worst = max(r[6] for r in outage_rows)
    record_property("detail", f"max |closed - oracle| = {worst:.2e} over {len(outage_rows)} points (10^6 samples)")
    assert worst < 1e-2


def test_c3_within_3_sigma(outage_rows, record_property):
    bad = [(r[0], r[1]) for r in outage_rows if not r[8]]
    record_property(
        "detail",
        f"{len(bad)}/{len(outage_rows)} points outside 3 sigma: "
        + ", ".join(f"{d}@{v:.3g}" for d, v in bad),
    )
    assert not bad


# 4. quadrature convergence


def test_c4_quadrature_convergence(cfg, record_property):
    v = np.logspace(-4, 2, 400)
    du = np.abs(disc_u_sum(v, 8, 2, 64) - disc_u_sum(v, 8, 2, 32)).max()
    dg = np.abs(disc_g_sum(v, 10, 14, 2, 64) - disc_g_sum(v, 10, 14, 2, 32)).max()
    record_property("detail", f"max |P(64) - P(32)|: U {du:.2e}, G {dg:.2e}")
    assert du < 1e-3 and dg < 1e-3


# 5. trends at 500 trials/point


@pytest.fixture(scope="module")
def sweeps(cfg):
    out = {}
    for name in ("rho_theta_g", "beta_g_rho", "N_g_rho"):
        run = RunConfig(system=cfg, mode="sweep", sweep=SweepSpec.preset(name), n_trials=500)
        curves = {}
        for s, c, p in sweep_points(run):
            curves.setdefault(c, []).append((s, p))
        out[name] = curves
    return out


def _along_sweep(curves, field):
    """Spearman coefficient of ``field`` vs the swept value, per curve."""
    return {c: spearmanr([s for s, _ in pts], [getattr(p, field) for _, p in pts])[0] for c, pts in curves.items()}


def _across_curves(curves, field):
    """Spearman coefficient of ``field`` vs the curve value, per swept value."""
    cs = sorted(curves)
    n = len(curves[cs[0]])
    return {curves[cs[0]][i][0]: spearmanr(cs, [getattr(curves[c][i][1], field) for c in cs])[0] for i in range(n)}


def _fmt(d):
    return ", ".join(f"{k:g}:{v:.2f}" for k, v in d.items())


def test_c5a_rate_u_trends(sweeps, record_property):
    up = _along_sweep(sweeps["rho_theta_g"], "mean_Rs_u")
    down = _across_curves(sweeps["rho_theta_g"], "mean_Rs_u")
    bad = {k: v for k, v in down.items() if not v < -0.95}
    record_property("detail", f"vs rho per theta_g [{_fmt(up)}]; vs theta_g failing at rho [{_fmt(bad)}]")
    assert min(up.values()) > 0.95 and max(down.values()) < -0.95


def test_c5b_rate_g_trends(sweeps, record_property):
    down = _along_sweep(sweeps["rho_theta_g"], "mean_Rs_g")
    up = _across_curves(sweeps["rho_theta_g"], "mean_Rs_g")
    bad = {k: v for k, v in up.items() if not v > 0.95}
    record_property("detail", f"vs rho worst {max(down.values()):.2f}; vs theta_g failing at rho [{_fmt(bad)}]")
    assert max(down.values()) < -0.95 and min(up.values()) > 0.95


def test_c5c_rate_g_vs_beta(sweeps, record_property):
    up = _along_sweep(sweeps["beta_g_rho"], "mean_Rs_g")
    record_property("detail", f"vs beta_g per rho [{_fmt(up)}]")
    assert min(up.values()) > 0.95


def test_c5d_energy_trends(sweeps, record_property):
    curves = sweeps["N_g_rho"]
    up = _along_sweep(curves, "mean_E_g")
    worse = [(s, c) for c, pts in curves.items() for s, p in pts if not p.mean_E_u > p.mean_E_g]
    record_property(
        "detail",
        f"E_g vs N_g worst {min(up.values()):.2f}; E_u <= E_g at (N_g, rho) = {worse}",
    )
    assert min(up.values()) > 0.95 and not worse


def test_c5e_certain_outage_at_top_theta(sweeps, record_property):
    pts = sweeps["rho_theta_g"][0.95]
    p = [pt.P_o_u for _, pt in pts]
    record_property("detail", f"P_o_u at theta_g=0.95 over rho: min {min(p):.3g}")
    assert all(x == 1.0 for x in p)


# 6. optimum reproduction (or documented deviation)


@pytest.fixture(scope="module")
def optimize_outcome():
    run = load_run_config(DEFAULT, {"mode": "optimize", "out": str(RESULTS / "optimize")})
    return run, run_optimize(run)


def _found(out):
    b = out.result.best
    return (
        f"argmax rho={b.tx.rho:g} theta_g={b.tx.theta_g:g} beta_g={b.tx.beta_g:g} N_g={b.tx.N_g}, "
        f"Rs_u={b.mean_Rs_u:.3g} Rs_g={b.mean_Rs_g:.3g} ({b.trials} trials)"
    )


def test_c6_reproduces_reference_optimum(optimize_outcome, record_property):
    _, out = optimize_outcome
    where = "not reproduced at any scanned P_t" if out.reproduced_at is None else f"reproduced at P_t={out.reproduced_at:.4g}"
    record_property("detail", f"{where}; calibrated-P_t {_found(out)}")
    assert out.reproduced_at is not None


def test_c6_deviation_report_when_not_reproduced(optimize_outcome, record_property):
    run, out = optimize_outcome
    if out.reproduced_at is not None:
        record_property("detail", "not needed")
        return
    assert out.report is not None and out.report.exists()
    record_property("detail", f"written to {out.report.relative_to(ROOT)}")
    text = out.report.read_text()
    assert "Failed sub-checks" in text and "P_t scan" in text
    assert len(out.scan) == run.reference.scan_points - 1


# 7. determinism across runs and worker counts


def _ini(tmp: Path) -> Path:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    cp.read(DEFAULT)
    cp["grid"].update({"rho": "0.5,0.75", "theta_g": "0.75,0.9", "beta_g": "0.5,0.85", "N_g": "16,32"})
    cp["outage_check"].update({"points": "6", "samples": "100000"})
    cp.remove_section("reference")
    cp["sweep"] = {"preset": "beta_g_rho"}
    path = tmp / "det.ini"
    with open(path, "w") as fh:
        cp.write(fh)
    return path


@pytest.mark.parametrize("mode", ["validate", "sweep", "optimize", "outage-check"])
def test_c7_determinism(mode, tmp_path, record_property):
    ini = _ini(tmp_path)
    dirs = []
    for k, workers in enumerate((1, 2, 1)):
        out = tmp_path / f"run{k}"
        cmd = [sys.executable, "-m", "nomasec", "--config", str(ini), "--mode", mode, "--trials", "16",
               "--seed", "77", "--workers", str(workers), "--out", str(out)]
        cp = subprocess.run(cmd, capture_output=True, text=True)
        assert cp.returncode == 0, cp.stderr
        dirs.append(out)
    files = sorted(p.name for p in dirs[0].glob("*.csv"))
    assert files
    match, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], files, shallow=False)
    m2, mm2, e2 = filecmp.cmpfiles(dirs[0], dirs[2], files, shallow=False)
    record_property("detail", f"{mode}: {files} identical across 3 runs (workers 1, 2, 1)")
    assert not (mismatch or errors or mm2 or e2)


# 8. per-bin oracle and diagonality


def test_c8_per_bin_and_diagonality(cfg, mats, record_property):
    tx = TxParams.from_theta_g(0.75, rho=0.75, N_u=0)
    worst_rate = worst_diag = 0.0
    for s in range(100):
        ch = draw_channel_set(trial_seed(800, s), cfg)
        got = rate_u(cfg, tx, ch, noise_profiles(cfg, tx, ch), mats)
        snr = tx.rho * tx.theta_u * cfg.P_t * ch.c_u**2 * np.abs(ch.h) ** 2 / (cfg.N_t * cfg.sigma2)
        want = np.sum(np.log2(1 + snr)) / cfg.N_t
        worst_rate = max(worst_rate, abs(got - want) / want)
        H = mats.F @ mats.Phi @ ch.Ht @ mats.E_cp @ mats.F_inv
        worst_diag = max(worst_diag, np.abs(H - np.diag(np.diag(H))).max())
    record_property("detail", f"max relative rate error {worst_rate:.2e}; max off-diagonal {worst_diag:.2e}")
    assert worst_rate < 1e-9 and worst_diag < 1e-10
