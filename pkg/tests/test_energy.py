import numpy as np
import pytest

from nomasec.channel import channel_set_from_taps
from nomasec.energy import harvested_energy
from nomasec.optimizer import draw_trial
from nomasec.precoder import compute_precoder


def test_flat_channel_cp_energy(cfg, mats, tx):
    ch = channel_set_from_taps(cfg, [1.0], [0.5], [1.0])
    pre = compute_precoder(ch.Ht, ch.Gt, mats.Phi)
    rep = harvested_energy(cfg, tx.replace(rho=1.0), ch, pre, mats)
    want = cfg.eta * cfg.P_t * cfg.T_cp * ch.c_u**2 * cfg.N_cp / cfg.N_t
    assert rep.E1_u == pytest.approx(want, rel=1e-12)


def test_flat_channel_split_energy(cfg, mats, tx):
    ch = channel_set_from_taps(cfg, [1.0], [0.5], [1.0])
    pre = compute_precoder(ch.Ht, ch.Gt, mats.Phi)
    rep = harvested_energy(cfg, tx, ch, pre, mats)
    # identity channel: ||A_n Phi I E_cp||^2 = n
    want = cfg.eta * ch.c_u**2 * tx.rho * (1 - tx.beta_u) * cfg.P_t * tx.N_u * cfg.T_s / cfg.N_t * tx.N_u
    assert rep.E2_u == pytest.approx(want, rel=1e-12)


def test_zero_cases(cfg, mats, tx):
    ch, pre = draw_trial(cfg, 0, 0, mats)
    assert harvested_energy(cfg, tx.replace(N_u=0), ch, pre, mats).E2_u == 0
    assert harvested_energy(cfg, tx.replace(beta_g=1.0), ch, pre, mats).E2_g == 0


def test_totals_and_sign(cfg, mats, tx):
    ch, pre = draw_trial(cfg, 0, 1, mats)
    r = harvested_energy(cfg, tx, ch, pre, mats)
    assert r.E_u == r.E1_u + r.E2_u and r.E_g == r.E1_g + r.E2_g
    assert min(r.E1_u, r.E2_u, r.E1_g, r.E2_g) >= 0


def test_dense_definition(cfg, mats, tx):
    ch, pre = draw_trial(cfg, 0, 2, mats)
    r = harvested_energy(cfg, tx, ch, pre, mats)
    K, A = pre.K, mats.A_cp
    cov = tx.rho * mats.E_cp @ mats.E_cp.T / cfg.N_t + tx.rho_bar * K @ K.conj().T / cfg.N_cp
    E1 = cfg.eta * cfg.P_t * cfg.T_cp * ch.c_g**2 * np.trace(A @ ch.Gt @ cov @ ch.Gt.conj().T @ A.T).real
    B = mats.A_N(tx.N_g) @ mats.Phi @ ch.Gt @ mats.E_cp
    E2 = cfg.eta * ch.c_g**2 * tx.rho * (1 - tx.beta_g) * cfg.P_t * tx.N_g * cfg.T_s / cfg.N_t * np.trace(B @ B.conj().T).real
    assert r.E1_g == pytest.approx(E1, rel=1e-10)
    assert r.E2_g == pytest.approx(E2, rel=1e-10)


def test_linear_in_power_and_efficiency(cfg, mats, tx):
    ch, pre = draw_trial(cfg, 0, 3, mats)
    a = harvested_energy(cfg, tx, ch, pre, mats)
    b = harvested_energy(cfg.replace(P_t=2 * cfg.P_t), tx, ch, pre, mats)
    c = harvested_energy(cfg.replace(eta=cfg.eta / 2), tx, ch, pre, mats)
    assert b.E_u == pytest.approx(2 * a.E_u) and b.E_g == pytest.approx(2 * a.E_g)
    assert c.E_u == pytest.approx(a.E_u / 2) and c.E_g == pytest.approx(a.E_g / 2)


def test_monotone_in_split_samples(cfg, mats, tx):
    ch, pre = draw_trial(cfg, 0, 4, mats)
    e = [harvested_energy(cfg, tx.replace(N_g=n), ch, pre, mats).E2_g for n in range(cfg.N_s + 1)]
    assert all(b >= a for a, b in zip(e, e[1:]))


def test_near_user_harvests_more(cfg, mats, tx):
    eu = eg = 0.0
    for t in range(500):
        ch, pre = draw_trial(cfg, 9, t, mats)
        r = harvested_energy(cfg, tx, ch, pre, mats)
        eu, eg = eu + r.E_u, eg + r.E_g
    assert eu > eg
