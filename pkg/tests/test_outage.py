import math

import numpy as np
import pytest
from scipy import integrate

from nomasec.config import SystemConfig, TxParams
from nomasec.outage import (
    InfeasibleThreshold,
    OutageThresholds,
    disc_g_sum,
    disc_u_sum,
    mc_probability,
    outage_g_closed_form,
    outage_mc_oracle,
    outage_u_closed_form,
    quadrature_overshoot,
    thresholds,
)


def _exact_u(v, r_u, alpha):
    f = lambda r: (1 - math.exp(-(1 + r**alpha) * v)) * 2 * r / r_u**2
    return integrate.quad(f, 0, r_u)[0]


def _sigma(p, n):
    return math.sqrt(max(p * (1 - p), 1e-300) / n)


def test_threshold_example():
    cfg = SystemConfig(P_t=10.0, delta1=1.0, delta3=0.5)
    tx = TxParams.from_theta_g(0.75, rho=0.75, beta_u=0.5, N_u=16, beta_g=0.5, N_g=16)
    th = thresholds(cfg, tx)
    assert th.v_gu == pytest.approx((4 / 3) / (7.5 * 0.5), rel=1e-12)
    assert th.v_gu == pytest.approx(0.3556, abs=1e-4)
    assert th.delta2 == 1.0
    assert th.v_uu == pytest.approx(1.0 * (4 / 3) / (0.75 * 0.25 * 10))


def test_infeasible_threshold():
    with pytest.raises(InfeasibleThreshold):
        thresholds(SystemConfig(P_t=10.0), TxParams(rho=0.5, theta_u=0.5, theta_g=0.5))


def test_zero_threshold():
    cfg = SystemConfig(P_t=1.0)
    assert outage_u_closed_form(cfg, OutageThresholds(0.0, 0.0, 0.0, 1.0)) == 0.0
    assert outage_g_closed_form(cfg, OutageThresholds(0.0, 0.0, 0.0, 1.0)) == 0.0
    assert mc_probability(0.0, "U", cfg, 1000, 0) == 0.0


def test_branch_gives_certain_outage():
    cfg = SystemConfig(P_t=1.0)
    assert outage_u_closed_form(cfg, OutageThresholds(0.1, 0.2, 0.1, 1.0)) == 1.0
    assert outage_mc_oracle(cfg, OutageThresholds(0.1, 0.2, 0.1, 1.0), "U", 10, 0) == 1.0


def test_large_threshold_saturates():
    cfg = SystemConfig(P_t=1.0)
    assert outage_g_closed_form(cfg, OutageThresholds(1.0, 0.0, 1e3, 1.0)) >= 0.999
    assert outage_g_closed_form(cfg, OutageThresholds(1.0, 0.0, 1e3, 1.0)) <= 1.0


def test_monotone_and_bounded():
    cfg = SystemConfig(P_t=1.0)
    v = np.logspace(-6, 4, 400)
    for vals, n in ((disc_u_sum(v, 8, 2, 32), 32), (disc_g_sum(v, 10, 14, 2, 32), 32), (disc_u_sum(v, 8, 3, 7), 7)):
        assert np.all(np.diff(vals) >= 0)
        assert vals.min() >= -1e-9
        # the rule's weights sum to 1 + overshoot, not 1
        assert vals.max() <= 1 + quadrature_overshoot(n) + 1e-12
    assert quadrature_overshoot(32) == pytest.approx(math.pi**2 / (24 * 32**2), rel=1e-3)


@pytest.mark.parametrize("L", [24, 32, 48])
def test_quadrature_converges(L):
    v = np.logspace(-3, 2, 60)
    assert np.abs(disc_u_sum(v, 8, 2, L) - disc_u_sum(v, 8, 2, 64)).max() < 1e-3
    assert np.abs(disc_g_sum(v, 10, 14, 2, L) - disc_g_sum(v, 10, 14, 2, 64)).max() < 1e-3


def test_closed_form_tracks_exact_integral():
    for v in (1e-3, 0.01, 0.1, 0.3556, 1.0):
        assert disc_u_sum(v, 8, 2, 32) == pytest.approx(_exact_u(v, 8, 2), abs=1e-3)


def test_spot_checks_against_oracle():
    cfg = SystemConfig(P_t=1.0)
    n = 1_000_000
    pu = float(np.clip(disc_u_sum(0.3556, 8, 2, 32), 0, 1))
    assert abs(pu - mc_probability(0.3556, "U", cfg, n, 1)) < 1e-2
    pg = float(np.clip(disc_g_sum(0.01, 10, 14, 2, 32), 0, 1))
    assert abs(pg - mc_probability(0.01, "G", cfg, n, 2)) < 1e-2


def test_fixed_radius_matches_exponential_cdf():
    # annulus collapsed onto one radius
    r = 6.0
    cfg = SystemConfig(P_t=1.0, r_g1=r, r_g2=r + 1e-9)
    n = 200_000
    for k, v in enumerate((0.002, 0.01, 0.03)):
        exact = 1 - math.exp(-(1 + r**2) * v)
        closed = float(disc_g_sum(v, cfg.r_g1, cfg.r_g2, 2, 32))
        assert closed == pytest.approx(exact * (1 + quadrature_overshoot(32)), rel=1e-6)
        p = mc_probability(v, "G", cfg, n, k)
        assert abs(p - exact) <= 3 * _sigma(exact, n)


def test_random_pairs_against_oracle():
    rng = np.random.default_rng(3)
    worst = 0.0
    for k in range(20):
        v = 10 ** rng.uniform(-3, 1)
        alpha = rng.uniform(1.5, 4.0)
        cfg = SystemConfig(P_t=1.0, alpha=alpha)
        for disc, closed in (
            ("U", disc_u_sum(v, cfg.r_u, alpha, 32)),
            ("G", disc_g_sum(v, cfg.r_g1, cfg.r_g2, alpha, 32)),
        ):
            p = mc_probability(v, disc, cfg, 1_000_000, [k, ord(disc)])
            worst = max(worst, abs(float(np.clip(closed, 0, 1)) - p))
    assert worst < 1e-2


def test_frobenius_diagnostic_is_far_more_optimistic():
    cfg = SystemConfig(P_t=1.0)
    assert mc_probability(0.1, "U", cfg, 100_000, 0, gain="frobenius") < mc_probability(0.1, "U", cfg, 100_000, 0)
    with pytest.raises(ValueError):
        mc_probability(0.1, "U", cfg, 10, 0, gain="rayleigh")
    with pytest.raises(ValueError):
        mc_probability(0.1, "X", cfg, 10, 0)
