"""Gauss-Chebyshev outage approximations and a sampling oracle for them.

Both closed forms average ``1 - exp(-(1 + r**alpha) * theta)``, the CDF of a
unit-mean exponential per-sub-channel gain divided by the path loss, over a
uniformly placed user: the inner disc ``[0, r_u]`` for u and the annulus
``[r_g1, r_g2]`` for g.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig, TxParams
from .metrics import average_noise_variance


class InfeasibleThreshold(ValueError):
    """``theta_g - delta1 * theta_u <= 0``: SIC at u cannot succeed."""


@dataclass(frozen=True)
class OutageThresholds:
    v_gu: float
    v_uu: float
    v_gg: float
    delta2: float


def _div(num, den):
    with np.errstate(divide="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)


def threshold_arrays(config: SystemConfig, rho, theta_u, theta_g, sigma_a_u2, sigma_a_g2):
    """Vectorized thresholds; entries where SIC is infeasible come back as NaN."""
    rho, theta_u, theta_g = (np.asarray(x, dtype=float) for x in (rho, theta_u, theta_g))
    d1, d2, P = config.delta1, config.delta2, config.P_t
    margin = theta_g - d1 * theta_u
    v_gu = _div(d1 * np.asarray(sigma_a_u2), rho * P * margin)
    v_gg = _div(d1 * np.asarray(sigma_a_g2), rho * P * margin)
    v_uu = _div(d2 * np.asarray(sigma_a_u2), rho * theta_u * P)
    bad = margin <= 0
    v_gu = np.where(bad, np.nan, v_gu)
    v_gg = np.where(bad, np.nan, v_gg)
    return v_gu, v_uu, v_gg


def thresholds(config: SystemConfig, tx: TxParams, profile=None) -> OutageThresholds:
    """Decoding thresholds at u (for g's and u's messages) and at g."""
    if tx.theta_g - config.delta1 * tx.theta_u <= 0:
        raise InfeasibleThreshold(
            f"theta_g - delta1*theta_u = {tx.theta_g - config.delta1 * tx.theta_u:.3g} <= 0"
        )
    if profile is not None:
        sau, sag = profile.sigma_a_u2, profile.sigma_a_g2
    else:
        N_s = config.N_s if tx.N_cp_override is None else config.N_t - tx.N_cp_override
        sau = average_noise_variance(config.sigma2, N_s, tx.N_u, tx.beta_u)
        sag = average_noise_variance(config.sigma2, N_s, tx.N_g, tx.beta_g)
    v_gu, v_uu, v_gg = threshold_arrays(config, tx.rho, tx.theta_u, tx.theta_g, sau, sag)
    return OutageThresholds(float(v_gu), float(v_uu), float(v_gg), config.delta2)


def _nodes(n: int) -> np.ndarray:
    k = np.arange(1, n + 1)
    return np.cos((2 * k - 1) * np.pi / (2 * n))


def disc_u_sum(v, r_u: float, alpha: float, L: int) -> np.ndarray:
    """Unclamped L-term sum for the inner disc (elementwise in ``v``)."""
    x = _nodes(L)
    n_l = 1.0 + (r_u / 2.0 * (1.0 + x)) ** alpha
    w = np.sqrt(1.0 - x**2) * (1.0 + x)
    v = np.asarray(v, dtype=float)[..., None]
    return np.pi / (2 * L) * np.sum(w * -np.expm1(-n_l * v), axis=-1)


def disc_g_sum(v, r_g1: float, r_g2: float, alpha: float, M: int) -> np.ndarray:
    """Unclamped M-term sum for the annulus (elementwise in ``v``)."""
    x = _nodes(M)
    n_m = (r_g2 - r_g1) / 2.0 * (1.0 + x) + r_g1
    w = np.sqrt(1.0 - x**2) * n_m
    v = np.asarray(v, dtype=float)[..., None]
    return np.pi / (M * (r_g2 + r_g1)) * np.sum(w * -np.expm1(-(1.0 + n_m**alpha) * v), axis=-1)


def outage_u_array(config: SystemConfig, v_gu, v_uu) -> np.ndarray:
    """P_o,u elementwise; NaN thresholds (infeasible SIC) map to 1."""
    v_gu, v_uu = np.asarray(v_gu, dtype=float), np.asarray(v_uu, dtype=float)
    bad = np.isnan(v_gu)
    safe = np.where(bad, 0.0, v_gu)
    p = np.clip(disc_u_sum(safe, config.r_u, config.alpha, config.L), 0.0, 1.0)
    return np.where(bad | (safe < v_uu), 1.0, p)


def outage_g_array(config: SystemConfig, v_gg) -> np.ndarray:
    v_gg = np.asarray(v_gg, dtype=float)
    bad = np.isnan(v_gg)
    p = np.clip(disc_g_sum(np.where(bad, 0.0, v_gg), config.r_g1, config.r_g2, config.alpha, config.M), 0.0, 1.0)
    return np.where(bad, 1.0, p)


def outage_u_closed_form(config: SystemConfig, th: OutageThresholds) -> float:
    return float(outage_u_array(config, th.v_gu, th.v_uu))


def outage_g_closed_form(config: SystemConfig, th: OutageThresholds) -> float:
    return float(outage_g_array(config, th.v_gg))


def quadrature_overshoot(n: int) -> float:
    """Excess of either rule over 1 at saturation: ``pi / (2n sin(pi/2n)) - 1``.

    Both node weights sum to this instead of 1 (the sqrt(1 - x**2) factor is
    not polynomial), so unclamped values near saturation exceed 1 by about
    ``pi**2 / (24 n**2)``.
    """
    return float(np.pi / (2 * n * np.sin(np.pi / (2 * n))) - 1.0)


def sample_radii(rng: np.random.Generator, disc: str, config: SystemConfig, n: int) -> np.ndarray:
    """Radii of users placed uniformly over the disc (U) or annulus (G)."""
    u = rng.random(n)
    if disc == "U":
        return config.r_u * np.sqrt(u)
    if disc == "G":
        return np.sqrt(config.r_g1**2 + u * (config.r_g2**2 - config.r_g1**2))
    raise ValueError(f"disc must be 'U' or 'G', got {disc!r}")


def mc_probability(
    v: float, disc: str, config: SystemConfig, n_samples: int, seed, gain: str = "exponential"
) -> float:
    """Empirical ``Pr{X / (1 + r**alpha) < v}`` for one threshold.

    ``gain="exponential"`` is the per-sub-channel unit-mean model the closed
    forms integrate. ``gain="frobenius"`` uses ``X = ||H||_F^2 = N_s * sum|taps|^2``
    (gamma distributed) instead; it is a diagnostic, not a check.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    r = sample_radii(rng, disc, config, n_samples)
    if gain == "exponential":
        x = rng.standard_exponential(n_samples)
    elif gain == "frobenius":
        x = config.N_s * rng.standard_gamma(config.num_taps, n_samples)
    else:
        raise ValueError(f"unknown gain model {gain!r}")
    return float(np.count_nonzero(x < (1.0 + r**config.alpha) * v)) / n_samples


def outage_mc_oracle(
    config: SystemConfig, th: OutageThresholds, disc: str, n_samples: int, seed
) -> float:
    """Sampling counterpart of the closed forms (same two-branch rule at u)."""
    if disc == "U":
        if th.v_gu < th.v_uu:
            return 1.0
        return mc_probability(th.v_gu, "U", config, n_samples, seed)
    return mc_probability(th.v_gg, "G", config, n_samples, seed)
