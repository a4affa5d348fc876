"""Achievable rates at u, g and Eve, and the secrecy-rate pair."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import ChannelSet
from .config import SystemConfig, TxParams
from .ofdm import OfdmMatrixSet, build
from .precoder import AnPrecoder

LN2 = np.log(2.0)


def logdet_hpd(M: np.ndarray) -> np.ndarray:
    """Natural log-determinant of Hermitian positive-definite matrices (batched)."""
    L = np.linalg.cholesky(M)
    return 2.0 * np.log(np.diagonal(L, axis1=-2, axis2=-1).real).sum(axis=-1)


def split_profile(N_s: int, n: int, beta: float) -> np.ndarray:
    """Per-sample noise inflation after power-split equalization: 1/beta on the first ``n``."""
    if n > 0 and beta <= 0:
        raise ZeroDivisionError(f"beta must be > 0 when {n} samples are power-split")
    p = np.ones(N_s)
    if n > 0:
        p[:n] = 1.0 / beta
    return p


def average_noise_variance(sigma2: float, N_s: int, n: int, beta: float) -> float:
    if n > 0 and beta <= 0:
        raise ZeroDivisionError(f"beta must be > 0 when {n} samples are power-split")
    split = n / beta if n else 0.0
    return sigma2 * (N_s - n + split) / N_s


@dataclass(frozen=True)
class NoiseProfile:
    Lambda_u: np.ndarray
    Lambda_g: np.ndarray
    sigma_a_u2: float
    sigma_a_g2: float


def noise_profiles(config: SystemConfig, tx: TxParams, channels: ChannelSet) -> NoiseProfile:
    N_s, P = config.N_s, config.P_t
    Lambda_u = config.sigma2 / channels.c_u**2 * np.diag(split_profile(N_s, tx.N_u, tx.beta_u))
    interference = np.diag(np.abs(channels.g) ** 2) * (tx.rho * tx.theta_u * P / config.N_t)
    Lambda_g = (config.sigma2 / channels.c_g**2 * np.eye(N_s) + interference) @ np.diag(
        split_profile(N_s, tx.N_g, tx.beta_g)
    )
    return NoiseProfile(
        Lambda_u=Lambda_u,
        Lambda_g=Lambda_g,
        sigma_a_u2=average_noise_variance(config.sigma2, N_s, tx.N_u, tx.beta_u),
        sigma_a_g2=average_noise_variance(config.sigma2, N_s, tx.N_g, tx.beta_g),
    )


def _rate(scale: float, gains: np.ndarray, Lambda: np.ndarray, F: np.ndarray, N_t: int) -> float:
    # det(I + s XX^* (F Lambda F^*)^{-1}) = det(F Lambda F^* + s XX^*) / det(F Lambda F^*)
    cov = F @ Lambda @ F.conj().T
    cov = 0.5 * (cov + cov.conj().T)
    return float((logdet_hpd(cov + scale * np.diag(gains)) - logdet_hpd(cov)) / (N_t * LN2))


def rate_u(
    config: SystemConfig,
    tx: TxParams,
    channels: ChannelSet,
    profile: NoiseProfile,
    mats: Optional[OfdmMatrixSet] = None,
) -> float:
    """Rate at the near user after SIC removal of g's message."""
    mats = mats or build(config)
    scale = tx.rho * tx.theta_u * config.P_t / config.N_t
    return _rate(scale, np.abs(channels.h) ** 2, profile.Lambda_u, mats.F, config.N_t)


def rate_g(
    config: SystemConfig,
    tx: TxParams,
    channels: ChannelSet,
    profile: NoiseProfile,
    mats: Optional[OfdmMatrixSet] = None,
) -> float:
    """Rate at the far user, which treats u's signal as noise."""
    mats = mats or build(config)
    scale = tx.rho * tx.theta_g * config.P_t / config.N_t
    return _rate(scale, np.abs(channels.g) ** 2, profile.Lambda_g, mats.F, config.N_t)


def an_leakage_at_eve(channels: ChannelSet, precoder: AnPrecoder, mats: OfdmMatrixSet) -> np.ndarray:
    """``D = F Phi V_t K``."""
    return mats.F @ (mats.Phi @ channels.Vt @ precoder.K)


def eve_rates(
    config: SystemConfig,
    tx: TxParams,
    channels: ChannelSet,
    precoder: AnPrecoder,
    mats: Optional[OfdmMatrixSet] = None,
) -> tuple[float, float, float]:
    """Eve's rates for u's message, g's message, and both jointly.

    Single-message decoding treats the other message as noise; the AN
    covariance ``(rho_bar P_t / N_cp) D D^*`` is present in all three.
    """
    mats = mats or build(config)
    N_t, N_s, P = config.N_t, config.N_s, config.P_t
    D = an_leakage_at_eve(channels, precoder, mats)
    Q = (tx.rho_bar * P / config.N_cp) * (D @ D.conj().T) + (config.sigma2 / channels.c_e**2) * np.eye(N_s)
    Q = 0.5 * (Q + Q.conj().T)
    S = np.diag(np.abs(channels.v) ** 2) * (P / N_t)
    ld = logdet_hpd(np.stack([Q + tx.rho * S, Q + tx.rho * tx.theta_g * S, Q + tx.rho * tx.theta_u * S, Q]))
    full, no_u, no_g, noise = ld
    R_E_u = (full - no_u) / (N_t * LN2)
    R_E_g = (full - no_g) / (N_t * LN2)
    R_E = (full - noise) / (N_t * LN2)
    return float(R_E_u), float(R_E_g), float(R_E)


def secrecy_rates(R_u, R_g, R_E_u, R_E_g, R_E):
    """Secrecy pair meeting both single-user bounds and the sum bound.

    When the single-user positive parts exceed ``[R_u + R_g - R_E]^+`` both
    are scaled down by the same factor onto the bound. Works elementwise on
    arrays. Returns ``(Rs_u, Rs_g, sum_bound)``.
    """
    Rs_u = np.maximum(np.asarray(R_u, dtype=float) - R_E_u, 0.0)
    Rs_g = np.maximum(np.asarray(R_g, dtype=float) - R_E_g, 0.0)
    bound = np.maximum(np.asarray(R_u, dtype=float) + R_g - R_E, 0.0)
    total = Rs_u + Rs_g
    over = total > bound
    factor = np.where(over, bound / np.where(over, total, 1.0), 1.0)
    Rs_u, Rs_g = Rs_u * factor, Rs_g * factor
    if Rs_u.ndim == 0:
        return float(Rs_u), float(Rs_g), float(bound)
    return Rs_u, Rs_g, bound


@dataclass(frozen=True)
class RateReport:
    R_u: float
    R_g: float
    R_E_u: float
    R_E_g: float
    R_E_joint: float
    Rs_u: float
    Rs_g: float
    Rs_sum_bound: float


def rate_report(
    config: SystemConfig,
    tx: TxParams,
    channels: ChannelSet,
    precoder: AnPrecoder,
    profile: Optional[NoiseProfile] = None,
    mats: Optional[OfdmMatrixSet] = None,
) -> RateReport:
    mats = mats or build(config)
    profile = profile or noise_profiles(config, tx, channels)
    R_u = rate_u(config, tx, channels, profile, mats)
    R_g = rate_g(config, tx, channels, profile, mats)
    R_E_u, R_E_g, R_E = eve_rates(config, tx, channels, precoder, mats)
    Rs_u, Rs_g, bound = secrecy_rates(R_u, R_g, R_E_u, R_E_g, R_E)
    return RateReport(R_u, R_g, R_E_u, R_E_g, R_E, Rs_u, Rs_g, bound)
