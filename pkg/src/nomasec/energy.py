"""Energy harvested during the CP and during the power-split samples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import ChannelSet
from .config import SystemConfig, TxParams
from .ofdm import OfdmMatrixSet, build
from .precoder import AnPrecoder


@dataclass(frozen=True)
class EnergyReport:
    E1_u: float
    E2_u: float
    E1_g: float
    E2_g: float

    @property
    def E_u(self) -> float:
        return self.E1_u + self.E2_u

    @property
    def E_g(self) -> float:
        return self.E1_g + self.E2_g


@dataclass(frozen=True)
class EnergyTraces:
    """Channel-only factors of the energy expressions for one link.

    ``cp_data = ||A_cp X_t E_cp||_F^2``, ``cp_an = ||A_cp X_t K||_F^2`` and
    ``split_rows[n] = ||A_n Phi X_t E_cp||_F^2`` for ``n = 0..N_s``.
    """

    cp_data: float
    cp_an: float
    split_rows: np.ndarray


def energy_traces(Xt: np.ndarray, K: np.ndarray, mats: OfdmMatrixSet) -> EnergyTraces:
    head = Xt[: mats.N_cp]  # A_cp X_t
    body = (mats.Phi @ Xt @ mats.E_cp)
    row_energy = np.sum(np.abs(body) ** 2, axis=1)
    return EnergyTraces(
        cp_data=float(np.sum(np.abs(head @ mats.E_cp) ** 2)),
        cp_an=float(np.sum(np.abs(head @ K) ** 2)),
        split_rows=np.concatenate([[0.0], np.cumsum(row_energy)]),
    )


def cp_energy(config: SystemConfig, c: float, rho, tr: EnergyTraces):
    """``eta P_t T_cp c^2 Tr{A_cp X_t (rho E_cp E_cp^*/N_t + rho_bar K K^*/N_cp) X_t^* A_cp^*}``."""
    rho = np.asarray(rho, dtype=float)
    inner = rho * tr.cp_data / config.N_t + (1.0 - rho) * tr.cp_an / config.N_cp
    return config.eta * config.P_t * config.T_cp * c**2 * inner


def split_energy(config: SystemConfig, c: float, rho, beta, n, tr: EnergyTraces):
    """``eta c^2 rho (1-beta) P_t n T_s / N_t * ||A_n Phi X_t E_cp||_F^2``."""
    n = np.asarray(n, dtype=int)
    scale = config.eta * c**2 * config.P_t * config.T_s / config.N_t
    return scale * np.asarray(rho) * (1.0 - np.asarray(beta)) * n * tr.split_rows[n]


def harvested_energy(
    config: SystemConfig,
    tx: TxParams,
    channels: ChannelSet,
    precoder: AnPrecoder,
    mats: Optional[OfdmMatrixSet] = None,
) -> EnergyReport:
    mats = mats or build(config)
    tu = energy_traces(channels.Ht, precoder.K, mats)
    tg = energy_traces(channels.Gt, precoder.K, mats)
    return EnergyReport(
        E1_u=float(cp_energy(config, channels.c_u, tx.rho, tu)),
        E2_u=float(split_energy(config, channels.c_u, tx.rho, tx.beta_u, tx.N_u, tu)),
        E1_g=float(cp_energy(config, channels.c_g, tx.rho, tg)),
        E2_g=float(split_energy(config, channels.c_g, tx.rho, tx.beta_g, tx.N_g, tg)),
    )
