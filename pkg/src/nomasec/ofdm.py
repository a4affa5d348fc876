"""Structural matrices of the CP-OFDM signal model."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import dft

from .config import SystemConfig


@dataclass(frozen=True)
class OfdmMatrixSet:
    """DFT pair and the selection matrices for CP insertion/removal/extraction.

    ``F`` is unitary, so ``F_inv`` is its conjugate transpose.
    """

    N_t: int
    N_cp: int
    F: np.ndarray
    F_inv: np.ndarray
    E_cp: np.ndarray
    Phi: np.ndarray
    A_cp: np.ndarray

    @property
    def N_s(self) -> int:
        return self.N_t - self.N_cp

    def A_N(self, n: int) -> np.ndarray:
        """``n x N_s`` extraction of the first ``n`` post-CP samples."""
        if not 0 <= n <= self.N_s:
            raise ValueError(f"n={n} outside 0..{self.N_s}")
        return np.eye(n, self.N_s)

    # index-map forms of the selection matrices
    @property
    def cp_index(self) -> np.ndarray:
        """Row ``i`` of ``E_cp`` selects data sample ``cp_index[i]``."""
        return np.concatenate([np.arange(self.N_s - self.N_cp, self.N_s), np.arange(self.N_s)])


def cp_insertion(N_t: int, N_cp: int) -> np.ndarray:
    N_s = N_t - N_cp
    eye = np.eye(N_s)
    return np.vstack([eye[N_s - N_cp:], eye])


def cp_removal(N_t: int, N_cp: int) -> np.ndarray:
    N_s = N_t - N_cp
    return np.hstack([np.zeros((N_s, N_cp)), np.eye(N_s)])


def cp_extraction(N_t: int, N_cp: int) -> np.ndarray:
    return np.eye(N_cp, N_t)


@lru_cache(maxsize=16)
def _build(N_t: int, N_cp: int) -> OfdmMatrixSet:
    N_s = N_t - N_cp
    F = dft(N_s, scale="sqrtn")
    mats = OfdmMatrixSet(
        N_t=N_t,
        N_cp=N_cp,
        F=F,
        F_inv=F.conj().T,
        E_cp=cp_insertion(N_t, N_cp),
        Phi=cp_removal(N_t, N_cp),
        A_cp=cp_extraction(N_t, N_cp),
    )
    for a in (mats.F, mats.F_inv, mats.E_cp, mats.Phi, mats.A_cp):
        a.setflags(write=False)
    return mats


def build(config: SystemConfig) -> OfdmMatrixSet:
    """Build (and cache) the matrix set for ``config``'s N_t, N_cp."""
    if not 0 < config.N_cp < config.N_t:
        raise ValueError(f"need 0 < N_cp < N_t, got N_cp={config.N_cp}, N_t={config.N_t}")
    return _build(config.N_t, config.N_cp)
