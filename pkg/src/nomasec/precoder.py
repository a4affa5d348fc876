"""Artificial-noise precoder in the null space of the CP-removed sum channel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import SeedLike, cn_samples

NULL_TOL = 1e-9  # singular values below NULL_TOL * s_max count as zero


class DegenerateChannel(ValueError):
    """The sum channel's null space does not have the expected dimension."""


@dataclass(frozen=True)
class AnPrecoder:
    K: np.ndarray  # N_t x N_cp, orthonormal columns
    cancellation_residual: float  # ||Phi (Ht + Gt) K||_F
    residual_u: float  # ||Phi Ht K||_F, diagnostic only
    residual_g: float
    sum_channel_norm: float  # ||Phi (Ht + Gt)||_F

    @property
    def relative_residual(self) -> float:
        return self.cancellation_residual / self.sum_channel_norm


def compute_precoder(Ht: np.ndarray, Gt: np.ndarray, Phi: np.ndarray) -> AnPrecoder:
    """Orthonormal basis of the null space of ``Phi (Ht + Gt)`` via a full SVD.

    Raises :class:`DegenerateChannel` when the numerical nullity differs from
    ``N_t - N_s`` (rank-deficient draw); callers redraw the realization.
    """
    A = Phi @ (Ht + Gt)
    N_s, N_t = A.shape
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    rank = int(np.count_nonzero(s > NULL_TOL * s[0])) if s[0] > 0 else 0
    nullity = N_t - rank
    if nullity != N_t - N_s:
        raise DegenerateChannel(f"null space has dimension {nullity}, expected {N_t - N_s}")
    K = Vh[rank:].conj().T
    return AnPrecoder(
        K=K,
        cancellation_residual=float(np.linalg.norm(A @ K)),
        residual_u=float(np.linalg.norm(Phi @ Ht @ K)),
        residual_g=float(np.linalg.norm(Phi @ Gt @ K)),
        sum_channel_norm=float(np.linalg.norm(A)),
    )


def draw_an(seed: SeedLike, N_cp: int) -> np.ndarray:
    """Unit-variance-per-entry AN vector; the ``rho_bar P_t / N_cp`` scaling is applied by the caller."""
    return cn_samples(np.random.default_rng(seed), N_cp)
