"""Rayleigh block-fading multipath channels for u, g and the eavesdropper."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import toeplitz

from .config import SystemConfig

SeedLike = Union[int, np.random.SeedSequence]


def trial_seed(master_seed: int, trial: int, redraw: int = 0) -> np.random.SeedSequence:
    """Seed for one Monte Carlo trial, a pure function of (master, trial, redraw).

    Trial ``t`` always gets the same stream no matter which worker runs it.
    """
    return np.random.SeedSequence([int(master_seed), int(trial), int(redraw)])


def cn_samples(rng: np.random.Generator, size) -> np.ndarray:
    """Circularly-symmetric CN(0, 1) samples."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)


def toeplitz_channel(taps: np.ndarray, N_t: int) -> np.ndarray:
    """Lower-triangular ``N_t x N_t`` convolution matrix with ``taps`` as first column."""
    col = np.zeros(N_t, dtype=complex)
    col[: len(taps)] = taps
    return toeplitz(col, np.zeros(N_t, dtype=complex))


def frequency_response(taps: np.ndarray, N_s: int) -> np.ndarray:
    """Diagonal of ``F Phi X_t E_cp F^*`` for unitary F: the N_s-point DFT of the taps."""
    return np.fft.fft(taps, N_s)


@dataclass(frozen=True)
class ChannelSet:
    """One block-fading realization of the three BS links."""

    taps_h: np.ndarray
    taps_g: np.ndarray
    taps_v: np.ndarray
    Ht: np.ndarray
    Gt: np.ndarray
    Vt: np.ndarray
    h: np.ndarray  # diag(H), length N_s
    g: np.ndarray
    v: np.ndarray
    c_u: float
    c_g: float
    c_e: float

    @property
    def H(self) -> np.ndarray:
        return np.diag(self.h)

    @property
    def G(self) -> np.ndarray:
        return np.diag(self.g)

    @property
    def V(self) -> np.ndarray:
        return np.diag(self.v)


def channel_set_from_taps(config: SystemConfig, taps_h, taps_g, taps_v) -> ChannelSet:
    N_t, N_s = config.N_t, config.N_s
    taps = [np.asarray(t, dtype=complex) for t in (taps_h, taps_g, taps_v)]
    for t in taps:
        if len(t) > config.N_cp:
            raise ValueError(f"{len(t)} taps exceed the CP length {config.N_cp}")
    return ChannelSet(
        taps_h=taps[0],
        taps_g=taps[1],
        taps_v=taps[2],
        Ht=toeplitz_channel(taps[0], N_t),
        Gt=toeplitz_channel(taps[1], N_t),
        Vt=toeplitz_channel(taps[2], N_t),
        h=frequency_response(taps[0], N_s),
        g=frequency_response(taps[1], N_s),
        v=frequency_response(taps[2], N_s),
        c_u=config.c_u,
        c_g=config.c_g,
        c_e=config.c_e,
    )


def draw_taps(seed: SeedLike, num_taps: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Independent uniform-PDP tap vectors for u, g and e (drawn in that order)."""
    rng = np.random.default_rng(seed)
    return tuple(cn_samples(rng, num_taps) for _ in range(3))


def draw_channel_set(seed: SeedLike, config: SystemConfig) -> ChannelSet:
    return channel_set_from_taps(config, *draw_taps(seed, config.num_taps))


def write_channel_dump(path, config: SystemConfig, master_seed: int, n_trials: int) -> None:
    """CSV of the taps drawn for trials ``0..n_trials-1`` (first draw, no redraws)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial", "link", "tap", "re", "im"])
        for t in range(n_trials):
            for link, taps in zip("uge", draw_taps(trial_seed(master_seed, t), config.num_taps)):
                for k, x in enumerate(taps):
                    w.writerow([t, link, k, repr(float(x.real)), repr(float(x.imag))])
