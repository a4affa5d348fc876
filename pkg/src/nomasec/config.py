"""Static system parameters, per-run transmission parameters and constraints."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True, kw_only=True)
class SystemConfig:
    """Physical and system parameters of the OFDM NOMA SWIPT downlink.

    Defaults are the simulation setup of the two-disc topology (N_t=64,
    N_cp=16, f_s=2 MHz, d_u=4 m, d_g=12 m, d_e=10 m, alpha=2, eta=0.75).
    ``P_t`` has no default; use :func:`nomasec.harness.calibrate_pt` to pick one.
    """

    P_t: float
    N_t: int = 64
    N_cp: int = 16
    f_s: float = 2e6
    sigma2: float = 1.0
    d_u: float = 4.0
    d_g: float = 12.0
    d_e: float = 10.0
    r_u: float = 8.0
    r_g1: float = 10.0
    r_g2: float = 14.0
    alpha: float = 2.0
    eta: float = 0.75
    num_taps: Optional[int] = None  # None -> N_cp (largest delay spread the CP absorbs)
    delta1: float = 1.0
    delta3: float = 0.06
    L: int = 32
    M: int = 32

    def __post_init__(self):
        if self.num_taps is None:
            object.__setattr__(self, "num_taps", self.N_cp)

    @property
    def N_s(self) -> int:
        return self.N_t - self.N_cp

    @property
    def T(self) -> float:
        return self.N_t / self.f_s

    @property
    def T_cp(self) -> float:
        return self.N_cp / self.f_s

    @property
    def T_s(self) -> float:
        return self.N_s / self.f_s

    @property
    def c_u(self) -> float:
        return path_loss_coeff(self.d_u, self.alpha)

    @property
    def c_g(self) -> float:
        return path_loss_coeff(self.d_g, self.alpha)

    @property
    def c_e(self) -> float:
        return path_loss_coeff(self.d_e, self.alpha)

    @property
    def delta2(self) -> float:
        return 2.0 ** (2.0 * self.delta3) - 1.0

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)

    def with_cp(self, N_cp: Optional[int]) -> "SystemConfig":
        """Config with a different CP length; ``num_taps`` is kept."""
        if N_cp is None or N_cp == self.N_cp:
            return self
        return dataclasses.replace(self, N_cp=N_cp, num_taps=self.num_taps)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True, kw_only=True)
class TxParams:
    """Decision variables of the max-min problem.

    ``theta_u + theta_g`` must equal 1; :meth:`from_theta_g` builds a consistent pair.
    """

    rho: float
    theta_u: float
    theta_g: float
    beta_u: float = 0.5
    beta_g: float = 0.5
    N_u: int = 16
    N_g: int = 24
    N_cp_override: Optional[int] = None

    @classmethod
    def from_theta_g(cls, theta_g: float, **kw) -> "TxParams":
        return cls(theta_g=theta_g, theta_u=1.0 - theta_g, **kw)

    @property
    def rho_bar(self) -> float:
        return 1.0 - self.rho

    def replace(self, **changes) -> "TxParams":
        if "theta_g" in changes and "theta_u" not in changes:
            changes["theta_u"] = 1.0 - changes["theta_g"]
        return dataclasses.replace(self, **changes)

    def key(self) -> tuple:
        """Total order used for deterministic tie-breaking."""
        cp = -1 if self.N_cp_override is None else self.N_cp_override
        return (self.rho, self.theta_g, self.beta_u, self.N_u, self.beta_g, self.N_g, cp)


@dataclass(frozen=True)
class ConstraintSpec:
    """Average-energy floors (J per OFDM symbol) and outage ceilings."""

    mu_u: float = 10.0
    mu_g: float = 1.0
    eps_u: float = 1e-4
    eps_g: float = 1e-4

    def __post_init__(self):
        if self.mu_u < 0 or self.mu_g < 0:
            raise ValueError("energy floors must be >= 0")
        for eps in (self.eps_u, self.eps_g):
            if not 0.0 <= eps <= 1.0:
                raise ValueError(f"outage ceiling {eps} outside [0, 1]")


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def path_loss_coeff(d: float, alpha: float) -> float:
    """Amplitude path-loss coefficient ``1/sqrt(1 + d**alpha)``."""
    if d < 0:
        raise ValueError(f"distance must be >= 0, got {d}")
    return 1.0 / math.sqrt(1.0 + d**alpha)


def validate(config: SystemConfig, tx: Optional[TxParams] = None) -> ValidationReport:
    """Check domain constraints without raising; returns every violation found."""
    v: list[str] = []
    c = config
    N_cp = c.N_cp if tx is None or tx.N_cp_override is None else tx.N_cp_override
    if c.N_t < 1 or N_cp < 1:
        v.append("N_t and N_cp must be positive")
    if N_cp >= c.N_t:
        v.append("N_cp < N_t")
    if c.num_taps < 1:
        v.append("num_taps must be positive")
    if c.num_taps > N_cp:
        v.append("tau exceeds CP")
    if not 0.0 <= c.eta <= 1.0:
        v.append("0 <= eta <= 1")
    if c.alpha <= 0:
        v.append("alpha > 0")
    if not c.r_g1 < c.r_g2:
        v.append("r_g1 < r_g2")
    for name in ("d_u", "d_g", "d_e", "r_u", "r_g1", "r_g2", "f_s", "sigma2"):
        if getattr(c, name) <= 0:
            v.append(f"{name} > 0")
    if c.P_t < 0:
        v.append("P_t >= 0")
    if c.L < 1 or c.M < 1:
        v.append("quadrature orders L, M >= 1")

    if tx is not None:
        N_s = c.N_t - N_cp
        for name in ("rho", "beta_u", "beta_g", "theta_u", "theta_g"):
            val = getattr(tx, name)
            if not 0.0 <= val <= 1.0:
                v.append(f"0 <= {name} <= 1")
        if not math.isclose(tx.theta_u + tx.theta_g, 1.0, abs_tol=1e-12):
            v.append("theta_u + theta_g = 1")
        if not tx.theta_u < tx.theta_g:
            v.append("theta_u < theta_g")
        for n_name, b_name in (("N_u", "beta_u"), ("N_g", "beta_g")):
            n = getattr(tx, n_name)
            if not 0 <= n <= N_s:
                v.append(f"{n_name} in 0..N_s")
            if n > 0 and getattr(tx, b_name) <= 0:
                v.append(f"{b_name} > 0 when {n_name} > 0")
    return ValidationReport(v)
