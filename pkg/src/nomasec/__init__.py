"""Secure OFDM-based two-user NOMA downlink with SWIPT: link-level simulator and optimizer."""

from .config import ConstraintSpec, SystemConfig, TxParams, ValidationReport, path_loss_coeff, validate
from .optimizer import GridResult, GridSpec, PointMetrics, evaluate_grid, evaluate_point, grid_search

__version__ = "0.1.0"

__all__ = [
    "ConstraintSpec",
    "GridResult",
    "GridSpec",
    "PointMetrics",
    "SystemConfig",
    "TxParams",
    "ValidationReport",
    "evaluate_grid",
    "evaluate_point",
    "grid_search",
    "path_loss_coeff",
    "validate",
]
