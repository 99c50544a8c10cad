"""Closed-form approximation guarantees of the greedy solvers.

``alpha``, ``beta`` and ``gamma`` are the quality levels of the rooted,
team and s-t orienteering subroutines; exact kernels correspond to 1.
"""

from __future__ import annotations

import math

from .routes import Variant


def mutual_loop_ratio(gamma: float) -> float:
    """Guarantee of the two-phase mutual loop against the best two-segment loop."""
    return 1.0 - (1.0 - gamma / 2.0) ** 2


def _check_quality(**kw):
    for name, v in kw.items():
        if not 0.0 < v <= 1.0:
            raise ValueError(f"{name} must lie in (0, 1], got {v}")


def approximation_bound(variant: Variant | str, q_or_qhat: int, alpha: float = 1.0,
                        beta: float = 1.0, gamma: float = 1.0) -> float:
    variant = Variant(variant)
    _check_quality(alpha=alpha, beta=beta, gamma=gamma)
    if q_or_qhat < 1:
        raise ValueError("Q or Q_hat must be >= 1")
    qh = q_or_qhat
    if variant is Variant.RCSC_TC_GE_TT:
        return 1.0 - math.exp(-alpha)
    if variant is Variant.RCSC_TT_GT_TC:
        return 1.0 - math.exp(-qh * beta / (2 * qh - 1))
    rho = mutual_loop_ratio(gamma)
    if variant is Variant.CSC2_TC_GE_TT:
        return 1.0 - math.exp(-0.75 * min(alpha, rho))
    return 1.0 - math.exp(-qh * min(alpha, rho) / (2 * qh - 1))
