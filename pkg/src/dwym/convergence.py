"""Refinement-study helpers shared by tests and the CLI."""
from __future__ import annotations

import math


def measured_order(coarse: float, fine: float, factor: float = 2.0) -> float:
    """Empirical convergence order from residuals at two resolutions.

    Returns +inf when both residuals are at rounding level (nothing left
    to converge) and 0 when the fine residual failed to shrink from a
    nonzero coarse one.
    """
    floor = 1e-14
    if coarse <= floor and fine <= floor:
        return math.inf
    if fine <= 0:
        return math.inf
    if coarse <= 0:
        return 0.0
    return math.log(coarse / fine) / math.log(factor)


def improvement(coarse: float, fine: float) -> float:
    """Residual reduction factor under refinement (coarse / fine)."""
    if fine == 0:
        return math.inf
    return coarse / fine
