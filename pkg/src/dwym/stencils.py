"""Second-order centered finite differences with periodic wrap-around.

One derivative scheme is used everywhere in the package so that every
discretization residual carries the same O(spacing^2) error model.
"""
from __future__ import annotations

import numpy as np


def central_diff(f: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    """(f(x + h e_axis) - f(x - h e_axis)) / (2 h), periodic in `axis`."""
    f = np.asarray(f)
    if not 0 <= axis < f.ndim:
        raise ValueError(f"axis {axis} out of range for array of rank {f.ndim}")
    if f.shape[axis] < 3:
        raise ValueError(f"central difference needs extent >= 3 along axis {axis}")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    return (np.roll(f, -1, axis=axis) - np.roll(f, 1, axis=axis)) / (2.0 * spacing)


def grad(f: np.ndarray, spacings, ndim: int | None = None) -> np.ndarray:
    """Stack central differences along the first `ndim` axes of f.

    Returns an array with a new direction axis inserted after the lattice
    axes: shape (*lattice, ndim, *component).
    """
    spacings = tuple(spacings)
    if ndim is None:
        ndim = len(spacings)
    parts = [central_diff(f, mu, spacings[mu]) for mu in range(ndim)]
    return np.stack(parts, axis=ndim)
