"""Flat space-time metric and index raising/lowering.

Signature is fixed to (+, -, ..., -) in natural units; the metric is
diagonal, so raising and lowering an index is an exact componentwise
sign flip.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Metric:
    """Diagonal Minkowski metric g = diag(+1, -1, ..., -1) in `dim` dimensions."""

    dim: int = 2

    def __post_init__(self):
        if not 1 <= self.dim <= 4:
            raise ValueError(f"metric dimension must be in 1..4, got {self.dim}")

    @property
    def diag(self) -> np.ndarray:
        g = -np.ones(self.dim)
        g[0] = 1.0
        return g

    def lower(self, v: np.ndarray, axis: int = -1) -> np.ndarray:
        """Lower a contravariant index living on `axis` of `v`."""
        return self._apply(v, axis)

    def raise_(self, v: np.ndarray, axis: int = -1) -> np.ndarray:
        """Raise a covariant index; inverse of :meth:`lower` (g^2 = id)."""
        return self._apply(v, axis)

    def _apply(self, v: np.ndarray, axis: int) -> np.ndarray:
        v = np.asarray(v)
        if v.shape[axis] != self.dim:
            raise ValueError(
                f"index axis has length {v.shape[axis]}, metric dimension is {self.dim}"
            )
        shape = [1] * v.ndim
        shape[axis] = self.dim
        return v * self.diag.reshape(shape)


def lower_index(v: np.ndarray, g: Metric, axis: int = -1) -> np.ndarray:
    """Functional form of :meth:`Metric.lower`."""
    return g.lower(v, axis=axis)


def raise_index(v: np.ndarray, g: Metric, axis: int = -1) -> np.ndarray:
    """Functional form of :meth:`Metric.raise_`."""
    return g.raise_(v, axis=axis)
