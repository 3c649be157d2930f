"""Periodic space-time lattice geometry and model parameters."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_EXTENT = 4


@dataclass(frozen=True)
class LatticeSpec:
    """Discretized periodic space-time: axis 0 is time, the rest space.

    extents are site counts per axis, spacings the lattice constants in
    dimensionless (natural) units.
    """

    extents: tuple[int, ...]
    spacings: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "extents", tuple(int(e) for e in self.extents))
        object.__setattr__(self, "spacings", tuple(float(s) for s in self.spacings))
        if not 2 <= self.dim <= 4:
            raise ValueError(f"space-time dimension must be 2..4, got {self.dim}")
        if len(self.spacings) != self.dim:
            raise ValueError("extents and spacings must have equal length")
        if any(e < MIN_EXTENT for e in self.extents):
            raise ValueError(f"every extent must be >= {MIN_EXTENT}, got {self.extents}")
        if any(s <= 0 for s in self.spacings):
            raise ValueError(f"spacings must be positive, got {self.spacings}")

    @property
    def dim(self) -> int:
        return len(self.extents)

    @property
    def nsites(self) -> int:
        return int(np.prod(self.extents))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacings))

    @property
    def spatial_cell_volume(self) -> float:
        return float(np.prod(self.spacings[1:]))

    def axis_coords(self, axis: int) -> np.ndarray:
        """Physical coordinates x^axis along one axis."""
        return np.arange(self.extents[axis]) * self.spacings[axis]

    def coordinate(self, axis: int) -> np.ndarray:
        """Coordinate field x^axis broadcast over the full lattice."""
        shape = [1] * self.dim
        shape[axis] = self.extents[axis]
        return np.broadcast_to(
            self.axis_coords(axis).reshape(shape), self.extents
        ).copy()

    def angular_frequency(self, k) -> np.ndarray:
        """Angular wavenumbers kappa_mu = 2 pi k_mu / (L_mu) for integer modes k."""
        k = np.asarray(k, dtype=float)
        if k.shape != (self.dim,):
            raise ValueError(f"mode vector must have {self.dim} components")
        lengths = np.array(self.extents) * np.array(self.spacings)
        return 2.0 * np.pi * k / lengths

    def check_mode(self, k) -> np.ndarray:
        """Validate a Nyquist-representable integer mode vector."""
        k = np.asarray(k, dtype=int)
        if k.shape != (self.dim,):
            raise ValueError(f"mode vector must have {self.dim} components")
        for mu, (km, ext) in enumerate(zip(k, self.extents)):
            if abs(km) > ext // 2:
                raise ValueError(
                    f"mode {km} along axis {mu} exceeds Nyquist range for extent {ext}"
                )
        return k

    def phase_field(self, k) -> np.ndarray:
        """exp(i kappa . x) over the lattice for integer mode vector k."""
        kappa = self.angular_frequency(self.check_mode(k))
        acc = np.zeros(self.extents)
        for mu in range(self.dim):
            acc = acc + kappa[mu] * self.coordinate(mu)
        return np.exp(1j * acc)

    def refine(self, factor: int = 2) -> "LatticeSpec":
        """Same physical box with `factor` times more sites per axis."""
        return LatticeSpec(
            tuple(e * factor for e in self.extents),
            tuple(s / factor for s in self.spacings),
        )


@dataclass(frozen=True)
class ModelParams:
    """Internal dimension N (1 selects the abelian path), coupling q, mass m."""

    n: int = 1
    q: float = 0.0
    m: float = 0.0

    def __post_init__(self):
        if not 1 <= self.n <= 4:
            raise ValueError(f"internal dimension must be 1..4, got {self.n}")
        if self.m < 0:
            raise ValueError(f"mass must be nonnegative, got {self.m}")


def default_spec(sites: int = 64, dt: float = 0.25, dx: float = 0.25) -> LatticeSpec:
    """Desk-scale 1+1 dimensional default: 64 x 64 sites, spacing 0.25."""
    return LatticeSpec((sites, sites), (dt, dx))
