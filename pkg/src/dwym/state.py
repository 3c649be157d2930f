"""Canonical state of the coupled matter + gauge system on the lattice.

Field layout (site axes first, component axes last):

    phi    (*extents, N)            complex matter fields
    pi     (*extents, D, N)         contravariant momentum 4-vectors pi^mu
    a      (*extents, D, N, N)      covariant Hermitian gauge potentials a_mu
    p_tri  (*extents, T, N, N)      contravariant momentum tensors p^{alpha beta},
                                    alpha < beta slots only, T = D(D-1)/2

Skew-symmetry of p is structural: only the upper triangle is stored and the
(beta, alpha) component is defined as the negation of the (alpha, beta) slot.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .lattice import LatticeSpec, ModelParams
from .linalg import herm_part, is_hermitian


def triangle_pairs(dim: int) -> list[tuple[int, int]]:
    """Index pairs (alpha, beta) with alpha < beta, lexicographic."""
    return list(combinations(range(dim), 2))


def triangle_index(dim: int, alpha: int, beta: int) -> tuple[int, int]:
    """Slot index and sign for component (alpha, beta) of an antisymmetric pair."""
    if alpha == beta:
        raise ValueError("diagonal components of an antisymmetric tensor are zero")
    pairs = triangle_pairs(dim)
    if alpha < beta:
        return pairs.index((alpha, beta)), 1
    return pairs.index((beta, alpha)), -1


@dataclass
class GaugeFieldState:
    """Full canonical state (phi, pi, a, p) on a periodic space-time lattice."""

    spec: LatticeSpec
    n: int
    phi: np.ndarray
    pi: np.ndarray
    a: np.ndarray
    p_tri: np.ndarray

    @property
    def dim(self) -> int:
        return self.spec.dim

    def p(self, alpha: int, beta: int) -> np.ndarray:
        """Signed component p^{alpha beta}; reading (beta, alpha) negates."""
        if alpha == beta:
            return np.zeros((*self.spec.extents, self.n, self.n), dtype=complex)
        slot, sign = triangle_index(self.dim, alpha, beta)
        return sign * self.p_tri[..., slot, :, :]

    def set_p(self, alpha: int, beta: int, value: np.ndarray) -> None:
        slot, sign = triangle_index(self.dim, alpha, beta)
        self.p_tri[..., slot, :, :] = sign * value

    def p_full(self) -> np.ndarray:
        """Materialize the antisymmetric p^{alpha beta} array, shape (*ext, D, D, N, N)."""
        d = self.dim
        out = np.zeros((*self.spec.extents, d, d, self.n, self.n), dtype=complex)
        for slot, (al, be) in enumerate(triangle_pairs(d)):
            out[..., al, be, :, :] = self.p_tri[..., slot, :, :]
            out[..., be, al, :, :] = -self.p_tri[..., slot, :, :]
        return out

    def copy(self) -> "GaugeFieldState":
        return GaugeFieldState(
            self.spec, self.n,
            self.phi.copy(), self.pi.copy(), self.a.copy(), self.p_tri.copy(),
        )

    def validate(self, herm_tol: float = 1e-12) -> None:
        """Check array conformance, finiteness and Hermiticity of a and p."""
        d, n = self.dim, self.n
        ext = self.spec.extents
        t = d * (d - 1) // 2
        if self.phi.shape != (*ext, n):
            raise ValueError(f"phi has shape {self.phi.shape}, expected {(*ext, n)}")
        if self.pi.shape != (*ext, d, n):
            raise ValueError(f"pi has shape {self.pi.shape}, expected {(*ext, d, n)}")
        if self.a.shape != (*ext, d, n, n):
            raise ValueError(f"a has shape {self.a.shape}, expected {(*ext, d, n, n)}")
        if self.p_tri.shape != (*ext, t, n, n):
            raise ValueError(f"p has shape {self.p_tri.shape}, expected {(*ext, t, n, n)}")
        for arr, name in ((self.phi, "phi"), (self.pi, "pi"), (self.a, "a"), (self.p_tri, "p")):
            if not np.all(np.isfinite(arr.view(float))):
                raise ValueError(f"non-finite values in field {name}")
        if not is_hermitian(self.a, herm_tol):
            raise ValueError("gauge potential a is not Hermitian within tolerance")
        if not is_hermitian(self.p_tri, herm_tol):
            raise ValueError("momentum tensor p is not Hermitian within tolerance")

    def max_abs_diff(self, other: "GaugeFieldState") -> float:
        """Largest componentwise deviation across all fields."""
        return max(
            float(np.max(np.abs(self.phi - other.phi))),
            float(np.max(np.abs(self.pi - other.pi))),
            float(np.max(np.abs(self.a - other.a))),
            float(np.max(np.abs(self.p_tri - other.p_tri))),
        )


def new_state(spec: LatticeSpec, params: ModelParams) -> GaugeFieldState:
    """All-fields-zero state conforming to spec and params."""
    d, n, ext = spec.dim, params.n, spec.extents
    t = d * (d - 1) // 2
    return GaugeFieldState(
        spec=spec,
        n=n,
        phi=np.zeros((*ext, n), dtype=complex),
        pi=np.zeros((*ext, d, n), dtype=complex),
        a=np.zeros((*ext, d, n, n), dtype=complex),
        p_tri=np.zeros((*ext, t, n, n), dtype=complex),
    )


def seed_plane_wave(state: GaugeFieldState, params: ModelParams, k, amplitude: complex,
                    which: str = "matter", component: int = 0,
                    direction: int | None = None,
                    generator: np.ndarray | None = None) -> GaugeFieldState:
    """Seed a single Fourier mode.

    matter: phi_component = amplitude * exp(i kappa.x) and pi^0 consistent
    with the free on-shell frequency omega = +sqrt(kappa_spatial^2 + m^2).
    gauge: one a_mu component gets the Hermitian projection of the mode
    (times `generator` for N > 1, identity direction by default).
    """
    spec = state.spec
    wave = amplitude * spec.phase_field(k)
    if which == "matter":
        kappa = spec.angular_frequency(k)
        omega = float(np.sqrt(np.dot(kappa[1:], kappa[1:]) + params.m**2))
        state.phi[..., component] = wave
        state.pi[..., 0, component] = 1j * omega * wave
    elif which == "gauge":
        mu = 1 if direction is None else direction
        if not 0 <= mu < spec.dim:
            raise ValueError(f"gauge direction {mu} out of range")
        if generator is None:
            generator = np.eye(state.n, dtype=complex)
        block = wave[..., None, None] * generator
        state.a[..., mu, :, :] = herm_part(block)
    else:
        raise ValueError(f"unknown seeding target {which!r}")
    return state


def random_state(spec: LatticeSpec, params: ModelParams,
                 rng: np.random.Generator, amplitude: float = 1.0) -> GaugeFieldState:
    """iid random state (Hermitian-projected a and p); not smooth in x."""
    s = new_state(spec, params)
    d, n, ext = spec.dim, params.n, spec.extents

    def cplx(shape):
        return amplitude * (rng.normal(size=shape) + 1j * rng.normal(size=shape))

    s.phi[:] = cplx((*ext, n))
    s.pi[:] = cplx((*ext, d, n))
    s.a[:] = herm_part(cplx((*ext, d, n, n)))
    s.p_tri[:] = herm_part(cplx((*ext, d * (d - 1) // 2, n, n)))
    return s


@dataclass(frozen=True)
class FourierCoeffs:
    """Low-mode Fourier data for one smooth random field.

    Stores complex coefficients c_k for every integer mode vector k with
    |k_mu| <= max_modes[mu]; the field is evaluated on any lattice covering
    the same periodic box topology, which makes refinement studies exact:
    the same continuum function is sampled on finer grids.
    """

    modes: np.ndarray          # (M, dim) integer mode vectors
    coeffs: np.ndarray         # (M, *component_shape) complex

    def evaluate(self, spec: LatticeSpec) -> np.ndarray:
        comp_shape = self.coeffs.shape[1:]
        out = np.zeros((*spec.extents, *comp_shape), dtype=complex)
        for k, c in zip(self.modes, self.coeffs):
            spec.check_mode(k)
            wave = spec.phase_field(k)
            out += wave.reshape(wave.shape + (1,) * len(comp_shape)) * c
        return out

    def gradient(self, spec: LatticeSpec) -> np.ndarray:
        """Exact derivative fields, direction axis after the lattice axes."""
        comp_shape = self.coeffs.shape[1:]
        out = np.zeros((*spec.extents, spec.dim, *comp_shape), dtype=complex)
        for k, c in zip(self.modes, self.coeffs):
            kappa = spec.angular_frequency(spec.check_mode(k))
            wave = spec.phase_field(k)
            for mu in range(spec.dim):
                idx = (Ellipsis, mu) + (slice(None),) * len(comp_shape)
                out[idx] += (1j * kappa[mu] * wave).reshape(
                    wave.shape + (1,) * len(comp_shape)
                ) * c
        return out


def random_fourier_coeffs(rng: np.random.Generator, dim: int, component_shape: tuple,
                          amplitude: float = 0.5, max_mode: int = 3,
                          max_modes=None) -> FourierCoeffs:
    """Draw coefficients for a smooth random field from the lowest Fourier modes.

    max_modes optionally caps the mode range per axis (0 freezes an axis),
    e.g. (0, 3) gives a time-independent field in 1+1 dimensions.
    """
    if max_modes is None:
        max_modes = (max_mode,) * dim
    ranges = [range(-mm, mm + 1) for mm in max_modes]
    modes = np.array(np.meshgrid(*ranges, indexing="ij")).reshape(dim, -1).T
    scale = amplitude / max(1, len(modes))
    coeffs = scale * (
        rng.normal(size=(len(modes), *component_shape))
        + 1j * rng.normal(size=(len(modes), *component_shape))
    )
    return FourierCoeffs(modes=modes, coeffs=coeffs)


@dataclass(frozen=True)
class SmoothStateCoeffs:
    """Refinable smooth random state: one FourierCoeffs per field."""

    n: int
    phi: FourierCoeffs
    pi: FourierCoeffs
    a: FourierCoeffs
    p: FourierCoeffs

    def realize(self, spec: LatticeSpec, params: ModelParams) -> GaugeFieldState:
        if params.n != self.n:
            raise ValueError("params.n does not match coefficient set")
        s = new_state(spec, params)
        s.phi[:] = self.phi.evaluate(spec)
        s.pi[:] = self.pi.evaluate(spec)
        s.a[:] = herm_part(self.a.evaluate(spec))
        s.p_tri[:] = herm_part(self.p.evaluate(spec))
        return s


def smooth_state_coeffs(rng: np.random.Generator, dim: int, n: int,
                        amplitude: float = 0.5, max_mode: int = 2) -> SmoothStateCoeffs:
    t = dim * (dim - 1) // 2
    draw = lambda shape: random_fourier_coeffs(rng, dim, shape, amplitude, max_mode)
    return SmoothStateCoeffs(
        n=n,
        phi=draw((n,)),
        pi=draw((dim, n)),
        a=draw((dim, n, n)),
        p=draw((t, n, n)),
    )


def smooth_random_state(spec: LatticeSpec, params: ModelParams,
                        rng: np.random.Generator, amplitude: float = 0.5,
                        max_mode: int = 2) -> GaugeFieldState:
    """Smooth random state on one lattice (refinable via smooth_state_coeffs)."""
    return smooth_state_coeffs(rng, spec.dim, params.n, amplitude, max_mode).realize(spec, params)
