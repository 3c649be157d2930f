"""Time evolution of the coupled system in temporal gauge (a_0 = 0).

The dynamical variables per spatial site are the positions (phi, a_k) and
the momenta (pi^0, p^{0k}); spatial momenta pi^k and spatial-spatial
p^{kl} are rebuilt from the constraint relations

    pi_alpha = d_alpha phi - i q a_alpha phi
    p_{beta alpha} = d_beta a_alpha - d_alpha a_beta + iq [a_alpha, a_beta]

every step, which keeps those relations exact by construction. Evolution
uses synchronized leapfrog (velocity Verlet): time-reversible, and the
forces depend on positions only, so the scheme is symplectic for the
semi-discrete lattice Hamiltonian. The integrated trajectory is stored as
a full space-time lattice state with time spacing dt, on which all the
algebraic and divergence diagnostics of the other modules apply directly.

Dynamical runs support 1 + 1 dimensions; higher-dimensional states are for
static and algebraic checks only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonians import eval_ym, slice_sum
from .lattice import LatticeSpec, ModelParams
from .linalg import herm_part
from .minkowski import Metric
from .noether import (divergence, field_strength_lowered, gauge_current_bracket,
                      maxwell_residual, sun_gauge_current, total_charge)
from .state import GaugeFieldState, new_state, triangle_pairs
from .stencils import central_diff


class ConfigError(ValueError):
    """Invalid evolution configuration (CFL bound, step counts)."""


class NumericalError(RuntimeError):
    """Evolution produced non-finite fields."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class GaussIncompatibleError(RuntimeError):
    """Gauss constraint has no periodic solution for the given source."""


@dataclass(frozen=True)
class EvolutionConfig:
    """Leapfrog evolution in temporal gauge."""

    dt: float
    n_steps: int
    cadence: int = 1

    integrator = "leapfrog"
    gauge = "temporal"

    def __post_init__(self):
        if self.dt <= 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 3:
            raise ConfigError("need at least 3 steps (history extent >= 4)")
        if self.cadence < 1:
            raise ConfigError("cadence must be >= 1")

    def validate_against(self, spec: LatticeSpec) -> None:
        bound = 0.5 * min(spec.spacings[1:])
        if self.dt > bound + 1e-15:
            raise ConfigError(
                f"dt = {self.dt} violates the CFL-style bound "
                f"dt <= 0.5 * min spatial spacing = {bound}"
            )


@dataclass
class DiagnosticsRecord:
    """Per-step conservation metrics; all values must be finite."""

    step: int
    time: float
    energy: float
    energy_canonical: float
    charge: float
    charge_norm: float
    gauss_max: float
    noether_div_max: float

    def __post_init__(self):
        for name in ("time", "energy", "energy_canonical", "charge",
                     "charge_norm", "gauss_max", "noether_div_max"):
            if not np.isfinite(getattr(self, name)):
                raise NumericalError(f"diagnostic {name} is not finite", self.step)

    FIELDS = ("step", "time", "energy", "energy_canonical", "charge",
              "charge_norm", "gauss_max", "noether_div_max")

    def row(self) -> tuple:
        return tuple(getattr(self, name) for name in self.FIELDS)


def covariant_momenta(phi: np.ndarray, a: np.ndarray, spec: LatticeSpec,
                      params: ModelParams) -> np.ndarray:
    """Contravariant pi^mu from the first amended canonical equation,
    pi_alpha = d_alpha phi - iq a_alpha phi, raised with the metric."""
    d = spec.dim
    low = np.stack(
        [central_diff(phi, mu, spec.spacings[mu]) for mu in range(d)],
        axis=len(spec.extents),
    )
    low = low - 1j * params.q * np.einsum("...ajk,...k->...aj", a, phi)
    return Metric(d).raise_(low, axis=len(spec.extents))


def field_strength(a: np.ndarray, spec: LatticeSpec, params: ModelParams) -> np.ndarray:
    """Triangle-stored contravariant p^{alpha beta} from the potentials.

    For N = 1 the commutator contribution is exactly zero (identical matrix
    products cancel), leaving the pure curl.
    """
    f = field_strength_lowered(a, spec, params.q)
    g = Metric(spec.dim).diag
    pairs = triangle_pairs(spec.dim)
    n = a.shape[-1]
    out = np.zeros((*spec.extents, len(pairs), n, n), dtype=complex)
    for slot, (al, be) in enumerate(pairs):
        # p^{al be} = g^{al al} g^{be be} p_{al be}; stored bracket is F_{be al} = p_{be al}
        out[..., slot, :, :] = g[al] * g[be] * (-f[..., be, al, :, :])
    return out


# ---------------------------------------------------------------------------
# slice-level kernels (1+1 dimensional, temporal gauge)

def _pi1_up(phi, a1, dx, q):
    """Contravariant pi^1 on a spatial slice: pi^1 = -(D1 phi - iq a1 phi)."""
    low = central_diff(phi, 0, dx) - 1j * q * np.einsum("xjk,xk->xj", a1, phi)
    return -low


def _force_phi(phi, a1, dx, params):
    """d0 pi^0 = -m^2 phi + iq a1 pi^1 - D1 pi^1."""
    pi1 = _pi1_up(phi, a1, dx, params.q)
    f = -params.m**2 * phi - central_diff(pi1, 0, dx)
    f = f + 1j * params.q * np.einsum("xjk,xk->xj", a1, pi1)
    return f


def _force_p01(phi, a1, dx, params):
    """d0 p^{01} = j^1 = iq (phi pibar^1 - pi^1 phibar); Hermitian."""
    pi1 = _pi1_up(phi, a1, dx, params.q)
    outer = np.einsum("xj,xk->xjk", phi, np.conj(pi1))
    return 1j * params.q * (outer - np.swapaxes(outer, -1, -2).conj())


def _step_slice(phi, pi0, a1, p01, dt, dx, params):
    """One synchronized leapfrog step of the slice variables."""
    pi0 = pi0 + 0.5 * dt * _force_phi(phi, a1, dx, params)
    p01 = p01 + 0.5 * dt * _force_p01(phi, a1, dx, params)
    phi = phi + dt * pi0
    a1 = a1 + dt * (-p01)
    pi0 = pi0 + 0.5 * dt * _force_phi(phi, a1, dx, params)
    p01 = p01 + 0.5 * dt * _force_p01(phi, a1, dx, params)
    return phi, pi0, a1, p01


def _require_1p1(spec: LatticeSpec) -> None:
    if spec.dim != 2:
        raise ConfigError("dynamical evolution supports 1+1 dimensions only")


def _require_temporal(state: GaugeFieldState, t_index: int = 0) -> None:
    if float(np.max(np.abs(state.a[t_index, ..., 0, :, :]))) > 1e-12:
        raise ConfigError("temporal gauge requires a_0 = 0 on the initial slice")


def _write_slice(hist: GaugeFieldState, i: int, phi, pi0, a1, p01,
                 dx: float, params: ModelParams) -> None:
    """Store slice variables plus the rebuilt spatial momenta."""
    hist.phi[i] = phi
    hist.pi[i, ..., 0, :] = pi0
    pi1 = _pi1_up(phi, a1, dx, params.q)
    hist.pi[i, ..., 1, :] = pi1
    hist.a[i, ..., 0, :, :] = 0.0
    hist.a[i, ..., 1, :, :] = a1
    hist.p_tri[i, ..., 0, :, :] = p01


def step(state: GaugeFieldState, i: int, cfg: EvolutionConfig,
         params: ModelParams) -> GaugeFieldState:
    """Advance slice i of a trajectory state to slice i + 1, in place.

    The time spacing of the state's lattice is used as dt; stepping with a
    negative cfg.dt is not supported here (reverse by negating the momenta
    of the final slice instead, which is exact for leapfrog).
    """
    _require_1p1(state.spec)
    cfg.validate_against(state.spec)
    if abs(state.spec.spacings[0] - cfg.dt) > 1e-12 * cfg.dt:
        raise ConfigError(
            f"cfg.dt = {cfg.dt} does not match the trajectory time spacing "
            f"{state.spec.spacings[0]}"
        )
    nt = state.spec.extents[0]
    if not 0 <= i < nt - 1:
        raise ValueError(f"slice index {i} cannot be advanced on extent {nt}")
    _require_temporal(state, i)
    dx = state.spec.spacings[1]
    phi = state.phi[i].copy()
    pi0 = state.pi[i, ..., 0, :].copy()
    a1 = state.a[i, ..., 1, :, :].copy()
    p01 = state.p_tri[i, ..., 0, :, :].copy()
    phi, pi0, a1, p01 = _step_slice(phi, pi0, a1, p01, cfg.dt, dx, params)
    if not (np.all(np.isfinite(phi.view(float))) and np.all(np.isfinite(pi0.view(float)))
            and np.all(np.isfinite(a1.view(float))) and np.all(np.isfinite(p01.view(float)))):
        raise NumericalError("non-finite fields produced by step", i)
    _write_slice(state, i + 1, phi, pi0, a1, p01, dx, params)
    return state


def step_cauchy(state: GaugeFieldState, dt: float, params: ModelParams,
                n_steps: int = 1) -> GaugeFieldState:
    """Advance the slice-0 Cauchy data of a carrier state by n_steps of size dt.

    dt may be negative: the backward step is the exact arithmetic inverse
    of the forward one (leapfrog half-kicks and the drift cancel to
    rounding), so stepping +dt then -dt recovers the state.
    """
    _require_1p1(state.spec)
    _require_temporal(state)
    bound = 0.5 * min(state.spec.spacings[1:])
    if abs(dt) > bound + 1e-15:
        raise ConfigError(
            f"|dt| = {abs(dt)} violates the CFL-style bound "
            f"dt <= 0.5 * min spatial spacing = {bound}"
        )
    dx = state.spec.spacings[1]
    phi = state.phi[0].copy()
    pi0 = state.pi[0, ..., 0, :].copy()
    a1 = state.a[0, ..., 1, :, :].copy()
    p01 = state.p_tri[0, ..., 0, :, :].copy()
    for i in range(n_steps):
        phi, pi0, a1, p01 = _step_slice(phi, pi0, a1, p01, dt, dx, params)
        if not np.all(np.isfinite(phi.view(float))):
            raise NumericalError("non-finite fields produced by step", i + 1)
    out = state.copy()
    _write_slice(out, 0, phi, pi0, a1, p01, dx, params)
    return out


def canonical_energy_density(state: GaugeFieldState, params: ModelParams) -> np.ndarray:
    """Fixed-frame (all-plus) energy density of the temporal-gauge system:
    |pi^0|^2 + |pi^k|^2 + m^2 |phi|^2 + 1/2 tr p^{0k} p^{0k} + 1/4 tr p^{kl} p^{kl}."""
    dens = np.einsum("...aj,...aj->...", np.conj(state.pi), state.pi).real
    dens = dens + params.m**2 * np.einsum("...j,...j->...", np.conj(state.phi), state.phi).real
    for slot in range(state.p_tri.shape[-3]):
        block = state.p_tri[..., slot, :, :]
        dens = dens + 0.5 * np.einsum("...jk,...kj->...", block, block).real
    return dens


def reversed_cauchy(state: GaugeFieldState, t_index: int) -> GaugeFieldState:
    """Time-reflected Cauchy data from one slice: momenta flip sign."""
    out = new_state(state.spec, ModelParams(n=state.n))
    out.phi[:] = state.phi[t_index]
    out.pi[:] = -state.pi[t_index]
    out.a[:] = state.a[t_index]
    out.p_tri[:] = -state.p_tri[t_index]
    return out


def _diag_records(hist: GaugeFieldState, params: ModelParams,
                  cfg: EvolutionConfig) -> list[DiagnosticsRecord]:
    spec = hist.spec
    nt = spec.extents[0]
    density = eval_ym(hist, params)
    canon = canonical_energy_density(hist, params)
    j = sun_gauge_current(hist, params)
    div_j = divergence(gauge_current_bracket(hist), spec) * (1j * params.q)
    gauss = maxwell_residual(hist, params)[..., 0, :, :]

    records = []
    for s in range(0, nt, cfg.cadence):
        interior = min(max(s, 1), nt - 2)  # time stencil undefined at the ends
        charge = total_charge(j, spec, s)
        records.append(DiagnosticsRecord(
            step=s,
            time=s * cfg.dt,
            energy=slice_sum(density, hist, s),
            energy_canonical=slice_sum(canon, hist, s),
            charge=float(np.trace(charge).real),
            charge_norm=float(np.linalg.norm(charge)),
            gauss_max=float(np.max(np.abs(gauss[s]))),
            noether_div_max=float(np.max(np.abs(div_j[interior]))),
        ))
    return records


def evolve(initial: GaugeFieldState, cfg: EvolutionConfig, params: ModelParams
           ) -> tuple[GaugeFieldState, list[DiagnosticsRecord]]:
    """Integrate slice 0 of `initial` for cfg.n_steps steps.

    Returns the trajectory as a space-time lattice state (time extent
    n_steps + 1, time spacing dt) together with per-cadence diagnostics.
    Incoming spatial momenta are ignored and rebuilt from the constraint
    relations.
    """
    _require_1p1(initial.spec)
    cfg.validate_against(initial.spec)
    _require_temporal(initial)
    nx = initial.spec.extents[1]
    dx = initial.spec.spacings[1]
    hist_spec = LatticeSpec((cfg.n_steps + 1, nx), (cfg.dt, dx))
    hist = new_state(hist_spec, ModelParams(n=params.n, q=params.q, m=params.m))

    phi = initial.phi[0].copy()
    pi0 = initial.pi[0, ..., 0, :].copy()
    a1 = initial.a[0, ..., 1, :, :].copy()
    p01 = initial.p_tri[0, ..., 0, :, :].copy()
    _write_slice(hist, 0, phi, pi0, a1, p01, dx, params)
    for i in range(cfg.n_steps):
        phi, pi0, a1, p01 = _step_slice(phi, pi0, a1, p01, cfg.dt, dx, params)
        if not np.all(np.isfinite(phi.view(float))):
            raise NumericalError("evolution went non-finite", i + 1)
        _write_slice(hist, i + 1, phi, pi0, a1, p01, dx, params)
    return hist, _diag_records(hist, params, cfg)


# ---------------------------------------------------------------------------
# Gauss constraint

def solve_gauss(state: GaugeFieldState, params: ModelParams,
                t_index: int | None = None, tol: float = 1e-10) -> GaugeFieldState:
    """Adjust p^{10} so the temporal component of the field equation,
    D1 p^{10} - iq [a_1, p^{10}] = iq (phi pibar^0 - pi^0 phibar), holds.

    Direct solver for one spatial dimension: the covariant divergence is
    assembled as a dense linear operator over sites x matrix entries and
    solved in the least-squares minimum-norm sense (zero-mean gauge choice
    on each stencil sublattice). A source component outside the operator's
    range -- net charge on the periodic lattice -- raises
    GaussIncompatibleError.
    """
    _require_1p1(state.spec)
    out = state.copy()
    slices = range(state.spec.extents[0]) if t_index is None else [t_index]
    for t in slices:
        _require_temporal(state, t)
        h = _solve_gauss_slice(
            state.phi[t], state.pi[t, ..., 0, :], state.a[t, ..., 1, :, :],
            state.spec.spacings[1], params, tol,
        )
        out.p_tri[t, ..., 0, :, :] = -h  # stored slot is p^{01} = -p^{10}
    return out


def _solve_gauss_slice(phi, pi0, a1, dx, params, tol):
    nx, n = phi.shape
    q = params.q
    outer = np.einsum("xj,xk->xjk", phi, np.conj(pi0))
    source = 1j * q * (outer - np.swapaxes(outer, -1, -2).conj())

    m = nx * n * n
    op = np.zeros((m, m), dtype=complex)
    eye = np.eye(n * n, dtype=complex)
    idn = np.eye(n, dtype=complex)
    for x in range(nx):
        r = slice(x * n * n, (x + 1) * n * n)
        xp = ((x + 1) % nx) * n * n
        xm = ((x - 1) % nx) * n * n
        op[r, xp:xp + n * n] += eye / (2.0 * dx)
        op[r, xm:xm + n * n] -= eye / (2.0 * dx)
        # -iq [a1(x), h] acting on vec(h), row-major: a h -> (a x I), h a -> (I x a^T)
        comm = np.kron(a1[x], idn) - np.kron(idn, a1[x].T)
        op[r, r] -= 1j * q * comm
    sol, *_ = np.linalg.lstsq(op, source.reshape(m), rcond=None)
    resid = float(np.max(np.abs(op @ sol - source.reshape(m))))
    scale = max(1.0, float(np.max(np.abs(source))))
    if resid > tol * scale:
        raise GaussIncompatibleError(
            f"net charge on periodic lattice: Gauss solve residual {resid:.3e}"
        )
    return herm_part(sol.reshape(nx, n, n))


# ---------------------------------------------------------------------------
# initial conditions

def cauchy_state(nx: int, dx: float, params: ModelParams) -> GaugeFieldState:
    """Carrier state for initial data; only slice 0 is consumed by evolve."""
    spec = LatticeSpec((4, nx), (dx, dx))
    return new_state(spec, params)


def _spatial_wave(nx: int, dx: float, k: int) -> tuple[np.ndarray, float]:
    x = np.arange(nx) * dx
    kappa = 2.0 * np.pi * k / (nx * dx)
    return np.exp(1j * kappa * x), kappa


def free_wave_initial(nx: int, dx: float, params: ModelParams, k: int = 1,
                      amplitude: float = 0.1, component: int = 0,
                      discrete_dt: float | None = None) -> GaugeFieldState:
    """Single matter mode phi = A e^{i kappa x}, pi^0 = i omega phi.

    With discrete_dt set, omega is replaced by the exact eigenfrequency of
    the leapfrog map at that step size (sin(theta)/dt with
    cos(theta) = 1 - dt^2 Omega^2 / 2, Omega^2 = m^2 + sin^2(kappa dx)/dx^2),
    so the seeded mode is an exact eigenmode of the discrete evolution.
    """
    state = cauchy_state(nx, dx, params)
    wave, kappa = _spatial_wave(nx, dx, k)
    if discrete_dt is None:
        omega_eff = np.sqrt(kappa**2 + params.m**2)
    else:
        omega2 = params.m**2 + np.sin(kappa * dx) ** 2 / dx**2
        theta = 2.0 * np.arcsin(0.5 * discrete_dt * np.sqrt(omega2))
        omega_eff = np.sin(theta) / discrete_dt
    state.phi[0, :, component] = amplitude * wave
    state.pi[0, :, 0, component] = 1j * omega_eff * amplitude * wave
    return state


def _balanced_pair(nx: int, dx: float, m: float, k1: int, k2: int,
                   amplitude: float) -> tuple[np.ndarray, np.ndarray]:
    """phi, pi^0 profiles for a particle + antiparticle mode pair whose
    uniform charge density cancels (omega1 A1^2 = omega2 A2^2); the
    remaining density is smooth with zero mean and zero Nyquist content."""
    w1, kap1 = _spatial_wave(nx, dx, k1)
    w2, kap2 = _spatial_wave(nx, dx, k2)
    om1 = np.sqrt(kap1**2 + m**2)
    om2 = np.sqrt(kap2**2 + m**2)
    a1_amp = amplitude
    a2_amp = amplitude * np.sqrt(om1 / om2)
    phi = a1_amp * w1 + a2_amp * w2
    pi0 = 1j * (om1 * a1_amp * w1 - om2 * a2_amp * w2)
    return phi, pi0


def charge_balanced_initial(nx: int, dx: float, params: ModelParams,
                            k1: int = 1, k2: int = 2, amplitude: float = 0.1,
                            background_amplitude: float = 0.0,
                            solve: bool = True) -> GaugeFieldState:
    """Zero-net-charge coupled initial data with the Gauss constraint solved.

    Component 0 carries a particle + antiparticle mode pair (k1, k2). The
    optional background depends on the model: for N = 1 it is a cosine
    profile on the potential a_1 (the abelian constraint does not couple to
    a_1, so solvability is untouched); for N >= 2 it seeds a second
    balanced matter pair on component 1 at modes (k2+1, k2+2) and the
    potential starts at zero -- a nonzero non-abelian a_1 background can
    obstruct the periodic covariant Gauss problem (covariantly constant
    kernel along the holonomy axis), whereas at a_1 = 0 compatibility
    reduces to Fourier mean conditions that the balanced pairs satisfy
    exactly. The gauge potential then develops dynamically.
    """
    if k1 == k2:
        raise ValueError("modes must differ for a charge-balanced pair")
    state = cauchy_state(nx, dx, params)
    phi0, pi00 = _balanced_pair(nx, dx, params.m, k1, k2, amplitude)
    state.phi[0, :, 0] = phi0
    state.pi[0, :, 0, 0] = pi00
    if background_amplitude != 0.0:
        if params.n == 1:
            x = np.arange(nx) * dx
            prof = background_amplitude * np.cos(2.0 * np.pi * x / (nx * dx))
            state.a[0, :, 1, 0, 0] = prof
        else:
            phi1, pi01 = _balanced_pair(nx, dx, params.m, k2 + 1, k2 + 2,
                                        background_amplitude)
            state.phi[0, :, 1] = phi1
            state.pi[0, :, 0, 1] = pi01
    if solve:
        state = solve_gauss(state, params, t_index=0)
        for t in range(1, state.spec.extents[0]):
            state.p_tri[t] = state.p_tri[0]
    return state


# ---------------------------------------------------------------------------
# dedicated abelian path and the SU(N) -> U(1) comparison

def _step_slice_u1(phi, pi0, a1, p01, dt, dx, params):
    """Scalar-field leapfrog step: the dedicated N = 1 implementation."""
    q, m2 = params.q, params.m**2

    def pi1_up(phi_, a1_):
        return -(central_diff(phi_, 0, dx) - 1j * q * a1_ * phi_)

    def f_phi(phi_, a1_):
        pi1 = pi1_up(phi_, a1_)
        return -m2 * phi_ + 1j * q * a1_ * pi1 - central_diff(pi1, 0, dx)

    def f_p(phi_, a1_):
        pi1 = pi1_up(phi_, a1_)
        return (1j * q * (phi_ * np.conj(pi1) - pi1 * np.conj(phi_))).real

    pi0 = pi0 + 0.5 * dt * f_phi(phi, a1)
    p01 = p01 + 0.5 * dt * f_p(phi, a1)
    phi = phi + dt * pi0
    a1 = a1 - dt * p01
    pi0 = pi0 + 0.5 * dt * f_phi(phi, a1)
    p01 = p01 + 0.5 * dt * f_p(phi, a1)
    return phi, pi0, a1, p01


def evolve_u1(initial: GaugeFieldState, cfg: EvolutionConfig, params: ModelParams
              ) -> GaugeFieldState:
    """Dedicated abelian evolution (scalar arrays throughout); returns the
    trajectory in the common state layout for comparison."""
    _require_1p1(initial.spec)
    if params.n != 1 or initial.n != 1:
        raise ValueError("the dedicated abelian path requires N = 1")
    cfg.validate_against(initial.spec)
    _require_temporal(initial)
    nx = initial.spec.extents[1]
    dx = initial.spec.spacings[1]
    hist_spec = LatticeSpec((cfg.n_steps + 1, nx), (cfg.dt, dx))
    hist = new_state(hist_spec, params)

    phi = initial.phi[0, :, 0].copy()
    pi0 = initial.pi[0, :, 0, 0].copy()
    a1 = initial.a[0, :, 1, 0, 0].real.copy()
    p01 = initial.p_tri[0, :, 0, 0, 0].real.copy()

    def write(i, phi_, pi0_, a1_, p01_):
        hist.phi[i, :, 0] = phi_
        hist.pi[i, :, 0, 0] = pi0_
        hist.pi[i, :, 1, 0] = -(central_diff(phi_, 0, dx) - 1j * params.q * a1_ * phi_)
        hist.a[i, :, 1, 0, 0] = a1_
        hist.p_tri[i, :, 0, 0, 0] = p01_

    write(0, phi, pi0, a1, p01)
    for i in range(cfg.n_steps):
        phi, pi0, a1, p01 = _step_slice_u1(phi, pi0, a1, p01, cfg.dt, dx, params)
        write(i + 1, phi, pi0, a1, p01)
    return hist


@dataclass(frozen=True)
class ReduceReport:
    """Deviation between the N = 1 matrix path and the dedicated scalar path."""

    phi_dev: float
    pi_dev: float
    a_dev: float
    p_dev: float

    @property
    def max_dev(self) -> float:
        return max(self.phi_dev, self.pi_dev, self.a_dev, self.p_dev)


def reduce_to_u1(initial: GaugeFieldState, cfg: EvolutionConfig,
                 params: ModelParams) -> ReduceReport:
    """Evolve identical Cauchy data along both code paths and compare."""
    if params.n != 1:
        raise ValueError("reduction comparison requires N = 1")
    hist_sun, _ = evolve(initial, cfg, params)
    hist_u1 = evolve_u1(initial, cfg, params)
    return ReduceReport(
        phi_dev=float(np.max(np.abs(hist_sun.phi - hist_u1.phi))),
        pi_dev=float(np.max(np.abs(hist_sun.pi - hist_u1.pi))),
        a_dev=float(np.max(np.abs(hist_sun.a - hist_u1.a))),
        p_dev=float(np.max(np.abs(hist_sun.p_tri - hist_u1.p_tri))),
    )
