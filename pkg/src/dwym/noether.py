"""Noether currents of the abelian and SU(N) theories, discrete divergences,
the gauge-field equations they imply, and the divergence decomposition into
equation-of-motion residuals.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonians import _real_density
from .lattice import LatticeSpec, ModelParams
from .state import GaugeFieldState
from .stencils import central_diff, grad


def u1_matter_current(state: GaugeFieldState, params: ModelParams) -> np.ndarray:
    """j1^mu = i q (pibar^mu phi - phibar pi^mu); real, shape (*ext, D)."""
    if state.n != 1:
        raise ValueError("the abelian matter current requires N = 1")
    phi = state.phi[..., 0]
    pi = state.pi[..., :, 0]
    bracket = np.conj(pi) * phi[..., None] - np.conj(phi)[..., None] * pi
    return _real_density(1j * params.q * bracket, "abelian current")


def u1_current(state: GaugeFieldState, gf, params: ModelParams,
               gradient_mode: str = "auto") -> np.ndarray:
    """Full abelian Noether current j^mu = j1^mu Lambda + p^{beta mu} d_beta Lambda."""
    if state.n != 1:
        raise ValueError("the abelian Noether current requires N = 1")
    j1 = u1_matter_current(state, params)
    g = gf.gradient(state.spec, gradient_mode)
    p = state.p_full()[..., 0, 0]
    j = j1 * gf.values[..., None] + np.einsum("...bm,...b->...m", p, g)
    return _real_density(j, "abelian Noether current")


def gauge_current_bracket(state: GaugeFieldState) -> np.ndarray:
    """j^mu_{JK} / (iq): phi_J pibar_K^mu - pi_J^mu phibar_K + [a_alpha, p^{alpha mu}]_{JK}.

    Computed without the iq prefactor so that q = 0 states remain usable.
    Shape (*ext, D, N, N).
    """
    m = np.einsum("...j,...ak->...ajk", state.phi, np.conj(state.pi))
    m = m - np.einsum("...aj,...k->...ajk", state.pi, np.conj(state.phi))
    p = state.p_full()
    m = m + np.einsum("...ajl,...amlk->...mjk", state.a, p)
    m = m - np.einsum("...amjl,...alk->...mjk", p, state.a)
    return m


def sun_gauge_current(state: GaugeFieldState, params: ModelParams) -> np.ndarray:
    """Matrix-valued gauge current j^mu_{JK}, Hermitian in (J, K).

    For N = 1 the commutator part vanishes identically and j^mu_{11}
    reduces to the abelian matter current.
    """
    return 1j * params.q * gauge_current_bracket(state)


def sun_current(state: GaugeFieldState, gf, params: ModelParams,
                gradient_mode: str = "auto") -> np.ndarray:
    """Scalar SU(N) Noether current (the generator field traced in):

    j^mu = iq [ pibar_K^mu h_{KJ} phi_J - phibar_K h_{KJ} pi_J^mu
                + p_{JK}^{alpha mu} (h a - a h + (1/iq) d h)_{KJ alpha} ].
    """
    h = gf.generator()
    dh = gf.generator_gradient(state.spec, gradient_mode)
    t = np.einsum("...ak,...kj,...j->...a", np.conj(state.pi), h, state.phi)
    t = t - np.einsum("...k,...kj,...aj->...a", np.conj(state.phi), h, state.pi)
    inner = np.einsum("...kl,...alj->...akj", h, state.a) \
        - np.einsum("...akl,...lj->...akj", state.a, h)
    j = 1j * params.q * t
    p = state.p_full()
    j = j + 1j * params.q * np.einsum("...abjk,...akj->...b", p, inner)
    j = j + np.einsum("...abjk,...akj->...b", p, dh)
    return _real_density(j, "SU(N) Noether current")


def divergence(j: np.ndarray, spec: LatticeSpec) -> np.ndarray:
    """Discrete d_mu j^mu with the centered periodic stencil.

    The direction axis of `j` must sit right after the lattice axes; any
    trailing component axes (matrix-valued currents) are differentiated
    entrywise.
    """
    d = spec.dim
    lead = (slice(None),) * d
    out = None
    for mu in range(d):
        comp = j[lead + (mu,)]
        term = central_diff(comp, mu, spec.spacings[mu])
        out = term if out is None else out + term
    return out


def total_charge(j: np.ndarray, spec: LatticeSpec, t_index: int):
    """Spatial integral of j^0 over one time slice.

    Returns a float for scalar currents and an (N, N) matrix for
    matrix-valued ones.
    """
    nt = spec.extents[0]
    if not -nt <= t_index < nt:
        raise ValueError(f"time slice {t_index} out of range for extent {nt}")
    j0 = j[(slice(None),) * spec.dim + (0,)][t_index]
    q = np.sum(j0.reshape(-1, *j0.shape[spec.dim - 1:]), axis=0) * spec.spatial_cell_volume
    if q.ndim == 0:
        return float(q.real) if np.isrealobj(j) else complex(q)
    return q


def p_divergence(state: GaugeFieldState) -> np.ndarray:
    """d_alpha p^{alpha mu}, shape (*ext, D, N, N)."""
    spec = state.spec
    p = state.p_full()
    d = spec.dim
    out = np.zeros((*spec.extents, d, state.n, state.n), dtype=complex)
    for mu in range(d):
        for al in range(d):
            out[..., mu, :, :] += central_diff(
                p[..., al, mu, :, :], al, spec.spacings[al]
            )
    return out


def maxwell_residual(state: GaugeFieldState, params: ModelParams) -> np.ndarray:
    """R^mu = d_alpha p^{alpha mu} - j^mu; zero (to O(spacing^2)) on states
    satisfying the inhomogeneous field equation."""
    return p_divergence(state) - sun_gauge_current(state, params)


def double_divergence(state: GaugeFieldState) -> np.ndarray:
    """d_beta d_alpha p^{alpha beta}, assembled discretely.

    Vanishes to rounding for any state: the stencils commute while p is
    exactly antisymmetric by storage.
    """
    spec = state.spec
    p = state.p_full()
    d = spec.dim
    out = np.zeros((*spec.extents, state.n, state.n), dtype=complex)
    for al in range(d):
        for be in range(d):
            inner = central_diff(p[..., al, be, :, :], al, spec.spacings[al])
            out += central_diff(inner, be, spec.spacings[be])
    return out


def field_strength_lowered(a: np.ndarray, spec: LatticeSpec, q: float) -> np.ndarray:
    """F_{beta alpha} = d_beta a_alpha - d_alpha a_beta + iq(a_alpha a_beta - a_beta a_alpha),
    from the stencil derivative of the potentials. Shape (*ext, D, D, N, N),
    exactly antisymmetric in (beta, alpha); the commutator vanishes
    identically for N = 1.
    """
    d = spec.dim
    n = a.shape[-1]
    da = np.stack([central_diff(a, mu, spec.spacings[mu]) for mu in range(d)],
                  axis=len(spec.extents))  # (*ext, beta, alpha, N, N)
    out = np.zeros((*spec.extents, d, d, n, n), dtype=complex)
    for be in range(d):
        for al in range(d):
            if al == be:
                continue
            term = da[..., be, al, :, :] - da[..., al, be, :, :]
            comm = a[..., al, :, :] @ a[..., be, :, :] - a[..., be, :, :] @ a[..., al, :, :]
            out[..., be, al, :, :] = term + 1j * q * comm
    return out


@dataclass(frozen=True)
class DecompositionResult:
    """Two evaluations of the (iq-stripped) gauge-current divergence.

    direct:     d_beta [ j^beta_{JK} / (iq) ] by the lattice stencil.
    decomposed: equation-of-motion residual bilinears plus the
                field-strength bracket terms and the gauge-residual
                commutator that closes the identity off-shell.
    They agree within O(spacing^2) for arbitrary states; on-shell both
    vanish at the same order.
    """

    direct: np.ndarray
    decomposed: np.ndarray

    @property
    def identity_residual(self) -> float:
        return float(np.max(np.abs(self.direct - self.decomposed)))

    @property
    def max_direct(self) -> float:
        return float(np.max(np.abs(self.direct)))

    @property
    def max_decomposed(self) -> float:
        return float(np.max(np.abs(self.decomposed)))


def onshell_decomposition(state: GaugeFieldState, params: ModelParams) -> DecompositionResult:
    """Evaluate the gauge-current divergence two ways.

    The decomposed side contracts the amended-canonical-equation residuals

        r1_{J alpha} = d_alpha phi_J - iq (a_alpha phi)_J
        r4_J         = d_alpha pi_J^alpha - iq (a_alpha pi^alpha)_J

    (and their conjugates) with the momenta/fields, adds the two
    (1/2) [field-strength bracket] p terms, and subtracts the commutator
    [a_alpha, R^alpha] of the potential with the field-equation residual;
    the last term vanishes on-shell and is what makes the identity with the
    direct divergence hold algebraically for any state.
    """
    spec = state.spec
    q = params.q
    phi, pi, a = state.phi, state.pi, state.a
    p = state.p_full()

    direct = divergence(gauge_current_bracket(state), spec)

    r1 = grad(phi, spec.spacings) - 1j * q * np.einsum("...ajk,...k->...aj", a, phi)
    div_pi = np.zeros_like(phi)
    for mu in range(spec.dim):
        div_pi += central_diff(pi[..., mu, :], mu, spec.spacings[mu])
    r4 = div_pi - 1j * q * np.einsum("...ajk,...ak->...j", a, pi)

    term = np.einsum("...aj,...ak->...jk", r1, np.conj(pi))
    term = term - np.einsum("...aj,...ak->...jk", pi, np.conj(r1))
    term = term + np.einsum("...j,...k->...jk", phi, np.conj(r4))
    term = term - np.einsum("...j,...k->...jk", r4, np.conj(phi))

    f = field_strength_lowered(a, spec, q)
    term = term + 0.5 * np.einsum("...bajl,...ablk->...jk", f, p)
    term = term - 0.5 * np.einsum("...abjl,...balk->...jk", p, f)

    resid = p_divergence(state) - 1j * q * gauge_current_bracket(state)
    comm = np.einsum("...ajl,...alk->...jk", a, resid) \
        - np.einsum("...ajl,...alk->...jk", resid, a)
    decomposed = term - comm

    return DecompositionResult(direct=direct, decomposed=decomposed)
