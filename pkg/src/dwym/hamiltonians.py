"""Covariant Hamiltonian densities, their analytic field-derivatives, and the
Legendre reconstruction of the Lagrangian density.

Index conventions: pi^mu is stored contravariant, a_mu covariant, p^{alpha
beta} contravariant; all contractions of like-placed indices go through the
diagonal metric. Complex fields and their conjugates are independent
differentiation variables (Wirtinger convention).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import ModelParams
from .minkowski import Metric
from .state import GaugeFieldState

IMAG_RESIDUE_TOL = 1e-10


def _real_density(dens: np.ndarray, what: str) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(dens))) if dens.size else 0.0)
    resid = float(np.max(np.abs(dens.imag)))
    if resid > IMAG_RESIDUE_TOL * scale:
        raise ValueError(f"{what} density has imaginary residue {resid:.3e}")
    return dens.real.copy()


def eval_free(state: GaugeFieldState, params: ModelParams) -> np.ndarray:
    """Free density: pibar_alpha pi^alpha + m^2 phibar phi, per site."""
    g = Metric(state.dim).diag
    dens = np.einsum("a,...aj,...aj->...", g, np.conj(state.pi), state.pi)
    dens = dens + params.m**2 * np.einsum("...j,...j->...", np.conj(state.phi), state.phi)
    return _real_density(dens, "free")


def eval_kgm(state: GaugeFieldState, params: ModelParams) -> np.ndarray:
    """Abelian density: Klein-Gordon matter minimally coupled to a 4-potential.

    pibar_a pi^a + i q a_a (pibar^a phi - phibar pi^a) + m^2 phibar phi
    - 1/4 p^{ab} p_{ab}.  Requires N = 1; uses the dedicated scalar path.
    """
    if params.n != 1 or state.n != 1:
        raise ValueError("the abelian density requires internal dimension N = 1")
    g = Metric(state.dim).diag
    phi = state.phi[..., 0]
    pi = state.pi[..., :, 0]
    a = state.a[..., :, 0, 0]
    p = state.p_full()[..., 0, 0]

    dens = np.einsum("a,...a,...a->...", g, np.conj(pi), pi)
    dens = dens + params.m**2 * np.conj(phi) * phi
    bracket = np.conj(pi) * phi[..., None] - np.conj(phi)[..., None] * pi
    dens = dens + 1j * params.q * np.einsum("...a,...a->...", a, bracket)
    p_low = g[:, None] * g[None, :] * p
    dens = dens - 0.25 * np.einsum("...ab,...ab->...", p, p_low)
    return _real_density(dens, "abelian")


def eval_ym(state: GaugeFieldState, params: ModelParams) -> np.ndarray:
    """Non-abelian density with the trace-ordered momentum quadratic term
    p_{JK}^{ab} p_{KJ ab} and the self-coupling p a a contraction."""
    g = Metric(state.dim).diag
    phi, pi, a = state.phi, state.pi, state.a
    p = state.p_full()

    dens = np.einsum("a,...aj,...aj->...", g, np.conj(pi), pi)
    dens = dens + params.m**2 * np.einsum("...j,...j->...", np.conj(phi), phi)
    dens = dens - 0.25 * np.einsum("a,b,...abjk,...abkj->...", g, g, p, p)
    t = np.einsum("...ak,...akj,...j->...", np.conj(pi), a, phi)
    t = t - np.einsum("...k,...akj,...aj->...", np.conj(phi), a, pi)
    t = t - np.einsum("...abjk,...aki,...bij->...", p, a, a)
    dens = dens + 1j * params.q * t
    return _real_density(dens, "non-abelian")


_EVALS = {"free": eval_free, "kgm": eval_kgm, "ym": eval_ym}


def eval_density(state: GaugeFieldState, params: ModelParams, which: str) -> np.ndarray:
    try:
        return _EVALS[which](state, params)
    except KeyError:
        raise ValueError(f"unknown density {which!r}") from None


@dataclass
class MatterGradients:
    """Analytic partials of a density w.r.t. the matter sector.

    d_phi[..., J]       dH / d phi_J
    d_phibar[..., J]    dH / d phibar_J
    d_pi[..., mu, J]    dH / d pi_J^mu      (covariant result)
    d_pibar[..., mu, J] dH / d pibar_J^mu   (covariant result; this is the
                                             reconstructed velocity d_mu phi_J)
    """

    d_phi: np.ndarray
    d_phibar: np.ndarray
    d_pi: np.ndarray
    d_pibar: np.ndarray


def grad_matter(state: GaugeFieldState, params: ModelParams,
                which: str = "ym") -> MatterGradients:
    if which not in _EVALS:
        raise ValueError(f"unknown density {which!r}")
    if which == "kgm" and state.n != 1:
        raise ValueError("the abelian density requires internal dimension N = 1")
    g = Metric(state.dim).diag
    phi, pi, a = state.phi, state.pi, state.a
    m2, q = params.m**2, params.q

    d_phi = m2 * np.conj(phi)
    d_phibar = m2 * phi.copy()
    d_pi = g[:, None] * np.conj(pi)
    d_pibar = g[:, None] * pi
    if which != "free":
        d_phi = d_phi + 1j * q * np.einsum("...ak,...akj->...j", np.conj(pi), a)
        d_phibar = d_phibar - 1j * q * np.einsum("...ajk,...ak->...j", a, pi)
        d_pi = d_pi - 1j * q * np.einsum("...k,...akj->...aj", np.conj(phi), a)
        d_pibar = d_pibar + 1j * q * np.einsum("...ajk,...k->...aj", a, phi)
    return MatterGradients(d_phi, d_phibar, d_pi, d_pibar)


def legendre_lagrangian(state: GaugeFieldState, params: ModelParams,
                        which: str = "ym") -> np.ndarray:
    """Lagrangian density reconstructed from the canonical velocities.

    L = sum_J [ pibar_J^a (dH/dpibar_J^a) + (dH/dpi_J^a) pi_J^a ]
        + sum p . (dH/dp)  -  H,
    with velocities taken from the analytic momentum-derivatives of the
    selected density. Valid off-shell as an evaluation (the reconstructed
    velocities then differ from actual field derivatives).
    """
    grads = grad_matter(state, params, which)
    matter = np.einsum("...aj,...aj->...", np.conj(state.pi), grads.d_pibar)
    lag = 2.0 * matter.real
    if which != "free":
        g = Metric(state.dim).diag
        p = state.p_full()
        pp_low = np.einsum("a,b,...abjk,...abkj->...", g, g, p, p)
        lag = lag - 0.5 * pp_low.real
        if which == "ym":
            paa = np.einsum("...abjk,...aki,...bij->...", p, state.a, state.a)
            lag = lag - (1j * params.q * paa).real
    return lag - eval_density(state, params, which)


def slice_sum(density: np.ndarray, state: GaugeFieldState, t_index: int) -> float:
    """Sum of a per-site density over one time slice, times spatial cell volume."""
    nt = state.spec.extents[0]
    if not -nt <= t_index < nt:
        raise ValueError(f"time slice {t_index} out of range for extent {nt}")
    return float(np.sum(density[t_index]) * state.spec.spatial_cell_volume)
