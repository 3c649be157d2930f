"""Finite and infinitesimal local gauge transformations, and form-invariance
verification of the Hamiltonian density.

A gauge function carries its symmetry parameter per site (a real phase
field for the abelian case, generator coefficients for SU(N)/U(N)) and,
optionally, its analytic derivative. Transformations can consume either the
analytic derivative or the lattice stencil derivative; the difference
between the two is exactly the O(spacing^2) content that the
form-invariance defect measures.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonians import _real_density, eval_kgm, eval_ym
from .lattice import LatticeSpec, ModelParams
from .linalg import antiherm_part, herm_part, is_unitary, mat_exp_i, mat_exp_i_dexp, sun_basis
from .state import FourierCoeffs, GaugeFieldState, random_fourier_coeffs
from .stencils import central_diff, grad


class GaugeError(RuntimeError):
    """Invalid gauge transformation request (singular rule, bad generator)."""


def _resolve_mode(mode: str, has_analytic: bool) -> str:
    if mode == "auto":
        return "analytic" if has_analytic else "stencil"
    if mode not in ("analytic", "stencil"):
        raise ValueError(f"unknown gradient mode {mode!r}")
    return mode


@dataclass
class U1GaugeFunction:
    """Local phase parameter Lambda(x), optionally with analytic gradient."""

    values: np.ndarray                 # (*ext,) real
    grad: np.ndarray | None = None     # (*ext, D) real

    @property
    def has_analytic(self) -> bool:
        return self.grad is not None

    def gradient(self, spec: LatticeSpec, mode: str = "auto") -> np.ndarray:
        mode = _resolve_mode(mode, self.has_analytic)
        if mode == "analytic":
            if self.grad is None:
                raise GaugeError("no analytic gradient attached to this gauge function")
            return self.grad
        return grad(self.values, spec.spacings)

    def scaled(self, eps: float) -> "U1GaugeFunction":
        return U1GaugeFunction(
            eps * self.values, None if self.grad is None else eps * self.grad
        )

    @classmethod
    def constant(cls, spec: LatticeSpec, value: float) -> "U1GaugeFunction":
        return cls(np.full(spec.extents, float(value)),
                   np.zeros((*spec.extents, spec.dim)))

    @classmethod
    def from_coeffs(cls, coeffs: FourierCoeffs, spec: LatticeSpec,
                    with_gradient: bool = True) -> "U1GaugeFunction":
        values = coeffs.evaluate(spec).real
        g = coeffs.gradient(spec).real if with_gradient else None
        return cls(values, g)

    @classmethod
    def smooth_random(cls, spec: LatticeSpec, rng: np.random.Generator,
                      amplitude: float = 0.5, max_mode: int = 3,
                      with_gradient: bool = True, max_modes=None) -> "U1GaugeFunction":
        coeffs = random_fourier_coeffs(rng, spec.dim, (), amplitude, max_mode, max_modes)
        return cls.from_coeffs(coeffs, spec, with_gradient)


@dataclass
class SUNGaugeFunction:
    """Local SU(N)/U(N) parameter: theta^a(x) over a Hermitian generator basis.

    u(x) = exp(i theta.T) is the finite transformation matrix; theta.T is
    the Hermitian generator field of the infinitesimal transformation.
    from_unitary() bypasses the generator parametrization (used for
    composition checks); infinitesimal operations are unavailable there.
    """

    theta: np.ndarray | None                 # (*ext, G) real
    basis: np.ndarray | None                 # (G, N, N) Hermitian
    grad_theta: np.ndarray | None = None     # (*ext, D, G) real
    u_field: np.ndarray | None = None        # direct-unitary mode
    du_field: np.ndarray | None = None       # (*ext, D, N, N)

    @property
    def n(self) -> int:
        if self.basis is not None:
            return self.basis.shape[-1]
        return self.u_field.shape[-1]

    @property
    def has_analytic(self) -> bool:
        if self.u_field is not None:
            return self.du_field is not None
        return self.grad_theta is not None

    def generator(self) -> np.ndarray:
        """Hermitian field h = theta^a T_a driving the infinitesimal rules."""
        if self.theta is None:
            raise GaugeError("gauge function in direct-unitary mode has no generator field")
        return np.einsum("...g,gjk->...jk", self.theta, self.basis)

    def generator_gradient(self, spec: LatticeSpec, mode: str = "auto") -> np.ndarray:
        mode = _resolve_mode(mode, self.grad_theta is not None)
        if mode == "analytic":
            if self.grad_theta is None:
                raise GaugeError("no analytic gradient attached to this gauge function")
            return np.einsum("...ag,gjk->...ajk", self.grad_theta, self.basis)
        return grad(self.generator(), spec.spacings)

    def unitary(self) -> np.ndarray:
        if self.u_field is not None:
            return self.u_field
        return mat_exp_i(self.generator())

    def unitary_gradient(self, spec: LatticeSpec, mode: str = "auto") -> np.ndarray:
        """d_mu u, either exact (via the exponential-map derivative) or stencil."""
        mode = _resolve_mode(mode, self.has_analytic)
        if self.u_field is not None:
            if mode == "analytic":
                if self.du_field is None:
                    raise GaugeError("no analytic derivative attached to this gauge function")
                return self.du_field
            return grad(self.u_field, spec.spacings)
        if mode == "stencil":
            return grad(self.unitary(), spec.spacings)
        h = self.generator()
        dh = self.generator_gradient(spec, "analytic")
        parts = [mat_exp_i_dexp(h, dh[..., mu, :, :]) for mu in range(spec.dim)]
        return np.stack(parts, axis=len(spec.extents))

    def scaled(self, eps: float) -> "SUNGaugeFunction":
        if self.theta is None:
            raise GaugeError("cannot scale a direct-unitary gauge function")
        return SUNGaugeFunction(
            eps * self.theta, self.basis,
            None if self.grad_theta is None else eps * self.grad_theta,
        )

    @classmethod
    def from_unitary(cls, u: np.ndarray, du: np.ndarray | None = None) -> "SUNGaugeFunction":
        return cls(None, None, None, u, du)

    def compose(self, other: "SUNGaugeFunction", spec: LatticeSpec,
                mode: str = "auto") -> "SUNGaugeFunction":
        """Pointwise product transformation u = u_self u_other."""
        u1, u2 = other.unitary(), self.unitary()
        du = None
        if mode != "stencil" and self.has_analytic and other.has_analytic:
            du1 = other.unitary_gradient(spec, "analytic")
            du2 = self.unitary_gradient(spec, "analytic")
            du = np.einsum("...ajk,...kl->...ajl", du2, u1) + \
                np.einsum("...jk,...akl->...ajl", u2, du1)
        return SUNGaugeFunction.from_unitary(u2 @ u1, du)

    @classmethod
    def constant(cls, spec: LatticeSpec, theta_vec, n: int,
                 include_identity: bool = False) -> "SUNGaugeFunction":
        basis = sun_basis(n, include_identity)
        theta_vec = np.asarray(theta_vec, dtype=float)
        if theta_vec.shape != (len(basis),):
            raise ValueError(f"theta vector must have {len(basis)} components")
        theta = np.broadcast_to(theta_vec, (*spec.extents, len(basis))).copy()
        gradt = np.zeros((*spec.extents, spec.dim, len(basis)))
        return cls(theta, basis, gradt)

    @classmethod
    def from_coeffs(cls, coeffs: FourierCoeffs, spec: LatticeSpec, n: int,
                    include_identity: bool = False,
                    with_gradient: bool = True) -> "SUNGaugeFunction":
        basis = sun_basis(n, include_identity)
        theta = coeffs.evaluate(spec).real
        gradt = coeffs.gradient(spec).real if with_gradient else None
        return cls(theta, basis, gradt)

    @classmethod
    def smooth_random(cls, spec: LatticeSpec, n: int, rng: np.random.Generator,
                      amplitude: float = 0.5, max_mode: int = 3,
                      include_identity: bool = False, with_gradient: bool = True,
                      max_modes=None) -> "SUNGaugeFunction":
        basis = sun_basis(n, include_identity)
        coeffs = random_fourier_coeffs(
            rng, spec.dim, (len(basis),), amplitude, max_mode, max_modes
        )
        return cls.from_coeffs(coeffs, spec, n, include_identity, with_gradient)


def _check_coupling(q: float, derivative: np.ndarray, what: str) -> None:
    if q == 0.0 and float(np.max(np.abs(derivative))) > 1e-14:
        raise GaugeError(
            f"the gauge-potential rule is singular at q = 0 for a nonconstant {what}"
        )


def apply_u1(state: GaugeFieldState, gf: U1GaugeFunction, params: ModelParams,
             gradient_mode: str = "auto") -> GaugeFieldState:
    """Finite abelian transformation:

    Phi = phi e^{i Lambda}, Pi^mu = pi^mu e^{i Lambda},
    A_mu = a_mu + (1/q) d_mu Lambda, P^{mu nu} = p^{mu nu}.
    """
    if state.n != 1:
        raise GaugeError("abelian transformation requires internal dimension N = 1")
    g = gf.gradient(state.spec, gradient_mode)
    _check_coupling(params.q, g, "Lambda")
    out = state.copy()
    phase = np.exp(1j * gf.values)
    out.phi = state.phi * phase[..., None]
    out.pi = state.pi * phase[..., None, None]
    if params.q != 0.0:
        out.a = state.a + (g / params.q)[..., None, None]
    return out


def apply_sun(state: GaugeFieldState, gf: SUNGaugeFunction, params: ModelParams,
              gradient_mode: str = "auto") -> GaugeFieldState:
    """Finite SU(N)/U(N) transformation:

    Phi = u phi, Pi^mu = u pi^mu,
    A_mu = u a_mu u^dag + (1/iq) (d_mu u) u^dag, P^{ab} = u p^{ab} u^dag.

    The inhomogeneous term is projected onto its anti-Hermitian part before
    dividing by iq: (d u) u^dag is anti-Hermitian in the continuum, and the
    projection removes the O(spacing^2) Hermiticity defect of the stencil
    derivative without changing the convergence order.
    """
    if gf.n != state.n:
        raise GaugeError(f"gauge function order {gf.n} does not match state N = {state.n}")
    u = gf.unitary()
    if not is_unitary(u):
        raise GaugeError("transformation matrix field is not unitary within 1e-10")
    du = gf.unitary_gradient(state.spec, gradient_mode)
    _check_coupling(params.q, du, "u")
    out = state.copy()
    out.phi = np.einsum("...jk,...k->...j", u, state.phi)
    out.pi = np.einsum("...jk,...ak->...aj", u, state.pi)
    ua_udag = np.einsum("...jk,...akl,...ml->...ajm", u, state.a, np.conj(u))
    if params.q != 0.0:
        w = np.einsum("...ajk,...lk->...ajl", du, np.conj(u))
        ua_udag = ua_udag + antiherm_part(w) / (1j * params.q)
    out.a = herm_part(ua_udag)
    out.p_tri = np.einsum("...jk,...tkl,...ml->...tjm", u, state.p_tri, np.conj(u))
    return out


def apply_gauge(state: GaugeFieldState, gf, params: ModelParams,
                gradient_mode: str = "auto") -> GaugeFieldState:
    """Dispatch on the gauge-function flavor."""
    if isinstance(gf, U1GaugeFunction):
        return apply_u1(state, gf, params, gradient_mode)
    return apply_sun(state, gf, params, gradient_mode)


def apply_infinitesimal(state: GaugeFieldState, gf, eps: float, params: ModelParams,
                        gradient_mode: str = "auto") -> GaugeFieldState:
    """First-order transformation at parameter eps.

    Abelian:  d phi = i eps Lambda phi, d pi = i eps Lambda pi,
              d a_mu = (eps/q) d_mu Lambda, d p = 0.
    SU(N):    d phi = i eps h phi, d pi = i eps h pi,
              d a_mu = i eps [h, a_mu] + (eps/q) d_mu h,
              d p^{ab} = i eps [h, p^{ab}],
    with h the Hermitian generator field. Matches the finite rules at
    gf.scaled(eps) up to O(eps^2).
    """
    out = state.copy()
    if isinstance(gf, U1GaugeFunction):
        if state.n != 1:
            raise GaugeError("abelian transformation requires internal dimension N = 1")
        g = gf.gradient(state.spec, gradient_mode)
        _check_coupling(params.q, g, "Lambda")
        lam = gf.values[..., None]
        out.phi = state.phi + 1j * eps * lam * state.phi
        out.pi = state.pi + 1j * eps * lam[..., None] * state.pi
        if params.q != 0.0:
            out.a = state.a + (eps / params.q) * g[..., None, None]
        return out
    if gf.n != state.n:
        raise GaugeError(f"gauge function order {gf.n} does not match state N = {state.n}")
    h = gf.generator()
    dh = gf.generator_gradient(state.spec, gradient_mode)
    _check_coupling(params.q, dh, "u")
    out.phi = state.phi + 1j * eps * np.einsum("...jk,...k->...j", h, state.phi)
    out.pi = state.pi + 1j * eps * np.einsum("...jk,...ak->...aj", h, state.pi)
    comm_a = np.einsum("...jk,...akl->...ajl", h, state.a) \
        - np.einsum("...ajk,...kl->...ajl", state.a, h)
    out.a = state.a + 1j * eps * comm_a
    if params.q != 0.0:
        out.a = out.a + (eps / params.q) * dh
    comm_p = np.einsum("...jk,...tkl->...tjl", h, state.p_tri) \
        - np.einsum("...tjk,...kl->...tjl", state.p_tri, h)
    out.p_tri = state.p_tri + 1j * eps * comm_p
    return out


def _coupling_density(state: GaugeFieldState, params: ModelParams) -> np.ndarray:
    """iq (pibar^a a_a phi - phibar a_a pi^a - p^{ab} a_a a_b), per site."""
    t = np.einsum("...ak,...akj,...j->...", np.conj(state.pi), state.a, state.phi)
    t = t - np.einsum("...k,...akj,...aj->...", np.conj(state.phi), state.a, state.pi)
    p = state.p_full()
    t = t - np.einsum("...abjk,...aki,...bij->...", p, state.a, state.a)
    return 1j * params.q * t


def delta_h_explicit(state: GaugeFieldState, gf, params: ModelParams,
                     gradient_mode: str = "auto") -> np.ndarray:
    """Change of the Hamiltonian density from the explicit space-time
    dependence of the transformation, in closed form.

    Abelian: i (pibar^a phi - phibar pi^a) d_a Lambda.
    SU(N): the coupling terms evaluated in the new variables minus the same
    terms in the old variables (the kinetic, mass and momentum-quadratic
    parts cancel identically under the unitary rules).
    """
    if isinstance(gf, U1GaugeFunction):
        if state.n != 1:
            raise GaugeError("abelian transformation requires internal dimension N = 1")
        g = gf.gradient(state.spec, gradient_mode)
        phi = state.phi[..., 0]
        pi = state.pi[..., :, 0]
        bracket = np.conj(pi) * phi[..., None] - np.conj(phi)[..., None] * pi
        dens = 1j * np.einsum("...a,...a->...", bracket, g)
        return _real_density(dens, "explicit-change")
    transformed = apply_sun(state, gf, params, gradient_mode)
    dens = _coupling_density(transformed, params) - _coupling_density(state, params)
    return _real_density(dens, "explicit-change")


@dataclass(frozen=True)
class FormInvarianceResult:
    """Outcome of a form-invariance check.

    defect: max |H(transformed) - H(original) - dH_explicit| over sites,
    with dH_explicit built from the original fields and the gauge
    function's own (analytic where available) derivative.
    skew_residual: max | p^{ab} d_b d_a (gauge parameter) | assembled with
    stencil second derivatives; vanishes to rounding by skew-symmetry.
    """

    defect: float
    skew_residual: float


def _old_variable_delta_u1(state: GaugeFieldState, grad_lam: np.ndarray) -> np.ndarray:
    phi = state.phi[..., 0]
    pi = state.pi[..., :, 0]
    bracket = np.conj(pi) * phi[..., None] - np.conj(phi)[..., None] * pi
    return _real_density(1j * np.einsum("...a,...a->...", bracket, grad_lam),
                         "explicit-change")


def _old_variable_delta_sun(state: GaugeFieldState, u: np.ndarray, du: np.ndarray,
                            params: ModelParams) -> np.ndarray:
    """iq [ pibar w phi - phibar w pi - tr p (a w + w a + w w) ],
    w_mu = (1/iq) u^dag d_mu u."""
    if params.q == 0.0:
        # at zero coupling only constant u is admissible (global symmetry),
        # for which the explicit change vanishes identically
        _check_coupling(params.q, du, "u")
        return np.zeros(state.spec.extents)
    w = np.einsum("...kj,...akl->...ajl", np.conj(u), du) / (1j * params.q)
    t = np.einsum("...ak,...akj,...j->...", np.conj(state.pi), w, state.phi)
    t = t - np.einsum("...k,...akj,...aj->...", np.conj(state.phi), w, state.pi)
    p = state.p_full()
    t = t - np.einsum("...abjk,...aki,...bij->...", p, state.a, w)
    t = t - np.einsum("...abjk,...aki,...bij->...", p, w, state.a)
    t = t - np.einsum("...abjk,...aki,...bij->...", p, w, w)
    return _real_density(1j * params.q * t, "explicit-change")


def explicit_change(state: GaugeFieldState, gf, params: ModelParams,
                    derivative_mode: str = "auto") -> np.ndarray:
    """Old-variable closed form of the explicit Hamiltonian change.

    Unlike :func:`delta_h_explicit` this never touches the transformed
    fields: it combines the original state with the gauge function's
    derivative only, so comparing it against the actually-applied
    transformation probes how well the lattice transformation realizes the
    continuum symmetry.
    """
    if isinstance(gf, U1GaugeFunction):
        if state.n != 1:
            raise GaugeError("abelian transformation requires internal dimension N = 1")
        return _old_variable_delta_u1(state, gf.gradient(state.spec, derivative_mode))
    u = gf.unitary()
    du = gf.unitary_gradient(state.spec, derivative_mode)
    return _old_variable_delta_sun(state, u, du, params)


def _second_derivatives(f: np.ndarray, spec: LatticeSpec) -> np.ndarray:
    """Stencil d_mu d_alpha f, direction axes inserted after the lattice axes."""
    d = spec.dim
    first = [central_diff(f, al, spec.spacings[al]) for al in range(d)]
    rows = []
    for mu in range(d):
        rows.append(np.stack(
            [central_diff(first[al], mu, spec.spacings[mu]) for al in range(d)],
            axis=d,
        ))
    return np.stack(rows, axis=d)  # (*ext, mu, alpha, ...)


def check_form_invariance(state: GaugeFieldState, gf, params: ModelParams,
                          transform_gradient: str = "auto") -> FormInvarianceResult:
    """Verify that the transformed Hamiltonian keeps its functional form.

    The transformation is applied with `transform_gradient` ('stencil'
    forces the lattice-derivative path even when an analytic derivative is
    attached); the explicit change is always evaluated from the gauge
    function's best available derivative. With analytic derivatives on both
    sides the defect is pure rounding; with a stencil transformation it
    measures the O(spacing^2) accuracy of the discrete symmetry.
    """
    spec = state.spec
    evaluate = eval_kgm if (state.n == 1 and isinstance(gf, U1GaugeFunction)) else eval_ym
    transformed = apply_gauge(state, gf, params, transform_gradient)
    dh = explicit_change(state, gf, params, "auto")
    if isinstance(gf, U1GaugeFunction):
        dd = _second_derivatives(gf.values, spec)
    else:
        dd = _second_derivatives(gf.unitary(), spec)
    defect = float(np.max(np.abs(evaluate(transformed, params) - evaluate(state, params) - dh)))

    p = state.p_full()
    if isinstance(gf, U1GaugeFunction):
        skew = np.einsum("...amjk,...ma->...jk", p, dd)
    else:
        skew = np.einsum("...amjl,...malk->...jk", p, dd)
    skew_residual = float(np.max(np.abs(skew)))
    return FormInvarianceResult(defect=defect, skew_residual=skew_residual)
