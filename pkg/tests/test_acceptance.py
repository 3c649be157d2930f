"""Acceptance suite: every criterion at its stated tolerance, one pass/fail
line per criterion (run with -s to see the lines as they pass).

Desk scale throughout: 1+1 dimensional lattices, 64..256 sites, N <= 3.
"""
import numpy as np
import pytest

from dwym import (EvolutionConfig, LatticeSpec, ModelParams, SUNGaugeFunction,
                  U1GaugeFunction, apply_infinitesimal, apply_sun, apply_u1,
                  charge_balanced_initial, check_form_invariance, delta_h_explicit,
                  double_divergence, eval_free, eval_kgm, eval_ym, evolve,
                  field_strength, free_wave_initial, maxwell_residual,
                  onshell_decomposition, reduce_to_u1, snapshot_read,
                  snapshot_write, step_cauchy, sun_gauge_current, u1_current,
                  u1_matter_current)
from dwym.cli import main as cli_main
from dwym.convergence import measured_order
from dwym.linalg import is_hermitian
from dwym.minkowski import Metric
from dwym.noether import divergence, gauge_current_bracket
from dwym.state import (random_fourier_coeffs, random_state, smooth_state_coeffs)

SEED = 20240817
ORDER_GATE = 1.8
COARSE = LatticeSpec((64, 64), (0.25, 0.25))
FINE = COARSE.refine()


def announce(criterion, ok, detail):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def _invariance_orders(model_n, n_samples=20):
    params = ModelParams(n=model_n, q=0.5, m=1.0)
    rng = np.random.default_rng(SEED)
    orders = []
    for _ in range(n_samples):
        state_c = smooth_state_coeffs(rng, 2, model_n, amplitude=0.5, max_mode=2)
        defects = []
        if model_n == 1:
            gf_c = random_fourier_coeffs(rng, 2, (), 0.5, 3)
        else:
            gf_c = random_fourier_coeffs(rng, 2, (model_n**2 - 1,), 0.5, 3)
        for spec in (COARSE, FINE):
            s = state_c.realize(spec, params)
            if model_n == 1:
                gf = U1GaugeFunction.from_coeffs(gf_c, spec)
            else:
                gf = SUNGaugeFunction.from_coeffs(gf_c, spec, model_n)
            defects.append(
                check_form_invariance(s, gf, params, transform_gradient="stencil").defect
            )
        orders.append(measured_order(defects[0], defects[1]))
    return orders


def test_criterion_01_form_invariance_u1():
    params = ModelParams(n=1, q=0.5, m=1.0)
    orders = _invariance_orders(1)
    rng = np.random.default_rng(SEED + 1)
    s = smooth_state_coeffs(rng, 2, 1, amplitude=0.5).realize(COARSE, params)
    analytic = check_form_invariance(
        s, U1GaugeFunction.smooth_random(COARSE, rng, 0.5), params,
        transform_gradient="analytic").defect
    constant = check_form_invariance(
        s, U1GaugeFunction.constant(COARSE, 1.2), params).defect
    ok = min(orders) >= ORDER_GATE and analytic < 1e-10 and constant < 1e-10
    announce(1, ok,
             f"U(1) form invariance: min order {min(orders):.2f} over 20 gauge "
             f"functions (gate {ORDER_GATE}); analytic defect {analytic:.1e}, "
             f"constant defect {constant:.1e} (gates < 1e-10)")


@pytest.mark.parametrize("n", [2, 3])
def test_criterion_02_form_invariance_sun(n):
    params = ModelParams(n=n, q=0.5, m=1.0)
    orders = _invariance_orders(n)
    rng = np.random.default_rng(SEED + 2)
    s = smooth_state_coeffs(rng, 2, n, amplitude=0.5).realize(COARSE, params)
    gf = SUNGaugeFunction.smooth_random(COARSE, n, rng, 0.5)
    # the closed-form explicit change (new/old variable four-term bracket)
    # reproduces the direct density difference
    four_term = delta_h_explicit(s, gf, params)
    direct = eval_ym(apply_sun(s, gf, params), params) - eval_ym(s, params)
    four_term_dev = float(np.max(np.abs(four_term - direct)))
    constant = check_form_invariance(
        s, SUNGaugeFunction.constant(COARSE, 0.3 * np.ones(n**2 - 1), n), params).defect
    ok = (min(orders) >= ORDER_GATE and constant < 1e-10 and four_term_dev < 1e-10)
    announce(2, ok,
             f"SU({n}) form invariance: min order {min(orders):.2f} over 20 "
             f"gauge functions; constant-u defect {constant:.1e}; four-term "
             f"closed form vs direct difference {four_term_dev:.1e}")


def _conservation_run(n, nx, dx, crossings=10.0, background=0.05):
    params = ModelParams(n=n, q=0.5, m=1.0)
    init = charge_balanced_initial(nx, dx, params, k1=1, k2=2, amplitude=0.1,
                                   background_amplitude=background)
    dt = 0.5 * dx
    steps = int(round(crossings * nx * dx / dt))
    hist, recs = evolve(init, EvolutionConfig(dt=dt, n_steps=steps), params)
    inter = slice(2, -2)
    div = divergence(gauge_current_bracket(hist), hist.spec) * (1j * params.q)
    qn = np.array([r.charge_norm for r in recs])
    return (float(np.max(np.abs(div[inter]))),
            float(np.max(np.abs(qn - qn[0]))), hist, params)


@pytest.mark.parametrize("n", [1, 2])
def test_criterion_03_noether_conservation_on_shell(n):
    div_c, dq_c, _, _ = _conservation_run(n, 64, 0.25)
    div_f, dq_f, _, _ = _conservation_run(n, 128, 0.125)
    div_ratio = div_c / div_f
    # the leapfrog scheme conserves the lattice total charge to rounding;
    # a drift at the floating-point floor counts as (better than) the
    # required factor-3.4 improvement, otherwise the ratio must be measured
    if dq_c < 1e-12 and dq_f < 1e-12:
        charge_ok, charge_note = True, f"drift at rounding floor ({dq_c:.1e}, {dq_f:.1e})"
    else:
        charge_ok = dq_c / dq_f >= 3.4
        charge_note = f"drift ratio {dq_c / dq_f:.2f}"
    ok = div_ratio >= 3.4 and charge_ok
    label = "U(1) j1" if n == 1 else "SU(2) j_JK"
    announce(3, ok,
             f"{label} divergence improves x{div_ratio:.2f} (gate 3.4) over 10 "
             f"crossing times; total charge {charge_note}")


@pytest.mark.parametrize("n", [1, 2])
def test_criterion_04_field_equation_extraction(n):
    resids = []
    for nx, dx in ((64, 0.25), (128, 0.125)):
        _, _, hist, params = _conservation_run(n, nx, dx, crossings=3.0,
                                               background=0.08)
        r = maxwell_residual(hist, params)
        resids.append(float(np.max(np.abs(r[2:-2]))))
    order = measured_order(resids[0], resids[1])
    rng = np.random.default_rng(SEED + 4)
    dd = max(
        float(np.max(np.abs(double_divergence(
            random_state(LatticeSpec((8, 8), (0.25, 0.25)), ModelParams(n=nn), rng)))))
        for nn in (1, 2, 3)
    )
    ok = order >= ORDER_GATE and dd < 1e-12
    announce(4, ok,
             f"{'U(1)' if n == 1 else 'SU(2)'} field-equation residual order "
             f"{order:.2f} on-shell (gate {ORDER_GATE}); discrete double "
             f"divergence {dd:.1e} (gate < 1e-12)")


def test_criterion_05_divergence_decomposition_identity():
    params = ModelParams(n=2, q=0.6, m=1.1)
    rng = np.random.default_rng(SEED + 5)
    coeffs = smooth_state_coeffs(rng, 2, 2, amplitude=0.5)
    off_resid, off_mag = [], []
    for spec in (COARSE, FINE):
        dec = onshell_decomposition(coeffs.realize(spec, params), params)
        off_resid.append(dec.identity_residual)
        off_mag.append(dec.max_direct)
    off_order = measured_order(off_resid[0], off_resid[1])

    on_resid, on_direct, on_decomp = [], [], []
    for nx, dx in ((64, 0.25), (128, 0.125)):
        _, _, hist, run_params = _conservation_run(2, nx, dx, crossings=3.0)
        dec = onshell_decomposition(hist, run_params)
        inter = slice(2, -2)
        on_resid.append(float(np.max(np.abs(dec.direct[inter] - dec.decomposed[inter]))))
        # vanishing rates are measured in the lattice L2 norm: the pointwise
        # max of a discretization-error field jumps between sites under
        # refinement, which contaminates a two-point order estimate
        on_direct.append(float(np.sqrt(np.mean(np.abs(dec.direct[inter]) ** 2))))
        on_decomp.append(float(np.sqrt(np.mean(np.abs(dec.decomposed[inter]) ** 2))))
    o_identity = measured_order(on_resid[0], on_resid[1])
    o_direct = measured_order(on_direct[0], on_direct[1])
    o_decomp = measured_order(on_decomp[0], on_decomp[1])
    orders = (off_order, o_identity, o_direct, o_decomp)
    same_order = abs(o_direct - o_decomp) < 0.3
    ok = all(o >= ORDER_GATE for o in orders) and off_mag[1] > 1e-2 and same_order
    announce(5, ok,
             f"decomposition identity orders: off-shell {off_order:.2f} "
             f"(sides O({off_mag[1]:.2f}) nonzero), on-shell identity "
             f"{o_identity:.2f}; both sides vanish at matching order "
             f"({o_direct:.2f} vs {o_decomp:.2f})")


def test_criterion_06_sun_to_u1_reduction():
    params = ModelParams(n=1, q=0.5, m=1.0)
    init = charge_balanced_initial(64, 0.25, params, amplitude=0.1,
                                   background_amplitude=0.05)
    rep = reduce_to_u1(init, EvolutionConfig(dt=0.1, n_steps=100), params)

    spec = LatticeSpec((8, 8), (0.25, 0.25))
    a = np.zeros((8, 8, 2, 1, 1), complex)
    a[..., 0, 0, 0] = 0.7
    a[..., 1, 0, 0] = -0.3
    p_coupled = field_strength(a, spec, ModelParams(n=1, q=0.9))
    p_free = field_strength(a, spec, ModelParams(n=1, q=0.0))
    commutator_free = np.array_equal(p_coupled, p_free) and not p_coupled.any()
    ok = rep.max_dev < 1e-10 and commutator_free
    announce(6, ok,
             f"N=1 matrix path vs dedicated scalar path: max deviation "
             f"{rep.max_dev:.1e} after 100 coupled steps (gate < 1e-10); "
             f"N=1 field strength commutator contribution exactly zero: "
             f"{commutator_free}")


def test_criterion_07_free_field_dispersion():
    params = ModelParams(n=1, q=0.0, m=1.0)
    worst_disc = 0.0
    consts = []
    for nx, dx in ((64, 0.25), (128, 0.125)):
        dt = 0.5 * dx
        init = free_wave_initial(nx, dx, params, k=1, amplitude=0.1, discrete_dt=dt)
        hist, _ = evolve(init, EvolutionConfig(dt=dt, n_steps=200), params)
        c = np.fft.fft(hist.phi[:, :, 0], axis=1)[:, 1]
        omega_meas = float(np.mean(np.angle(c[1:] / c[:-1])) / dt)
        kappa = 2 * np.pi / (nx * dx)
        omega2 = params.m**2 + np.sin(kappa * dx) ** 2 / dx**2
        omega_disc = float(2.0 * np.arcsin(0.5 * dt * np.sqrt(omega2)) / dt)
        omega_cont = float(np.sqrt(kappa**2 + params.m**2))
        worst_disc = max(worst_disc, abs(omega_meas - omega_disc))
        consts.append(abs(omega_meas - omega_cont) / dx**2)
    stable = 0.5 < consts[0] / consts[1] < 2.0
    ok = worst_disc < 1e-6 and stable
    announce(7, ok,
             f"dispersion: |measured - lattice relation| = {worst_disc:.1e} "
             f"(gate < 1e-6); continuum deviation constant "
             f"{consts[0]:.4f} -> {consts[1]:.4f} (stable: {stable})")


def test_criterion_08_infinitesimal_finite_consistency():
    rng = np.random.default_rng(SEED + 8)
    ratios = {}
    spec = LatticeSpec((16, 16), (0.25, 0.25))
    params_u1 = ModelParams(n=1, q=0.5, m=1.0)
    s1 = random_state(spec, params_u1, rng)
    gf1 = U1GaugeFunction.smooth_random(spec, rng)
    devs = [apply_u1(s1, gf1.scaled(eps), params_u1).max_abs_diff(
        apply_infinitesimal(s1, gf1, eps, params_u1)) for eps in (1e-2, 1e-3)]
    ratios["U(1)"] = devs[0] / devs[1]
    params_su2 = ModelParams(n=2, q=0.5, m=1.0)
    s2 = random_state(spec, params_su2, rng)
    gf2 = SUNGaugeFunction.smooth_random(spec, 2, rng)
    devs = [apply_sun(s2, gf2.scaled(eps), params_su2).max_abs_diff(
        apply_infinitesimal(s2, gf2, eps, params_su2)) for eps in (1e-2, 1e-3)]
    ratios["SU(2)"] = devs[0] / devs[1]
    ok = all(80 < r < 120 for r in ratios.values())
    announce(8, ok,
             "finite vs first-order transformation shrinks quadratically: "
             + ", ".join(f"{k} ratio {v:.1f}" for k, v in ratios.items())
             + " (gate 80..120)")


def test_criterion_09_oracle_equivalence():
    spec = LatticeSpec((8, 8), (0.3, 0.3))
    g = Metric(2).diag
    rng = np.random.default_rng(SEED + 9)
    worst = 0.0
    for n in (1, 2, 3):
        params = ModelParams(n=n, q=0.6, m=0.9)
        s = random_state(spec, params, rng)
        p = s.p_full()
        dens_oracle = np.zeros(spec.extents)
        cur_oracle = np.zeros((*spec.extents, 2, n, n), complex)
        for site in np.ndindex(*spec.extents):
            phi, pi, a, pf = s.phi[site], s.pi[site], s.a[site], p[site]
            dens = sum(g[al] * np.conj(pi[al, j]) * pi[al, j]
                       for j in range(n) for al in range(2))
            dens += params.m**2 * sum(np.conj(phi[j]) * phi[j] for j in range(n))
            for j in range(n):
                for k in range(n):
                    for al in range(2):
                        for be in range(2):
                            dens -= 0.25 * pf[al, be, j, k] * g[al] * g[be] * pf[al, be, k, j]
            cpl = 0.0j
            for j in range(n):
                for k in range(n):
                    for al in range(2):
                        cpl += np.conj(pi[al, k]) * a[al, k, j] * phi[j]
                        cpl -= np.conj(phi[k]) * a[al, k, j] * pi[al, j]
                        for i in range(n):
                            for be in range(2):
                                cpl -= pf[al, be, j, k] * a[al, k, i] * a[be, i, j]
            dens_oracle[site] = (dens + 1j * params.q * cpl).real
            for mu in range(2):
                for j in range(n):
                    for k in range(n):
                        val = phi[j] * np.conj(pi[mu, k]) - pi[mu, j] * np.conj(phi[k])
                        for i in range(n):
                            for al in range(2):
                                val += a[al, j, i] * pf[al, mu, i, k]
                                val -= pf[al, mu, j, i] * a[al, i, k]
                        cur_oracle[site + (mu, j, k)] = 1j * params.q * val
        scale = max(1.0, float(np.max(np.abs(dens_oracle))))
        worst = max(worst, float(np.max(np.abs(eval_ym(s, params) - dens_oracle))) / scale)
        cscale = max(1.0, float(np.max(np.abs(cur_oracle))))
        worst = max(worst, float(np.max(np.abs(
            sun_gauge_current(s, params) - cur_oracle))) / cscale)
        worst = max(worst, float(np.max(np.abs(
            eval_free(s, params) - _free_loop(s, params, g)))) / scale)
        if n == 1:
            worst = max(worst, float(np.max(np.abs(
                eval_kgm(s, params) - dens_oracle))) / scale)
            lam = U1GaugeFunction.constant(spec, 1.0)
            j_full = u1_current(s, lam, params)
            j1 = u1_matter_current(s, params)
            worst = max(worst, float(np.max(np.abs(
                j_full - cur_oracle[..., 0, 0].real))) / cscale)
            worst = max(worst, float(np.max(np.abs(
                j1 - cur_oracle[..., 0, 0].real))) / cscale)
    ok = worst < 1e-12
    announce(9, ok,
             f"vectorized densities and currents vs naive per-site loop "
             f"oracles, N in 1..3: worst relative deviation {worst:.2e} "
             f"(gate < 1e-12)")


def _free_loop(s, params, g):
    out = np.zeros(s.spec.extents)
    for site in np.ndindex(*s.spec.extents):
        phi, pi = s.phi[site], s.pi[site]
        dens = sum(g[al] * np.conj(pi[al, j]) * pi[al, j]
                   for j in range(s.n) for al in range(2))
        dens += params.m**2 * sum(np.conj(phi[j]) * phi[j] for j in range(s.n))
        out[site] = dens.real
    return out


def test_criterion_10_structural_invariants(tmp_path):
    params = ModelParams(n=2, q=0.5, m=1.0)
    rng = np.random.default_rng(SEED + 10)
    coeffs = smooth_state_coeffs(rng, 2, 2, amplitude=0.3)
    s = coeffs.realize(LatticeSpec((4, 64), (0.25, 0.25)), params)
    s.a[..., 0, :, :] = 0.0  # temporal gauge for the stepping leg

    # transform (time-independent, keeps the gauge) -> serialize -> step
    gf = SUNGaugeFunction.smooth_random(s.spec, 2, rng, amplitude=0.4,
                                        max_modes=(0, 2))
    s = apply_sun(s, gf, params)
    path = tmp_path / "chain.dwym"
    snapshot_write(s, params, path)
    back, _ = snapshot_read(path)
    bit_exact = all(
        a.tobytes() == b.tobytes()
        for a, b in ((s.phi, back.phi), (s.pi, back.pi),
                     (s.a, back.a), (s.p_tri, back.p_tri))
    )
    stepped = step_cauchy(back, 0.1, params, n_steps=50)
    full = stepped.p_full()
    antisym_exact = np.array_equal(full, -np.swapaxes(full, 2, 3))
    herm_ok = is_hermitian(stepped.a, 1e-10) and is_hermitian(stepped.p_tri, 1e-10)

    cfg_text = (
        "seed = 5\n[model]\nkind = \"u1\"\nq = 0.5\nm = 1.0\n"
        "[lattice]\nsites = 32\nspacing = 0.25\n"
        "[initial]\nkind = \"coupled_wave\"\namplitude = 0.1\n"
        "[evolution]\ndt = 0.125\nsteps = 40\n"
    )
    cfg_path = tmp_path / "det.toml"
    cfg_path.write_text(cfg_text)
    outs = []
    for name in ("o1", "o2"):
        assert cli_main(["simulate", "--config", str(cfg_path),
                         "--out", str(tmp_path / name), "--no-figures"]) == 0
        outs.append((tmp_path / name / "diagnostics.csv").read_bytes())
    csv_identical = outs[0] == outs[1]

    ok = bit_exact and antisym_exact and herm_ok and csv_identical
    announce(10, ok,
             f"after transform+serialize+step: p antisymmetry exact "
             f"({antisym_exact}), a Hermitian within 1e-10 ({herm_ok}); "
             f"snapshot round-trip bit-exact ({bit_exact}); identical seeds "
             f"give byte-identical CSV ({csv_identical})")
