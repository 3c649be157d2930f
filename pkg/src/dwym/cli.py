"""Command-line front end.

Subcommands: simulate, check-invariance, check-noether, reduce-u1,
dispersion. Exit codes: 0 success, 1 usage/config error, 2 numerical
failure (instability, missed convergence order, broken identity).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import report
from .config import RunConfig, load_config
from .convergence import measured_order
from .dynamics import (ConfigError, EvolutionConfig, GaussIncompatibleError,
                       NumericalError, charge_balanced_initial, cauchy_state,
                       evolve, free_wave_initial, reduce_to_u1)
from .gauge import (SUNGaugeFunction, U1GaugeFunction, apply_gauge,
                    check_form_invariance, explicit_change)
from .hamiltonians import eval_kgm, eval_ym
from .lattice import LatticeSpec, ModelParams
from .noether import divergence, gauge_current_bracket, maxwell_residual, \
    onshell_decomposition
from .snapshot import snapshot_write
from .state import random_fourier_coeffs, smooth_state_coeffs

ORDER_GATE = 1.8
ROUNDING_FLOOR = 1e-12


def _build_initial(cfg: RunConfig):
    params = cfg.params
    if cfg.initial == "zero":
        return cauchy_state(cfg.sites, cfg.spacing, params)
    if cfg.initial == "plane_wave":
        return free_wave_initial(cfg.sites, cfg.spacing, params, k=cfg.k,
                                 amplitude=cfg.amplitude)
    return charge_balanced_initial(cfg.sites, cfg.spacing, params, k1=cfg.k,
                                   k2=cfg.k2, amplitude=cfg.amplitude,
                                   background_amplitude=cfg.background)


def cmd_simulate(cfg: RunConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = cfg.params
    evo = cfg.evolution()
    evo.validate_against(LatticeSpec((4, cfg.sites), (cfg.dt, cfg.spacing)))
    initial = _build_initial(cfg)
    hist, recs = evolve(initial, evo, params)

    from .dynamics import DiagnosticsRecord
    csv_path = report.write_csv(out / cfg.csv_name, list(DiagnosticsRecord.FIELDS),
                                [r.row() for r in recs])
    lines = [
        f"steps = {evo.n_steps}, dt = {evo.dt}, sites = {cfg.sites}",
        f"final energy = {recs[-1].energy:.12g}",
        f"max |gauss residual| = {max(r.gauss_max for r in recs):.6e}",
        f"max |noether divergence| = {max(r.noether_div_max for r in recs):.6e}",
        f"csv = {csv_path}",
    ]
    if cfg.snapshot:
        snapshot_write(hist, params, out / cfg.snapshot)
        lines.append(f"snapshot = {out / cfg.snapshot}")
    if cfg.figures:
        times = [r.time for r in recs]
        report.fig_timeseries(
            out / "diagnostics.png", times,
            {"energy": [r.energy for r in recs],
             "canonical energy": [r.energy_canonical for r in recs],
             "charge": [r.charge for r in recs]},
            "conserved quantities")
        report.fig_timeseries(
            out / "residuals.png", times,
            {"gauss": [max(r.gauss_max, 1e-18) for r in recs],
             "noether divergence": [max(r.noether_div_max, 1e-18) for r in recs]},
            "constraint residuals", logy=True)
        lines.append(f"figures = {out / 'diagnostics.png'}, {out / 'residuals.png'}")
    report.write_report(out / "simulate_report.txt", "simulate",
                        cfg.effective_lines(), lines)
    return 0


def _invariance_samples(cfg: RunConfig, rng, specs):
    """Per-sample form-invariance defects at each resolution."""
    params = cfg.params
    rows = []
    for sample in range(cfg.samples):
        state_c = smooth_state_coeffs(rng, 2, params.n, amplitude=0.5,
                                      max_mode=min(cfg.max_mode, 2))
        if cfg.model == "u1":
            gf_c = random_fourier_coeffs(rng, 2, (), cfg.gauge_amplitude, cfg.max_mode)
        else:
            gf_c = random_fourier_coeffs(rng, 2, (params.n**2 - 1,),
                                         cfg.gauge_amplitude, cfg.max_mode)
        defects = []
        for spec in specs:
            state = state_c.realize(spec, params)
            if cfg.model == "u1":
                gf = U1GaugeFunction.from_coeffs(gf_c, spec)
            else:
                gf = SUNGaugeFunction.from_coeffs(gf_c, spec, params.n)
            res = check_form_invariance(state, gf, params, transform_gradient="stencil")
            defects.append(res.defect)
        rows.append((sample, *defects))
    return rows


def cmd_check_invariance(cfg: RunConfig, negate_dh: bool = False) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = cfg.params
    rng = np.random.default_rng(cfg.seed)
    base = LatticeSpec((cfg.sites, cfg.sites), (cfg.spacing, cfg.spacing))
    specs = [base]
    for _ in range(cfg.refine):
        specs.append(specs[-1].refine())

    rows = _invariance_samples(cfg, rng, specs)
    orders = [measured_order(row[1], row[-1], 2.0**cfg.refine) for row in rows]

    # controls: constant gauge parameter and fully analytic transformation
    state = smooth_state_coeffs(rng, 2, params.n, amplitude=0.5).realize(base, params)
    if cfg.model == "u1":
        gf_const = U1GaugeFunction.constant(base, 0.8)
        gf_smooth = U1GaugeFunction.smooth_random(base, rng, cfg.gauge_amplitude,
                                                  cfg.max_mode)
    else:
        theta = 0.3 * np.ones(params.n**2 - 1)
        gf_const = SUNGaugeFunction.constant(base, theta, params.n)
        gf_smooth = SUNGaugeFunction.smooth_random(base, params.n, rng,
                                                   cfg.gauge_amplitude, cfg.max_mode)
    const_defect = check_form_invariance(state, gf_const, params).defect
    analytic_defect = check_form_invariance(state, gf_smooth, params,
                                            transform_gradient="analytic").defect
    skew = check_form_invariance(state, gf_smooth, params).skew_residual

    if negate_dh:
        # negative control hook: a sign error in the explicit change must
        # destroy the measured order
        evaluate = eval_kgm if cfg.model == "u1" else eval_ym
        broken = []
        for spec in specs:
            st = smooth_state_coeffs(np.random.default_rng(cfg.seed), 2, params.n,
                                     amplitude=0.5).realize(spec, params)
            gf = (U1GaugeFunction.smooth_random(spec, np.random.default_rng(1))
                  if cfg.model == "u1" else
                  SUNGaugeFunction.smooth_random(spec, params.n,
                                                 np.random.default_rng(1)))
            dh = explicit_change(st, gf, params)
            transformed = apply_gauge(st, gf, params, "stencil")
            broken.append(float(np.max(np.abs(
                evaluate(transformed, params) - evaluate(st, params) + dh))))
        orders = [measured_order(broken[0], broken[-1], 2.0**cfg.refine)]
        rows = [(0, *broken)]

    min_order = min(orders)
    budget_ok = all(row[-1] <= max(0.5 * row[1], ROUNDING_FLOOR) for row in rows)
    controls_ok = const_defect < 1e-10 and analytic_defect < 1e-10
    ok = min_order >= ORDER_GATE and budget_ok and controls_ok

    header = ["sample"] + [f"defect_h{i}" for i in range(len(specs))] + ["order"]
    csv_rows = [(*row, orders[i]) for i, row in enumerate(rows)]
    report.write_csv(out / "invariance.csv", header, csv_rows)
    lines = [
        f"samples = {len(rows)}, resolutions = {[s.extents[0] for s in specs]}",
        f"min measured order = {min_order:.3f}  (gate >= {ORDER_GATE})",
        f"constant-parameter defect = {const_defect:.3e}  (gate < 1e-10)",
        f"analytic-derivative defect = {analytic_defect:.3e}  (gate < 1e-10)",
        f"skew-symmetry cancellation residual = {skew:.3e}",
        f"verdict = {'PASS' if ok else 'FAIL'}",
    ]
    for i, row in enumerate(rows):
        lines.append(f"  sample {row[0]}: " +
                     " -> ".join(f"{d:.4e}" for d in row[1:]) +
                     f"   order {orders[i]:.3f}")
    report.write_report(out / "invariance_report.txt", "check-invariance",
                        cfg.effective_lines(), lines)
    if cfg.figures:
        spacings = [s.spacings[0] for s in specs]
        series = {f"sample {row[0]}": list(row[1:]) for row in rows[:8]}
        report.fig_convergence(out / "invariance.png", spacings, series,
                               "form-invariance defect vs spacing")
    print("\n".join(lines))
    return 0 if ok else 2


def _noether_metrics(cfg: RunConfig, nx: int, dx: float, crossings: float):
    params = cfg.params
    init = charge_balanced_initial(nx, dx, params, k1=cfg.k, k2=cfg.k2,
                                   amplitude=cfg.amplitude,
                                   background_amplitude=cfg.background)
    dt = 0.5 * dx
    steps = int(round(crossings * nx * dx / dt))
    evo = EvolutionConfig(dt=dt, n_steps=steps)
    hist, recs = evolve(init, evo, params)
    inter = slice(2, -2)
    div = divergence(gauge_current_bracket(hist), hist.spec) * (1j * params.q)
    mres = maxwell_residual(hist, params)
    dec = onshell_decomposition(hist, params)
    charge = np.array([r.charge_norm for r in recs])
    return {
        "noether_divergence": float(np.max(np.abs(div[inter]))),
        "gauss_residual": float(np.max(np.abs(mres[inter, :, 0]))),
        "maxwell_residual": float(np.max(np.abs(mres[inter, :, 1]))),
        "decomposition_identity": float(np.max(np.abs(
            dec.direct[inter] - dec.decomposed[inter]))),
        "onshell_divergence": float(np.max(np.abs(dec.direct[inter]))),
    }, float(np.max(np.abs(charge - charge[0])))


def cmd_check_noether(cfg: RunConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = cfg.params
    lines = []
    ok = True

    if cfg.algebraic_only:
        rng = np.random.default_rng(cfg.seed)
        coeffs = smooth_state_coeffs(rng, 2, params.n, amplitude=0.5)
        resids = []
        spec = LatticeSpec((cfg.sites, cfg.sites), (cfg.spacing, cfg.spacing))
        spacings = []
        for _ in range(cfg.refine + 1):
            s = coeffs.realize(spec, params)
            dec = onshell_decomposition(s, params)
            resids.append(dec.identity_residual)
            spacings.append(spec.spacings[0])
            spec = spec.refine()
        order = measured_order(resids[0], resids[-1], 2.0**cfg.refine)
        ok = order >= ORDER_GATE
        lines += [
            "mode = algebraic-only (decomposition identity on off-shell states)",
            "residuals: " + " -> ".join(f"{r:.4e}" for r in resids),
            f"measured order = {order:.3f}  (gate >= {ORDER_GATE})",
            f"verdict = {'PASS' if ok else 'FAIL'}",
        ]
        report.write_csv(out / "noether.csv",
                         ["spacing", "identity_residual"],
                         list(zip(spacings, resids)))
        if cfg.figures:
            report.fig_convergence(out / "noether.png", spacings,
                                   {"identity residual": resids},
                                   "decomposition identity residual")
        report.write_report(out / "noether_report.txt", "check-noether",
                            cfg.effective_lines(), lines)
        print("\n".join(lines))
        return 0 if ok else 2

    crossings = cfg.steps * cfg.dt / (cfg.sites * cfg.spacing)
    coarse, charge_c = _noether_metrics(cfg, cfg.sites, cfg.spacing, crossings)
    fine, charge_f = _noether_metrics(cfg, cfg.sites * 2, cfg.spacing / 2, crossings)
    rows = []
    for name in coarse:
        order = measured_order(coarse[name], fine[name])
        rows.append((name, coarse[name], fine[name], order))
        if order < ORDER_GATE:
            ok = False
        lines.append(f"{name}: {coarse[name]:.4e} -> {fine[name]:.4e}  "
                     f"order {order:.3f}")
    if charge_c < ROUNDING_FLOOR and charge_f < ROUNDING_FLOOR:
        lines.append(f"total-charge drift: {charge_c:.2e} -> {charge_f:.2e} "
                     "(conserved to rounding)")
    else:
        q_order = measured_order(charge_c, charge_f)
        rows.append(("charge_drift", charge_c, charge_f, q_order))
        if q_order < ORDER_GATE:
            ok = False
        lines.append(f"total-charge drift: {charge_c:.4e} -> {charge_f:.4e}  "
                     f"order {q_order:.3f}")
    lines.append(f"verdict = {'PASS' if ok else 'FAIL'}")
    report.write_csv(out / "noether.csv",
                     ["metric", "coarse", "fine", "order"], rows)
    if cfg.figures:
        spacings = [cfg.spacing, cfg.spacing / 2]
        report.fig_convergence(out / "noether.png", spacings,
                               {name: [coarse[name], fine[name]] for name in coarse},
                               "conservation residuals under refinement")
    report.write_report(out / "noether_report.txt", "check-noether",
                        cfg.effective_lines(), lines)
    print("\n".join(lines))
    return 0 if ok else 2


def cmd_reduce_u1(cfg: RunConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.n != 1:
        raise ConfigError("reduce-u1 requires N = 1")
    evo = cfg.evolution()
    evo.validate_against(LatticeSpec((4, cfg.sites), (cfg.dt, cfg.spacing)))
    rep = reduce_to_u1(_build_initial(cfg), evo, cfg.params)
    ok = rep.max_dev < 1e-10
    lines = [
        f"phi deviation = {rep.phi_dev:.3e}",
        f"pi deviation = {rep.pi_dev:.3e}",
        f"a deviation = {rep.a_dev:.3e}",
        f"p deviation = {rep.p_dev:.3e}",
        f"max deviation = {rep.max_dev:.3e}  (gate < 1e-10)",
        f"verdict = {'PASS' if ok else 'FAIL'}",
    ]
    report.write_csv(out / "reduce.csv",
                     ["field", "deviation"],
                     [("phi", rep.phi_dev), ("pi", rep.pi_dev),
                      ("a", rep.a_dev), ("p", rep.p_dev)])
    report.write_report(out / "reduce_report.txt", "reduce-u1",
                        cfg.effective_lines(), lines)
    print("\n".join(lines))
    return 0 if ok else 2


def cmd_dispersion(cfg: RunConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = ModelParams(n=1, q=0.0, m=cfg.m)
    lines = []
    ok = True
    rows = []
    modes = [k for k in (1, 2, 3) if k <= cfg.sites // 4]
    consts = {k: [] for k in modes}
    resolutions = [(cfg.sites, cfg.spacing), (cfg.sites * 2, cfg.spacing / 2)]
    for nx, dx in resolutions:
        dt = 0.5 * dx
        kap_list, meas_list, disc_list, cont_list = [], [], [], []
        for k in modes:
            init = free_wave_initial(nx, dx, params, k=k, amplitude=cfg.amplitude,
                                     discrete_dt=dt)
            hist, _ = evolve(init, EvolutionConfig(dt=dt, n_steps=cfg.steps), params)
            c = np.fft.fft(hist.phi[:, :, 0], axis=1)[:, k]
            omega_meas = float(np.mean(np.angle(c[1:] / c[:-1])) / dt)
            kappa = 2 * np.pi * k / (nx * dx)
            omega2 = params.m**2 + np.sin(kappa * dx) ** 2 / dx**2
            omega_disc = float(2.0 * np.arcsin(0.5 * dt * np.sqrt(omega2)) / dt)
            omega_cont = float(np.sqrt(kappa**2 + params.m**2))
            if abs(omega_meas - omega_disc) >= 1e-6:
                ok = False
            consts[k].append(abs(omega_meas - omega_cont) / dx**2)
            rows.append((nx, k, kappa, omega_meas, omega_disc, omega_cont))
            kap_list.append(kappa)
            meas_list.append(omega_meas)
            disc_list.append(omega_disc)
            cont_list.append(omega_cont)
            lines.append(f"nx={nx} k={k}: measured {omega_meas:.9f}, lattice "
                         f"{omega_disc:.9f}, continuum {omega_cont:.9f}")
        if cfg.figures and nx == cfg.sites:
            report.fig_dispersion(out / "dispersion.png", kap_list, meas_list,
                                  disc_list, cont_list,
                                  "free-field dispersion (coarse grid)")
    for k in modes:
        c0, c1 = consts[k]
        stable = 0.5 < (c0 / c1 if c1 else 1.0) < 2.0
        if not stable:
            ok = False
        lines.append(f"k={k}: |w - w_continuum|/dx^2 = {c0:.4f} -> {c1:.4f} "
                     f"({'stable' if stable else 'UNSTABLE'})")
    lines.append(f"verdict = {'PASS' if ok else 'FAIL'}")
    report.write_csv(out / "dispersion.csv",
                     ["sites", "mode", "kappa", "omega_measured",
                      "omega_lattice", "omega_continuum"], rows)
    report.write_report(out / "dispersion_report.txt", "dispersion",
                        cfg.effective_lines(), lines)
    print("\n".join(lines))
    return 0 if ok else 2


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dwym",
        description="Covariant-Hamiltonian lattice gauge dynamics and "
                    "symmetry verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "evolve a configuration and emit diagnostics CSV"),
        ("check-invariance", "verify form invariance under random gauge functions"),
        ("check-noether", "verify current conservation and field equations"),
        ("reduce-u1", "compare the N=1 matrix path against the scalar path"),
        ("dispersion", "measure the free-field dispersion relation"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=str, default=None, help="TOML config file")
        p.add_argument("--seed", type=int, default=None, help="RNG seed override")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--refine", type=int, default=None,
                       help="number of refinement levels")
        p.add_argument("--algebraic-only", action="store_true", default=None,
                       help="restrict check-noether to the algebraic identity")
        p.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering")
        p.add_argument("--negate-dh", action="store_true",
                       help=argparse.SUPPRESS)  # negative-control test hook
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = cfg.with_overrides(
            seed=args.seed, out_dir=args.out, refine=args.refine,
            algebraic_only=args.algebraic_only,
            figures=False if args.no_figures else None,
        )
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "check-invariance":
            return cmd_check_invariance(cfg, negate_dh=args.negate_dh)
        if args.command == "check-noether":
            return cmd_check_noether(cfg)
        if args.command == "reduce-u1":
            return cmd_reduce_u1(cfg)
        if args.command == "dispersion":
            return cmd_dispersion(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, GaussIncompatibleError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
