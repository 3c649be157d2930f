"""Command-line contract: exit codes, CSV determinism, reports, figures."""
import numpy as np

from dwym.cli import main
from dwym.snapshot import snapshot_read


def write_config(path, **over):
    base = {
        "seed": 11,
        "model_kind": "u1", "n": 1, "q": 0.5, "m": 1.0,
        "sites": 32, "spacing": 0.25,
        "initial_kind": "coupled_wave", "amplitude": 0.1, "k": 1, "k2": 2,
        "background": 0.05,
        "dt": 0.125, "steps": 64, "cadence": 1,
        "samples": 2, "gauge_amplitude": 0.4, "max_mode": 2,
        "snapshot": "",
    }
    base.update(over)
    text = f"""
seed = {base['seed']}
[model]
kind = "{base['model_kind']}"
n = {base['n']}
q = {base['q']}
m = {base['m']}
[lattice]
sites = {base['sites']}
spacing = {base['spacing']}
[initial]
kind = "{base['initial_kind']}"
amplitude = {base['amplitude']}
k = {base['k']}
k2 = {base['k2']}
background = {base['background']}
[evolution]
dt = {base['dt']}
steps = {base['steps']}
cadence = {base['cadence']}
[check]
samples = {base['samples']}
gauge_amplitude = {base['gauge_amplitude']}
max_mode = {base['max_mode']}
[output]
snapshot = "{base['snapshot']}"
"""
    path.write_text(text)
    return path


def read_csv_column(path, name):
    lines = path.read_text().strip().split("\n")
    idx = lines[0].split(",").index(name)
    return np.array([float(line.split(",")[idx]) for line in lines[1:]])


def test_simulate_zero_state(tmp_path):
    cfgf = write_config(tmp_path / "c.toml", initial_kind="zero")
    out = tmp_path / "out"
    code = main(["simulate", "--config", str(cfgf), "--out", str(out), "--no-figures"])
    assert code == 0
    energy = read_csv_column(out / "diagnostics.csv", "energy")
    assert not energy.any()
    assert (out / "simulate_report.txt").exists()


def test_simulate_free_wave_energy_constant(tmp_path):
    cfgf = write_config(tmp_path / "c.toml", initial_kind="plane_wave", q=0.0,
                        sites=64, steps=400)
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfgf), "--out", str(out),
                 "--no-figures"]) == 0
    energy = read_csv_column(out / "diagnostics.csv", "energy")
    assert np.max(np.abs(energy - energy[0])) / abs(energy[0]) < 1e-3


def test_simulate_cfl_violation_exits_1(tmp_path, capsys):
    cfgf = write_config(tmp_path / "c.toml", dt=0.2)
    assert main(["simulate", "--config", str(cfgf), "--out", str(tmp_path / "o"),
                 "--no-figures"]) == 1
    assert "CFL" in capsys.readouterr().err


def test_simulate_writes_snapshot(tmp_path):
    cfgf = write_config(tmp_path / "c.toml", snapshot="final.dwym", steps=10)
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfgf), "--out", str(out),
                 "--no-figures"]) == 0
    state, params = snapshot_read(out / "final.dwym")
    assert state.spec.extents == (11, 32)
    assert params.q == 0.5


def test_simulate_renders_figures(tmp_path):
    cfgf = write_config(tmp_path / "c.toml", steps=10)
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfgf), "--out", str(out)]) == 0
    assert (out / "diagnostics.png").exists()
    assert (out / "residuals.png").exists()


def test_csv_is_byte_identical_for_same_seed(tmp_path):
    cfgf = write_config(tmp_path / "c.toml")
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    main(["simulate", "--config", str(cfgf), "--out", str(out1), "--no-figures"])
    main(["simulate", "--config", str(cfgf), "--out", str(out2), "--no-figures"])
    assert (out1 / "diagnostics.csv").read_bytes() == (out2 / "diagnostics.csv").read_bytes()


def test_unknown_config_key_rejected(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text("[model]\nkinds = \"u1\"\n")
    assert main(["simulate", "--config", str(path)]) == 1
    assert "unknown key" in capsys.readouterr().err


def test_check_invariance_constant_parameter(tmp_path):
    # zero-amplitude gauge functions degenerate to constants: defects at
    # rounding level count as converged
    cfgf = write_config(tmp_path / "c.toml", gauge_amplitude=0.0)
    assert main(["check-invariance", "--config", str(cfgf),
                 "--out", str(tmp_path / "o"), "--no-figures"]) == 0


def test_check_invariance_su2_passes(tmp_path):
    cfgf = write_config(tmp_path / "c.toml", model_kind="sun", n=2)
    out = tmp_path / "o"
    assert main(["check-invariance", "--config", str(cfgf), "--out", str(out),
                 "--no-figures"]) == 0
    report = (out / "invariance_report.txt").read_text()
    assert "PASS" in report


def test_check_invariance_negative_control(tmp_path):
    cfgf = write_config(tmp_path / "c.toml")
    assert main(["check-invariance", "--config", str(cfgf),
                 "--out", str(tmp_path / "o"), "--no-figures",
                 "--negate-dh"]) == 2


def test_check_noether_zero_state(tmp_path):
    cfgf = write_config(tmp_path / "c.toml", amplitude=0.0, background=0.0)
    assert main(["check-noether", "--config", str(cfgf),
                 "--out", str(tmp_path / "o"), "--no-figures"]) == 0


def test_check_noether_u1_coupled(tmp_path):
    cfgf = write_config(tmp_path / "c.toml", steps=64)
    out = tmp_path / "o"
    assert main(["check-noether", "--config", str(cfgf), "--out", str(out),
                 "--no-figures"]) == 0
    text = (out / "noether_report.txt").read_text()
    assert "order" in text and "PASS" in text


def test_check_noether_algebraic_only(tmp_path):
    cfgf = write_config(tmp_path / "c.toml", model_kind="sun", n=2)
    out = tmp_path / "o"
    assert main(["check-noether", "--config", str(cfgf), "--out", str(out),
                 "--no-figures", "--algebraic-only"]) == 0
    assert "algebraic-only" in (out / "noether_report.txt").read_text()


def test_reduce_u1(tmp_path):
    cfgf = write_config(tmp_path / "c.toml")
    assert main(["reduce-u1", "--config", str(cfgf),
                 "--out", str(tmp_path / "o"), "--no-figures"]) == 0


def test_dispersion(tmp_path):
    cfgf = write_config(tmp_path / "c.toml", sites=64, steps=100)
    out = tmp_path / "o"
    assert main(["dispersion", "--config", str(cfgf), "--out", str(out),
                 "--no-figures"]) == 0
    meas = read_csv_column(out / "dispersion.csv", "omega_measured")
    disc = read_csv_column(out / "dispersion.csv", "omega_lattice")
    assert np.max(np.abs(meas - disc)) < 1e-6


def test_missing_config_file(capsys):
    assert main(["simulate", "--config", "/nonexistent/x.toml"]) == 1
    assert "not found" in capsys.readouterr().err
