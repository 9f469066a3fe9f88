import json

import numpy as np
import pytest

from catpump.cli import main
from catpump.serialize import read_table_csv, read_tomography_csv
from catpump.scenarios import Scenario, run


def _run_cli(args):
    return main(args)


def test_flowfield_scenario(tmp_path):
    out = tmp_path / "ff"
    rc = _run_cli(["flowfield", "--out", str(out), "--set", "grid_n=21",
                   "--set", "seeds=8", "--set", "extent=2.8"])
    assert rc == 0
    names = {p.name for p in out.glob("*.csv")}
    assert names == {"flow_field.csv", "flow_trajectories.csv",
                     "fixed_points.csv"}
    cols, meta = read_table_csv(out / "fixed_points.csv")
    assert len(cols["re_alpha"]) == 3
    assert meta["above_threshold"] == "1"
    assert "device.chi_rs" in meta


def test_cat_evolution_scenario(tmp_path):
    out = tmp_path / "cat"
    rc = _run_cli(["cat-evolution", "--out", str(out),
                   "--set", "fock_s=25", "--set", "times_us=0,2",
                   "--set", "grid_n=11", "--set", "extent=2.5"])
    assert rc == 0
    cols, meta = read_table_csv(out / "summary.csv")
    assert cols["t_us"][0] == 0.0
    assert cols["nbar"][0] == pytest.approx(0.0, abs=1e-12)
    assert cols["parity"][0] == pytest.approx(1.0, abs=1e-12)
    # squeezing signature at 2 us: one variance below 1/4, the other above
    assert min(cols["var_X"][1], cols["var_P"][1]) < 0.25
    assert max(cols["var_X"][1], cols["var_P"][1]) > 0.25
    grid, gmeta = read_tomography_csv(out / "wigner_cat_t0us.csv")
    assert grid.values.max() == pytest.approx(2 / np.pi, abs=1e-9)
    p, _ = read_table_csv(out / "photon_cat_t0us.csv")
    assert p["p"][0] == pytest.approx(1.0, abs=1e-12)


def test_fock_evolution_parity_locked(tmp_path):
    out = tmp_path / "fock"
    rc = _run_cli(["fock-evolution", "--out", str(out),
                   "--set", "kappa_s=0", "--set", "fock_s=20",
                   "--set", "times_us=0,1,3", "--set", "grid_n=9",
                   "--set", "extent=2.2"])
    assert rc == 0
    cols, _ = read_table_csv(out / "summary.csv")
    assert np.abs(cols["parity"] + 1.0).max() < 1e-6
    grid, _ = read_tomography_csv(out / "wigner_fock_t0us.csv")
    assert grid.values.min() == pytest.approx(-2 / np.pi, abs=1e-9)


def test_bistability_scenario_and_symmetry(tmp_path):
    out = tmp_path / "bi"
    rc = _run_cli(["bistability", "--out", str(out),
                   "--set", "fock_s=20", "--set", "amp=1.8",
                   "--set", "t_us=2", "--set", "grid_n=11",
                   "--set", "extent=2.5", "--set", "chi_ss=0"])
    assert rc == 0
    names = {p.name for p in out.glob("wigner_*.csv")}
    assert len(names) == 8
    # chi_ss = 0: the +45 and -45 runs are mirror images about the real
    # axis, up to the 0.2 degree tilt of the drive phase left by the pump
    # detuning (the residual phase of xi_p)
    gp, _ = read_tomography_csv(out / "wigner_arg+45.csv")
    gm, _ = read_tomography_csv(out / "wigner_arg-45.csv")
    n = 11
    Wp = gp.values.reshape(n, n)
    Wm = gm.values.reshape(n, n)
    assert np.abs(Wp - Wm[::-1, :]).max() < 5e-3
    assert np.abs(Wp).max() > 0.1
    # the arg = 0 run parks on the positive-real lobe
    g0, _ = read_tomography_csv(out / "wigner_arg0.csv")
    peak = g0.alphas[np.argmax(g0.values)]
    assert peak.real > 0.5 and abs(peak.imag) < 0.8


def test_bistability_equidistant_phase_gives_mixture(tmp_path):
    # arg(alpha_k) = +-pi/2 starts equidistant from the two lobes and ends
    # in a two-lobe state with only weak residual fringes
    out = tmp_path / "mix"
    rc = _run_cli(["bistability", "--out", str(out), "--set", "fock_s=30",
                   "--set", "t_us=10", "--set", "grid_n=21",
                   "--set", "extent=3.2"])
    assert rc == 0
    from catpump.device import derive_params, paper_params
    alpha_inf = derive_params(paper_params()).alpha_inf
    g, _ = read_tomography_csv(out / "wigner_arg+90.csv")
    lobes = [g.values[np.argmin(np.abs(g.alphas - z))]
             for z in (alpha_inf, -alpha_inf)]
    assert min(lobes) > 0.05              # both lobes populated
    assert g.values.min() > -0.05         # no strong interference fringes
    # contrast: the arg = 0 run parks essentially all weight on one lobe
    g0, _ = read_tomography_csv(out / "wigner_arg0.csv")
    lobes0 = [g0.values[np.argmin(np.abs(g0.alphas - z))]
              for z in (alpha_inf, -alpha_inf)]
    assert max(lobes0) > 3 * min(lobes0)


def test_fock_negativity_decays_with_measured_loss(tmp_path):
    out = tmp_path / "fockk"
    rc = _run_cli(["fock-evolution", "--out", str(out),
                   "--set", "fock_s=30", "--set", "times_us=0,3,10",
                   "--set", "grid_n=9", "--set", "extent=2.0"])
    assert rc == 0
    w0 = {}
    for t in (0, 3, 10):
        g, _ = read_tomography_csv(out / f"wigner_fock_t{t}us.csv")
        w0[t] = g.values[np.argmin(np.abs(g.alphas))]
    assert w0[0] == pytest.approx(-2 / np.pi, abs=1e-9)
    assert w0[3] < -0.2                    # odd-cat transient still negative
    assert -0.05 < w0[10] <= 0.05          # negativity gone by ~10 us


def test_spectroscopy_scenario_small(tmp_path):
    out = tmp_path / "spec"
    rc = _run_cli(["spectroscopy", "--out", str(out),
                   "--set", "n_probe=7", "--set", "n_pump=3",
                   "--set", "fine_points=5", "--set", "depth_points=3",
                   "--set", "fock_r=3", "--set", "fock_s=8",
                   "--set", "probe_span_hz=4e6", "--set", "pump_span_hz=2e6",
                   "--set", "fine_window_hz=0.05e6",
                   "--set", "depth_window_hz=0.02e6"])
    assert rc == 0
    names = {p.name for p in out.glob("*.csv")}
    assert {"semiclassical_map.csv", "quantum_cut.csv", "dip_trace.csv",
            "dip_depth.csv"} <= names
    cols, meta = read_table_csv(out / "dip_trace.csv")
    assert len(cols["f_pump_hz"]) == 3
    assert float(meta["semiclassical_floor"]) > 0


def test_spectroscopy_no_pump_means_no_dip(tmp_path):
    out = tmp_path / "nodip"
    rc = _run_cli(["spectroscopy", "--out", str(out), "--set", "eps_p=0",
                   "--set", "n_probe=9", "--set", "n_pump=2",
                   "--set", "fine_points=3", "--set", "depth_points=3",
                   "--set", "fock_r=3", "--set", "fock_s=4",
                   "--set", "probe_span_hz=8e6", "--set", "pump_span_hz=1e6"])
    assert rc == 0
    from catpump.serialize import read_map_csv
    x, y, Z, _ = read_map_csv(out / "semiclassical_map.csv")
    # pure Lorentzian rows: single maximum at the readout line, no dip
    for row in Z:
        peak = np.argmax(row)
        assert np.all(np.diff(row[:peak + 1]) > 0)
        assert np.all(np.diff(row[peak:]) < 0)


def test_tomography_roundtrip_scenario_and_determinism(tmp_path):
    args = ["tomography-roundtrip", "--set", "times_us=2",
            "--set", "dim=8", "--set", "grid_n=13", "--set", "extent=2.2",
            "--set", "fock_s=20", "--set", "shots=2000", "--set", "n_max=14",
            "--seed", "7"]
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    out3 = tmp_path / "c"
    assert _run_cli(args + ["--out", str(out1)]) == 0
    assert _run_cli(args + ["--out", str(out2)]) == 0
    assert (out1 / "measured_t2us.csv").read_bytes() == \
        (out2 / "measured_t2us.csv").read_bytes()
    rc = _run_cli(["tomography-roundtrip", "--set", "times_us=2",
                   "--set", "dim=8", "--set", "grid_n=13",
                   "--set", "extent=2.2", "--set", "fock_s=20",
                   "--set", "shots=2000", "--set", "n_max=14",
                   "--seed", "8", "--out", str(out3)])
    assert rc == 0
    assert (out1 / "measured_t2us.csv").read_bytes() != \
        (out3 / "measured_t2us.csv").read_bytes()
    cols, _ = read_table_csv(out1 / "fidelity_vs_time.csv")
    assert cols["fidelity"][0] > 0.9


def test_cli_error_reporting(tmp_path, capsys):
    rc = _run_cli(["cat-evolution", "--out", str(tmp_path / "x"),
                   "--set", "bogus_knob=1"])
    assert rc == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "ValueError"
    assert "bogus_knob" in err["message"]

    rc = _run_cli(["cat-evolution", "--out", str(tmp_path / "y"),
                   "--set", "broken"])
    assert rc == 1

    with pytest.raises(SystemExit):
        _run_cli(["no-such-scenario"])


def test_scenario_requires_known_name():
    with pytest.raises(ValueError, match="unknown scenario"):
        Scenario(name="nope")


def test_cli_params_file(tmp_path):
    import importlib.resources as res
    text = res.files("catpump.data").joinpath("paper.params").read_text()
    pfile = tmp_path / "device.params"
    pfile.write_text(text.replace("chi_rs = 206e3 Hz", "chi_rs = 150e3 Hz"))
    out = tmp_path / "pf"
    rc = _run_cli(["flowfield", "--params", str(pfile), "--out", str(out),
                   "--set", "grid_n=11", "--set", "seeds=4"])
    assert rc == 0
    _, meta = read_table_csv(out / "fixed_points.csv")
    assert float(meta["device.chi_rs"]) == pytest.approx(2 * np.pi * 150e3)


def test_device_override_applies(tmp_path):
    out = tmp_path / "ov"
    rc = _run_cli(["flowfield", "--out", str(out), "--set", "chi_rs=100e3",
                   "--set", "grid_n=11", "--set", "seeds=4"])
    assert rc == 0
    _, meta = read_table_csv(out / "fixed_points.csv")
    assert float(meta["device.chi_rs"]) == pytest.approx(2 * np.pi * 100e3)
