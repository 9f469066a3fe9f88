import json
import math

import numpy as np
import pytest

from catpump_render.reader import (CsvFormatError, read_map, read_table,
                                   read_tomography)
from catpump_render.render import (RenderSpec, Panel, decode_exact_png,
                                   render)
from catpump_render.cli import main

BOUND = 2 / math.pi


def _write_wigner_csv(path, n=9, extent=2.0, fn=None):
    xs = np.linspace(-extent, extent, n)
    lines = ["# kind = wigner", f"# grid_n = {n}", f"# grid_extent = {extent}",
             "# shots = 0", "re_alpha,im_alpha,value,shots"]
    for y in xs:
        for x in xs:
            v = fn(x, y) if fn else BOUND * math.exp(-2 * (x * x + y * y))
            lines.append(f"{x:.12g},{y:.12g},{v:.12g},0")
    path.write_text("\n".join(lines) + "\n")
    return path


def _write_map_csv(path, x, y, Z):
    lines = ["# x_label = f_probe_hz", "# y_label = f_pump_hz", "# complex = 0",
             "y\\x," + ",".join(f"{v:.12g}" for v in x)]
    for i, yv in enumerate(y):
        lines.append(f"{yv:.12g}," + ",".join(f"{v:.12g}" for v in Z[i]))
    path.write_text("\n".join(lines) + "\n")
    return path


def _write_table_csv(path, cols):
    names = list(cols)
    n = len(cols[names[0]])
    lines = ["# scenario = test", ",".join(names)]
    for i in range(n):
        lines.append(",".join(f"{cols[k][i]:.12g}" for k in names))
    path.write_text("\n".join(lines) + "\n")
    return path


def test_reader_roundtrip(tmp_path):
    p = _write_wigner_csv(tmp_path / "w.csv", n=5)
    grid = read_tomography(p)
    assert grid.alphas.size == 25
    x, y, Z = grid.as_square()
    assert Z.shape == (5, 5)
    assert Z[2, 2] == pytest.approx(BOUND)

    x0 = np.array([1.0, 2.0, 3.0])
    y0 = np.array([0.5, 1.5])
    Z0 = np.arange(6.0).reshape(2, 3)
    xm, ym, Zm, meta = read_map(_write_map_csv(tmp_path / "m.csv", x0, y0, Z0))
    assert np.allclose(Zm, Z0) and np.allclose(xm, x0)

    cols, _ = read_table(_write_table_csv(tmp_path / "t.csv",
                                          {"a": [1.0, 2.0], "b": [3.0, 4.0]}))
    assert np.allclose(cols["b"], [3.0, 4.0])


def test_reader_errors_carry_line_numbers(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("# kind = wigner\nre_alpha,im_alpha,value,shots\n1,2,3\n")
    with pytest.raises(CsvFormatError, match=":3"):
        read_tomography(p)
    p2 = tmp_path / "bad2.csv"
    p2.write_text("# complex = 0\ny\\x,1,2\n0.5,1,oops\n")
    with pytest.raises(CsvFormatError, match=":3.*oops"):
        read_map(p2)
    p3 = tmp_path / "empty.csv"
    p3.write_text("# nothing = here\n")
    with pytest.raises(CsvFormatError, match="no data"):
        read_table(p3)


def test_render_deterministic_bytes(tmp_path):
    csv = _write_wigner_csv(tmp_path / "w.csv")
    spec = {"out": "a.png",
            "panels": [{"kind": "wigner", "file": "w.csv", "title": "t = 0 us"}]}
    sp = tmp_path / "spec.json"
    sp.write_text(json.dumps(spec))
    assert main([str(sp)]) == 0
    first = (tmp_path / "a.png").read_bytes()
    assert main([str(sp)]) == 0
    assert (tmp_path / "a.png").read_bytes() == first
    assert len(first) > 1000


def test_exact_pixels_roundtrip_wigner(tmp_path):
    csv = _write_wigner_csv(tmp_path / "w.csv", n=9,
                            fn=lambda x, y: BOUND * math.cos(2 * x)
                            * math.exp(-(x * x + y * y)))
    out = tmp_path / "exact.png"
    spec = RenderSpec(out=str(out), exact_pixels=True, dpi=100,
                      panels=(Panel(kind="wigner", file=str(csv)),))
    render(spec)
    decoded, original, quant = decode_exact_png(out, csv, kind="wigner")
    assert np.abs(decoded - original).max() <= quant + 1e-12


def test_exact_pixels_roundtrip_map(tmp_path):
    x = np.linspace(0, 1, 7)
    y = np.linspace(0, 1, 5)
    Z = np.outer(np.sin(3 * y) + 1.2, np.cos(2 * x) + 1.5)
    csv = _write_map_csv(tmp_path / "m.csv", x, y, Z)
    out = tmp_path / "m.png"
    spec = RenderSpec(out=str(out), exact_pixels=True,
                      panels=(Panel(kind="map", file=str(csv)),))
    render(spec)
    decoded, original, quant = decode_exact_png(out, csv, kind="map")
    assert np.abs(decoded - original).max() <= quant + 1e-12


def test_vacuum_blob_is_radially_symmetric(tmp_path):
    csv = _write_wigner_csv(tmp_path / "vac.csv", n=11)
    out = tmp_path / "vac.png"
    render(RenderSpec(out=str(out), exact_pixels=True,
                      panels=(Panel(kind="wigner", file=str(csv)),)))
    decoded, original, quant = decode_exact_png(out, csv)
    assert decoded.max() == pytest.approx(decoded[5 * 10 // 10, 5], abs=quant)
    # symmetric under both mirrors and transposition, positive everywhere
    assert np.abs(decoded - decoded[::-1, :]).max() <= 2 * quant
    assert np.abs(decoded - decoded[:, ::-1]).max() <= 2 * quant
    assert np.abs(decoded - decoded.T).max() <= 2 * quant
    assert decoded.min() >= -quant


def test_four_panel_strip(tmp_path):
    files = []
    for t in (0, 2, 7, 19):
        f = _write_wigner_csv(tmp_path / f"w{t}.csv", n=7,
                              fn=lambda x, y, t=t: BOUND * math.exp(
                                  -(x - t / 10) ** 2 - y * y))
        files.append({"kind": "wigner", "file": f.name, "title": f"t = {t} us"})
    spec = {"out": "strip.png", "layout": [1, 4], "panels": files}
    sp = tmp_path / "strip.json"
    sp.write_text(json.dumps(spec))
    assert main([str(sp)]) == 0
    import matplotlib.pyplot as plt
    img = plt.imread(tmp_path / "strip.png")
    assert img.shape[1] > 3 * img.shape[0]      # four panels side by side


def test_flow_overlay(tmp_path):
    x = np.linspace(-2, 2, 21)
    y = np.linspace(-2, 2, 21)
    X, Y = np.meshgrid(x, y)
    speed = np.abs((X + 1j * Y - 1.0) * (X + 1j * Y + 1.0))
    _write_map_csv(tmp_path / "flow.csv", x, y, speed)
    steps = np.linspace(0, 1, 20)
    _write_table_csv(tmp_path / "traj.csv", {
        "trajectory": np.zeros(20), "step": np.arange(20.0),
        "re_alpha": -2 + 3 * steps, "im_alpha": 1.5 * (1 - steps)})
    _write_table_csv(tmp_path / "fps.csv", {
        "re_alpha": [0.0, 1.0, -1.0], "im_alpha": [0.0, 0.0, 0.0],
        "stable": [0.0, 1.0, 1.0]})
    spec = {"out": "flow.png",
            "panels": [{"kind": "flow", "file": "flow.csv",
                        "trajectories": "traj.csv", "fixed_points": "fps.csv"}]}
    sp = tmp_path / "flow.json"
    sp.write_text(json.dumps(spec))
    assert main([str(sp)]) == 0
    # trajectory endpoint sits on a fixed point in the data itself
    cols, _ = read_table(tmp_path / "traj.csv")
    end = cols["re_alpha"][-1] + 1j * cols["im_alpha"][-1]
    fps, _ = read_table(tmp_path / "fps.csv")
    dist = min(abs(end - (xr + 1j * xi))
               for xr, xi in zip(fps["re_alpha"], fps["im_alpha"]))
    assert dist < 1e-9


def test_lines_and_bars_panels(tmp_path):
    _write_table_csv(tmp_path / "sum.csv",
                     {"t_us": [0.0, 2, 7, 19], "nbar": [0, 0.2, 1.9, 3.8],
                      "parity": [1.0, 0.99, 0.68, 0.08]})
    _write_table_csv(tmp_path / "ph.csv",
                     {"n": np.arange(5.0), "p": [0.4, 0.1, 0.3, 0.05, 0.15]})
    spec = {"out": "panels.png", "layout": [2, 1],
            "panels": [
                {"kind": "lines", "file": "sum.csv", "x": "t_us",
                 "y": ["nbar", "parity"]},
                {"kind": "bars", "file": "ph.csv", "x": "n", "y": ["p"]}]}
    sp = tmp_path / "p.json"
    sp.write_text(json.dumps(spec))
    assert main([str(sp)]) == 0
    assert (tmp_path / "panels.png").stat().st_size > 1000


def test_cli_error_is_machine_readable(tmp_path, capsys):
    sp = tmp_path / "bad.json"
    sp.write_text(json.dumps({"out": "x.png",
                              "panels": [{"kind": "wigner",
                                          "file": "missing.csv"}]}))
    assert main([str(sp)]) == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert "missing.csv" in err["message"]

    with pytest.raises(SystemExit):
        main([])


def test_spec_validation(tmp_path):
    with pytest.raises(ValueError, match="unknown panel kind"):
        Panel(kind="scatter3d", file="x.csv")
    sp = tmp_path / "empty.json"
    sp.write_text(json.dumps({"out": "x.png", "panels": []}))
    with pytest.raises(ValueError, match="no panels"):
        RenderSpec.from_json(sp)
