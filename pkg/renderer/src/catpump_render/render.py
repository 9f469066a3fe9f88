"""
Panel rendering. A render spec (JSON) names input CSVs, panel kinds and
the output PNG; rendering is stateless and deterministic for identical
inputs.

Panel kinds:
- wigner: tomography-grid CSV as a heatmap with a diverging colormap whose
  scale is forced symmetric about zero (default bound 2/pi).
- map: wide-format map CSV (spectroscopy-style), sequential colormap,
  optional log scaling.
- flow: speed map with trajectory overlay and fixed-point markers.
- lines: table columns as line plots.
- bars: table columns as a bar chart (photon distributions).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .reader import read_map, read_table, read_tomography

WIGNER_BOUND = 2.0 / math.pi
PANEL_KINDS = ("wigner", "map", "flow", "lines", "bars")


@dataclass(frozen=True)
class Panel:
    kind: str
    file: str
    title: str = ""
    cmap: str | None = None
    vmin: float | None = None
    vmax: float | None = None
    log: bool = False
    x: str | None = None
    y: tuple[str, ...] = ()
    trajectories: str | None = None
    fixed_points: str | None = None

    def __post_init__(self):
        if self.kind not in PANEL_KINDS:
            raise ValueError(f"unknown panel kind {self.kind!r}; "
                             f"choose from {PANEL_KINDS}")


@dataclass(frozen=True)
class RenderSpec:
    out: str
    panels: tuple[Panel, ...]
    layout: tuple[int, int] | None = None
    dpi: int = 100
    exact_pixels: bool = False
    panel_size: float = 3.2

    @staticmethod
    def from_json(path) -> "RenderSpec":
        raw = json.loads(Path(path).read_text())
        base = Path(path).parent
        panels = []
        for p in raw.get("panels", []):
            p = dict(p)
            for key in ("file", "trajectories", "fixed_points"):
                if p.get(key):
                    p[key] = str((base / p[key]))
            if "y" in p:
                p["y"] = tuple(np.atleast_1d(p["y"]).tolist())
            panels.append(Panel(**p))
        if not panels:
            raise ValueError(f"{path}: spec has no panels")
        layout = raw.get("layout")
        return RenderSpec(
            out=str(base / raw["out"]) if not Path(raw["out"]).is_absolute()
            else raw["out"],
            panels=tuple(panels),
            layout=tuple(layout) if layout else None,
            dpi=int(raw.get("dpi", 100)),
            exact_pixels=bool(raw.get("exact_pixels", False)),
            panel_size=float(raw.get("panel_size", 3.2)))


def _wigner_panel(ax, panel: Panel):
    grid = read_tomography(panel.file)
    x, y, Z = grid.as_square()
    bound = panel.vmax if panel.vmax is not None else WIGNER_BOUND
    # Wigner maps always use a scale symmetric about zero
    im = ax.imshow(Z, origin="lower", cmap=panel.cmap or "RdBu_r",
                   vmin=-bound, vmax=bound, interpolation="nearest",
                   extent=(x[0], x[-1], y[0], y[-1]), aspect="equal")
    return im


def _map_panel(ax, panel: Panel):
    x, y, Z, meta = read_map(panel.file)
    data = np.abs(Z) if np.iscomplexobj(Z) else Z
    if panel.log:
        data = np.log10(np.maximum(data, 1e-30))
    im = ax.imshow(data, origin="lower", cmap=panel.cmap or "gray_r",
                   vmin=panel.vmin, vmax=panel.vmax, interpolation="nearest",
                   extent=(x[0], x[-1], y[0], y[-1]), aspect="auto")
    ax.set_xlabel(meta.get("x_label", "x"))
    ax.set_ylabel(meta.get("y_label", "y"))
    return im


def _flow_panel(ax, panel: Panel):
    x, y, Z, _ = read_map(panel.file)
    data = np.abs(Z) if np.iscomplexobj(Z) else Z
    im = ax.imshow(np.log10(np.maximum(data, 1e-12 * data.max())),
                   origin="lower", cmap=panel.cmap or "viridis",
                   interpolation="nearest",
                   extent=(x[0], x[-1], y[0], y[-1]), aspect="equal")
    if panel.trajectories:
        cols, _ = read_table(panel.trajectories)
        for tid in np.unique(cols["trajectory"]):
            sel = cols["trajectory"] == tid
            ax.plot(cols["re_alpha"][sel], cols["im_alpha"][sel],
                    color="white", linewidth=0.8)
    if panel.fixed_points:
        fps, _ = read_table(panel.fixed_points)
        stable = fps.get("stable", np.ones_like(fps["re_alpha"]))
        for xr, xi, st in zip(fps["re_alpha"], fps["im_alpha"], stable):
            marker = "o" if st > 0.5 else "x"
            ax.plot([xr], [xi], marker=marker, color="red", markersize=6)
    ax.set_xlim(x[0], x[-1])
    ax.set_ylim(y[0], y[-1])
    return im


def _lines_panel(ax, panel: Panel):
    cols, _ = read_table(panel.file)
    xkey = panel.x or list(cols)[0]
    ykeys = panel.y or tuple(k for k in cols if k != xkey)
    for key in ykeys:
        ax.plot(cols[xkey], cols[key], marker="o", markersize=3, label=key)
    ax.set_xlabel(xkey)
    if len(ykeys) > 1:
        ax.legend(frameon=False, fontsize=8)
    else:
        ax.set_ylabel(ykeys[0])
    return None


def _bars_panel(ax, panel: Panel):
    cols, _ = read_table(panel.file)
    xkey = panel.x or list(cols)[0]
    ykeys = panel.y or tuple(k for k in cols if k != xkey)
    width = 0.8 / len(ykeys)
    for i, key in enumerate(ykeys):
        ax.bar(cols[xkey] + (i - (len(ykeys) - 1) / 2) * width, cols[key],
               width=width, label=key)
    ax.set_xlabel(xkey)
    if len(ykeys) > 1:
        ax.legend(frameon=False, fontsize=8)
    return None


_PANEL_FNS = {"wigner": _wigner_panel, "map": _map_panel, "flow": _flow_panel,
              "lines": _lines_panel, "bars": _bars_panel}


def _render_exact(spec: RenderSpec) -> Path:
    """One panel, one image pixel block per grid cell, no decorations.

    This mode exists for data-fidelity probing: a pixel maps back to the
    CSV value through the declared color scale with only colormap
    quantization error.
    """
    if len(spec.panels) != 1:
        raise ValueError("exact_pixels mode renders exactly one panel")
    panel = spec.panels[0]
    if panel.kind == "wigner":
        grid = read_tomography(panel.file)
        _, _, Z = grid.as_square()
        bound = panel.vmax if panel.vmax is not None else WIGNER_BOUND
        vmin, vmax = -bound, bound
        cmap = panel.cmap or "RdBu_r"
    elif panel.kind == "map":
        _, _, Z, _ = read_map(panel.file)
        Z = np.abs(Z) if np.iscomplexobj(Z) else Z
        vmin = panel.vmin if panel.vmin is not None else float(Z.min())
        vmax = panel.vmax if panel.vmax is not None else float(Z.max())
        cmap = panel.cmap or "gray_r"
    else:
        raise ValueError("exact_pixels supports wigner and map panels")
    ny, nx = Z.shape
    fig = plt.figure(figsize=(nx / spec.dpi, ny / spec.dpi), dpi=spec.dpi)
    ax = fig.add_axes((0, 0, 1, 1))
    ax.set_axis_off()
    ax.imshow(Z, origin="lower", cmap=cmap, vmin=vmin, vmax=vmax,
              interpolation="nearest", aspect="auto")
    out = Path(spec.out)
    fig.savefig(out, dpi=spec.dpi)
    plt.close(fig)
    return out


def render(spec: RenderSpec) -> Path:
    """Render all panels into one PNG; returns the output path."""
    if spec.exact_pixels:
        return _render_exact(spec)
    n = len(spec.panels)
    rows, cols = spec.layout if spec.layout else (1, n)
    if rows * cols < n:
        raise ValueError(f"layout {rows}x{cols} too small for {n} panels")
    fig, axes = plt.subplots(rows, cols,
                             figsize=(cols * spec.panel_size,
                                      rows * spec.panel_size),
                             dpi=spec.dpi, squeeze=False)
    for ax in axes.ravel():
        ax.set_visible(False)
    for panel, ax in zip(spec.panels, axes.ravel()):
        ax.set_visible(True)
        im = _PANEL_FNS[panel.kind](ax, panel)
        if panel.title:
            ax.set_title(panel.title, fontsize=9)
        if im is not None and panel.kind != "flow":
            fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    out = Path(spec.out)
    fig.savefig(out, dpi=spec.dpi)
    plt.close(fig)
    return out


def decode_exact_png(png_path, csv_path, kind="wigner", cmap=None,
                     vmin=None, vmax=None):
    """Invert an exact_pixels PNG back to values via the colormap LUT.

    Returns (decoded, original, max_quantization_error); used by the
    data-fidelity check that the renderer never alters data.
    """
    img = plt.imread(png_path)            # float in [0, 1], shape (ny, nx, 4)
    rgb = np.round(img[..., :3] * 255).astype(int)
    if kind == "wigner":
        grid = read_tomography(csv_path)
        _, _, Z = grid.as_square()
        bound = vmax if vmax is not None else WIGNER_BOUND
        lo, hi = -bound, bound
        cmap = cmap or "RdBu_r"
    else:
        _, _, Z, _ = read_map(csv_path)
        Z = np.abs(Z) if np.iscomplexobj(Z) else Z
        lo = vmin if vmin is not None else float(Z.min())
        hi = vmax if vmax is not None else float(Z.max())
        cmap = cmap or "gray_r"
    # imshow bins norm(v) into 256 LUT entries by flooring norm * 256;
    # decoding therefore returns bin centers, and neighboring LUT entries
    # may collide after 8-bit color rounding, so the error bound is two bins
    cm = matplotlib.colormaps[cmap]
    lut = np.round(np.array(cm(np.arange(256)))[:, :3] * 255).astype(int)
    rgb = rgb[::-1]                       # origin="lower" flips rows
    ny, nx = Z.shape
    py, px = img.shape[0] // ny, img.shape[1] // nx
    decoded = np.empty_like(Z, dtype=float)
    for i in range(ny):
        for j in range(nx):
            pixel = rgb[i * py + py // 2, j * px + px // 2]
            idx = int(np.argmin(np.abs(lut - pixel).sum(axis=1)))
            decoded[i, j] = lo + (hi - lo) * (idx + 0.5) / 256.0
    quant = 2.0 * (hi - lo) / 256.0
    return decoded, Z, quant
