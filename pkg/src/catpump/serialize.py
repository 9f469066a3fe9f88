"""
CSV emission for all scenario outputs.

Every file opens with '#'-prefixed metadata lines holding the fully
resolved parameter set, so any output can be regenerated bit-identically
from its own header. Three layouts:

- tomography grids: long rows `re_alpha,im_alpha,value,shots`
- field maps: wide matrix, first column the y coordinate, header row the
  x axis; complex maps interleave re@x / im@x column pairs
- tables: ordinary named columns
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .tomography import MeasurementModel, TomographyGrid

_FLOAT_FMT = "%.12g"


def _fmt(v) -> str:
    if isinstance(v, float):
        return _FLOAT_FMT % v
    if isinstance(v, complex):
        return f"{_FLOAT_FMT % v.real}{'+' if v.imag >= 0 else '-'}{_FLOAT_FMT % abs(v.imag)}j"
    return str(v)


def _write_meta(buf: io.StringIO, meta: dict):
    for key in meta:
        buf.write(f"# {key} = {_fmt(meta[key])}\n")


def write_tomography_csv(path, grid: TomographyGrid, meta: dict | None = None):
    buf = io.StringIO()
    m = dict(meta or {})
    m["kind"] = grid.kind
    m["n_max"] = "inf" if grid.model.n_max is None else grid.model.n_max
    m["p_gg"] = grid.model.p_gg
    m["p_ee"] = grid.model.p_ee
    shots = grid.model.shots
    m["shots"] = 0 if shots is None else shots
    _write_meta(buf, m)
    buf.write("re_alpha,im_alpha,value,shots\n")
    shots_col = 0 if shots is None else shots
    for al, v in zip(grid.alphas.ravel(), grid.values.ravel()):
        buf.write(f"{_FLOAT_FMT % al.real},{_FLOAT_FMT % al.imag},"
                  f"{_FLOAT_FMT % v},{shots_col}\n")
    Path(path).write_text(buf.getvalue())


def read_tomography_csv(path) -> tuple[TomographyGrid, dict]:
    meta: dict[str, str] = {}
    alphas, values = [], []
    shots = None
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if line.startswith("#"):
            if "=" in line:
                k, v = line[1:].split("=", 1)
                meta[k.strip()] = v.strip()
            continue
        if line.startswith("re_alpha") or not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 4 columns, got {len(parts)}")
        alphas.append(float(parts[0]) + 1j * float(parts[1]))
        values.append(float(parts[2]))
        shots = int(parts[3])
    n_max = meta.get("n_max", "inf")
    model = MeasurementModel(
        n_max=None if n_max == "inf" else int(n_max),
        p_gg=float(meta.get("p_gg", 1.0)), p_ee=float(meta.get("p_ee", 1.0)),
        shots=None if not shots else shots)
    grid = TomographyGrid(alphas=np.array(alphas), values=np.array(values),
                          kind=meta.get("kind", "wigner"), model=model)
    return grid, meta


def write_map_csv(path, x, y, Z, meta: dict | None = None,
                  x_label: str = "x", y_label: str = "y"):
    """Wide-format map: one CSV row per grid row, complex split into re/im."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    Z = np.asarray(Z)
    if Z.shape != (y.size, x.size):
        raise ValueError(f"map shape {Z.shape} != (len(y), len(x)) = {(y.size, x.size)}")
    is_complex = np.iscomplexobj(Z)
    buf = io.StringIO()
    m = dict(meta or {})
    m["x_label"] = x_label
    m["y_label"] = y_label
    m["complex"] = int(is_complex)
    _write_meta(buf, m)
    if is_complex:
        cols = ",".join(f"re@{_FLOAT_FMT % xv},im@{_FLOAT_FMT % xv}" for xv in x)
    else:
        cols = ",".join(_FLOAT_FMT % xv for xv in x)
    buf.write(f"{y_label}\\{x_label},{cols}\n")
    for i, yv in enumerate(y):
        if is_complex:
            row = ",".join(f"{_FLOAT_FMT % Z[i, j].real},{_FLOAT_FMT % Z[i, j].imag}"
                           for j in range(x.size))
        else:
            row = ",".join(_FLOAT_FMT % Z[i, j] for j in range(x.size))
        buf.write(f"{_FLOAT_FMT % yv},{row}\n")
    Path(path).write_text(buf.getvalue())


def read_map_csv(path):
    meta: dict[str, str] = {}
    rows = []
    header = None
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if line.startswith("#"):
            if "=" in line:
                k, v = line[1:].split("=", 1)
                meta[k.strip()] = v.strip()
            continue
        if not line.strip():
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append([float(t) for t in line.split(",")])
    if header is None:
        raise ValueError(f"{path}: no header row")
    is_complex = meta.get("complex", "0") == "1"
    data = np.array(rows)
    y = data[:, 0]
    vals = data[:, 1:]
    if is_complex:
        x = np.array([float(h.split("@", 1)[1]) for h in header[1::2]])
        Z = vals[:, 0::2] + 1j * vals[:, 1::2]
    else:
        x = np.array([float(h) for h in header[1:]])
        Z = vals
    return x, y, Z, meta


def write_table_csv(path, columns: dict, meta: dict | None = None):
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    n = arrays[0].size
    for name, arr in zip(names, arrays):
        if arr.size != n:
            raise ValueError(f"column {name!r} length {arr.size} != {n}")
    buf = io.StringIO()
    _write_meta(buf, dict(meta or {}))
    buf.write(",".join(names) + "\n")
    for i in range(n):
        buf.write(",".join(_fmt(arr[i].item() if hasattr(arr[i], "item") else arr[i])
                           for arr in arrays) + "\n")
    Path(path).write_text(buf.getvalue())


def read_table_csv(path):
    meta: dict[str, str] = {}
    header = None
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            if "=" in line:
                k, v = line[1:].split("=", 1)
                meta[k.strip()] = v.strip()
            continue
        if not line.strip():
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append([float(t) for t in line.split(",")])
    data = np.array(rows) if rows else np.zeros((0, len(header or [])))
    return {name: data[:, j] for j, name in enumerate(header or [])}, meta
