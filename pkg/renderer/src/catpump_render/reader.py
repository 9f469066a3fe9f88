"""
Parsers for the three catpump CSV layouts.

- tomography grids: `re_alpha,im_alpha,value,shots` rows; the '#' header
  carries kind / measurement-model metadata plus grid_extent / grid_n for
  square grids.
- wide maps: header row `y\\x,<x0>,<x1>,...`, one CSV row per grid row;
  complex maps interleave `re@x,im@x` column pairs (meta key complex = 1).
- tables: plain named columns.

All parse failures raise CsvFormatError with the file and line number.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class CsvFormatError(ValueError):
    pass


def _split_meta(path):
    meta: dict[str, str] = {}
    body: list[tuple[int, str]] = []
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            if "=" in line:
                key, val = line[1:].split("=", 1)
                meta[key.strip()] = val.strip()
            continue
        if line.strip():
            body.append((lineno, line))
    if not body:
        raise CsvFormatError(f"{path}: no data rows")
    return meta, body


def _floats(path, lineno, tokens):
    out = []
    for tok in tokens:
        try:
            out.append(float(tok))
        except ValueError:
            raise CsvFormatError(f"{path}:{lineno}: not a number: {tok!r}")
    return out


@dataclass(frozen=True)
class WignerGrid:
    alphas: np.ndarray
    values: np.ndarray
    meta: dict

    def as_square(self):
        """(x, y, Z) for a square grid (uses grid_n metadata or inference)."""
        n = int(self.meta.get("grid_n", round(np.sqrt(self.alphas.size))))
        if n * n != self.alphas.size:
            raise CsvFormatError("grid is not square; cannot reshape")
        A = self.alphas.reshape(n, n)
        Z = self.values.reshape(n, n)
        return A.real[0, :], A.imag[:, 0], Z


def read_tomography(path) -> WignerGrid:
    meta, body = _split_meta(path)
    header_line, header = body[0]
    if header.split(",")[0] != "re_alpha":
        raise CsvFormatError(f"{path}:{header_line}: expected tomography "
                             f"header re_alpha,im_alpha,value,shots")
    alphas, values = [], []
    for lineno, line in body[1:]:
        parts = line.split(",")
        if len(parts) != 4:
            raise CsvFormatError(f"{path}:{lineno}: expected 4 columns, "
                                 f"got {len(parts)}")
        re, im, val, _ = _floats(path, lineno, parts)
        alphas.append(re + 1j * im)
        values.append(val)
    return WignerGrid(np.array(alphas), np.array(values), meta)


def read_map(path):
    meta, body = _split_meta(path)
    _, header = body[0]
    cols = header.split(",")
    is_complex = meta.get("complex", "0") == "1"
    if is_complex:
        try:
            x = np.array([float(h.split("@", 1)[1]) for h in cols[1::2]])
        except (IndexError, ValueError):
            raise CsvFormatError(f"{path}:{body[0][0]}: malformed complex "
                                 f"map header")
    else:
        x = np.array(_floats(path, body[0][0], cols[1:]))
    ys, rows = [], []
    width = len(cols)
    for lineno, line in body[1:]:
        parts = line.split(",")
        if len(parts) != width:
            raise CsvFormatError(f"{path}:{lineno}: expected {width} "
                                 f"columns, got {len(parts)}")
        vals = _floats(path, lineno, parts)
        ys.append(vals[0])
        rows.append(vals[1:])
    data = np.array(rows)
    Z = data[:, 0::2] + 1j * data[:, 1::2] if is_complex else data
    return x, np.array(ys), Z, meta


def read_table(path):
    meta, body = _split_meta(path)
    _, header = body[0]
    names = header.split(",")
    rows = []
    for lineno, line in body[1:]:
        parts = line.split(",")
        if len(parts) != len(names):
            raise CsvFormatError(f"{path}:{lineno}: expected {len(names)} "
                                 f"columns, got {len(parts)}")
        rows.append(_floats(path, lineno, parts))
    data = np.array(rows) if rows else np.zeros((0, len(names)))
    return {name: data[:, i] for i, name in enumerate(names)}, meta
