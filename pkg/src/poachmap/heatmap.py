"""Probability heatmaps over the feature grid and their PGM / CSV encodings."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import ScalerMissing, ScalerUnexpected


@dataclass(frozen=True, eq=False)
class ProbabilityGrid:
    values: np.ndarray
    geo: object = None

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 2 or v.size == 0:
            raise ValueError("probability grid must be a non-empty 2-D array")
        if np.any((v < 0) | (v > 1)) or not np.all(np.isfinite(v)):
            raise ValueError("probabilities must lie in [0, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def shape(self):
        return self.values.shape


def generate_heatmap(model, V, scaler=None, batch=65536):
    """P[i, j] = clamp(model(V[i, j]), 0, 1) for every cell of ``V``.

    Families trained on standardised features must be given their scaler;
    tree families must not be.
    """
    if model.needs_scaling and scaler is None:
        raise ScalerMissing(f"{model.family} needs the scaler it was trained with")
    if not model.needs_scaling and scaler is not None:
        raise ScalerUnexpected(f"{model.family} was trained on raw features")
    rows = V.rows()
    if scaler is not None:
        rows = scaler.transform(rows)
    raw = np.concatenate([model.predict(rows[s:s + batch])
                          for s in range(0, len(rows), batch)])
    return ProbabilityGrid(np.clip(raw, 0.0, 1.0).reshape(V.shape), V.geo)


def gray_levels(P, invert=False):
    """8-bit gray per cell: round-half-up of 255 * (1 - p), dark = likely."""
    p = P.values if invert else 1.0 - P.values
    return np.floor(255.0 * p + 0.5).astype(np.uint8)


def write_pgm(P, sink=None, invert=False):
    """Binary PGM (P5, maxval 255). Returns bytes when ``sink`` is None."""
    n_rows, n_cols = P.shape
    data = b"P5\n%d %d\n255\n" % (n_cols, n_rows) + gray_levels(P, invert).tobytes()
    if sink is None:
        return data
    sink.write(data)


def read_pgm(data):
    """Parse a P5 file written by :func:`write_pgm` into a uint8 array."""
    magic, dims, maxval, rest = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ValueError("not an 8-bit binary PGM")
    w, h = (int(x) for x in dims.split())
    return np.frombuffer(rest, dtype=np.uint8, count=w * h).reshape(h, w)


def write_csv(P, sink=None):
    """CSV ``i,j,p`` in row-major order with round-trip float precision."""
    out = io.StringIO() if sink is None else sink
    out.write("i,j,p\n")
    for i, row in enumerate(P.values.tolist()):
        for j, p in enumerate(row):
            out.write(f"{i},{j},{p!r}\n")
    if sink is None:
        return out.getvalue()


def read_csv(source):
    text = source if isinstance(source, str) else source.read()
    reader = csv.reader(io.StringIO(text))
    if next(reader) != ["i", "j", "p"]:
        raise ValueError("expected header i,j,p")
    cells = [(int(i), int(j), float(p)) for i, j, p in reader]
    n_rows = max(c[0] for c in cells) + 1
    n_cols = max(c[1] for c in cells) + 1
    values = np.empty((n_rows, n_cols))
    for i, j, p in cells:
        values[i, j] = p
    return ProbabilityGrid(values)
