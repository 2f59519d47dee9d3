"""Incident ingestion and distance-decayed training labels.

A feature cell at Chebyshev distance ``d`` from the nearest incident gets

    d == 0                               -> 1.0
    1 <= d <= positive_radius            -> 1 - decay_step * d
    positive_radius < d <= zero_radius   -> excluded from training
    d > zero_radius                      -> 0.0
"""

from __future__ import annotations

import csv
import io
import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .errors import EmptyIncidents, InvalidParams, MalformedRow, OutOfExtent
from .features import FEATURE_NAMES


@dataclass(frozen=True)
class IncidentSet:
    cells: tuple
    coordinates: tuple = ()
    duplicates: int = 0

    def __len__(self):
        return len(self.cells)


def make_incidents(cells, coordinates=()):
    """Deduplicate cells, keeping first-seen order."""
    seen = {}
    for c in cells:
        seen.setdefault((int(c[0]), int(c[1])), None)
    dups = len(cells) - len(seen)
    if dups:
        warnings.warn(f"{dups} duplicate incident cell(s) collapsed", RuntimeWarning, stacklevel=2)
    return IncidentSet(tuple(seen), tuple(coordinates), dups)


@dataclass(frozen=True)
class LabelPolicy:
    decay_step: float = 0.1
    positive_radius: int = 9
    zero_radius: int = 400

    def __post_init__(self):
        if not self.decay_step > 0:
            raise InvalidParams("decay_step must be positive")
        if not 0 <= self.positive_radius < self.zero_radius:
            raise InvalidParams("need 0 <= positive_radius < zero_radius")
        if self.decay_step * self.positive_radius >= 1:
            raise InvalidParams("decay_step * positive_radius must be < 1")

    def label(self, d):
        """Label for ring distance ``d``, or None if the cell is excluded."""
        if d <= self.positive_radius:
            return 1.0 - self.decay_step * d
        if d > self.zero_radius:
            return 0.0
        return None


@dataclass(frozen=True, eq=False)
class LabeledSet:
    """Training rows: features X (n, 5), labels y (n,), origin cells (n, 2)."""

    X: np.ndarray
    y: np.ndarray
    cells: np.ndarray
    ring: np.ndarray | None = field(default=None)

    def __len__(self):
        return len(self.y)

    def take(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return LabeledSet(self.X[idx], self.y[idx], self.cells[idx],
                          None if self.ring is None else self.ring[idx])


def parse_incidents(text, geo, g, shape):
    """Read incidents from CSV with a ``lat,lon`` or ``i,j`` header.

    ``shape`` is the raster size in pixels. Geographic rows go through
    ``geo`` to a pixel and then to feature cell ``(row // g, col // g)``;
    ``i,j`` rows are feature cells already.
    """
    if not isinstance(text, str):
        text = text.read()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise MalformedRow("empty incident file", 0)
    header = [h.strip().lower() for h in rows[0]]
    if header == ["lat", "lon"]:
        geographic = True
    elif header == ["i", "j"]:
        geographic = False
    else:
        raise MalformedRow(f"header must be 'lat,lon' or 'i,j', got {rows[0]}", 1)

    n_rows, n_cols = shape[0] // g, shape[1] // g
    cells, coords = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not x.strip() for x in row):
            continue
        if len(row) != 2:
            raise MalformedRow(f"expected 2 fields, got {len(row)}", lineno)
        try:
            if geographic:
                lat, lon = float(row[0]), float(row[1])
            else:
                i, j = int(row[0]), int(row[1])
        except ValueError:
            raise MalformedRow(f"unparseable values {row}", lineno) from None
        if geographic:
            pr, pc = geo.pixel_of(lat, lon)
            if not (0 <= pr < shape[0] and 0 <= pc < shape[1]):
                raise OutOfExtent(f"({lat}, {lon}) is outside the raster", lineno)
            i, j = pr // g, pc // g
            coords.append((lat, lon))
        if not (0 <= i < n_rows and 0 <= j < n_cols):
            raise OutOfExtent(f"cell ({i}, {j}) outside {n_rows}x{n_cols} feature grid", lineno)
        cells.append((i, j))
    return make_incidents(cells, coords)


def label_grid(shape, incidents, policy=LabelPolicy()):
    """Per-cell label (NaN where excluded) and ring distance for a grid of ``shape``."""
    if len(incidents.cells) == 0:
        raise EmptyIncidents("at least one incident is required to synthesise labels")
    dist = geometry.chebyshev_distance_to_points(shape, incidents.cells)
    labels = np.full(dist.shape, np.nan)
    pos = dist <= policy.positive_radius
    labels[pos] = 1.0 - policy.decay_step * dist[pos]
    labels[dist > policy.zero_radius] = 0.0
    return labels, dist


def synthesize_labels(V, incidents, policy=LabelPolicy()):
    """Build the training set from a feature grid and incident cells.

    Rows are emitted in row-major scan order of the kept cells.
    """
    labels, dist = label_grid(V.shape, incidents, policy)
    keep = ~np.isnan(labels)
    ii, jj = np.nonzero(keep)
    return LabeledSet(
        X=V.values[ii, jj].copy(),
        y=labels[ii, jj],
        cells=np.stack([ii, jj], axis=1).astype(np.int64),
        ring=dist[ii, jj],
    )


def label_stats(labeled):
    y = np.asarray(labeled.y)
    stats = {"positive": int(np.sum(y > 0)), "zero": int(np.sum(y == 0))}
    if labeled.ring is not None:
        stats["by_ring"] = dict(sorted(Counter(labeled.ring[y > 0].tolist()).items()))
    else:
        stats["by_ring"] = {}
    return stats


def export_labels(labeled, sink=None):
    """CSV ``i,j,a_h,a_t,a_g,d_f,d_w,label``."""
    out = io.StringIO() if sink is None else sink
    out.write("i,j," + ",".join(FEATURE_NAMES) + ",label\n")
    for (i, j), x, y in zip(labeled.cells.tolist(), labeled.X.tolist(), labeled.y.tolist()):
        out.write(f"{i},{j}," + ",".join(repr(v) for v in x) + f",{y!r}\n")
    if sink is None:
        return out.getvalue()
