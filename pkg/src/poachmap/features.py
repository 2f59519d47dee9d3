"""Feature grid construction.

Each g x g block of the land-cover raster becomes one cell with five features:

    a_h, a_t, a_g   fraction of the block that is built-up, trees, grass
    d_f, d_w        Euclidean distance (in feature-grid cells) to the nearest
                    cell containing trees / herbaceous wetland; 0 when the
                    block itself contains the class
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .errors import OutOfBounds
from .landcover import GeoTransform, SemanticClass

FEATURE_NAMES = ("a_h", "a_t", "a_g", "d_f", "d_w")


@dataclass(frozen=True)
class FeatureVector:
    a_h: float
    a_t: float
    a_g: float
    d_f: float
    d_w: float

    def as_array(self):
        return np.array([self.a_h, self.a_t, self.a_g, self.d_f, self.d_w])


@dataclass(frozen=True, eq=False)
class FeatureGrid:
    """``values`` has shape (n_rows, n_cols, 5) in :data:`FEATURE_NAMES` order."""

    values: np.ndarray
    g: int
    geo: GeoTransform | None = None
    warnings: tuple = field(default=())

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 3 or values.shape[2] != 5:
            raise ValueError(f"feature values must have shape (rows, cols, 5), got {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_rows(self):
        return self.values.shape[0]

    @property
    def n_cols(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape[:2]

    def rows(self):
        """All cells as an (n_rows * n_cols, 5) matrix in row-major order."""
        return self.values.reshape(-1, 5)

    def feature(self, name):
        return self.values[:, :, FEATURE_NAMES.index(name)]


def build_feature_grid(grid, g, min_tree_pixels=1, min_wetland_pixels=1):
    """Aggregate a land-cover raster into the (a_h, a_t, a_g, d_f, d_w) grid.

    A feature cell counts as forest (wetland) when its block holds at least
    ``min_tree_pixels`` (``min_wetland_pixels``) pixels of that class.
    """
    sem = grid.semantic()
    area = float(g * g)
    built = geometry.window_counts(sem, g, SemanticClass.BUILT_UP)
    trees = geometry.window_counts(sem, g, SemanticClass.TREES)
    grass = geometry.window_counts(sem, g, SemanticClass.GRASS)
    wet = geometry.window_counts(sem, g, SemanticClass.WETLAND)

    d_f = geometry.exact_distance_transform(trees >= min_tree_pixels)
    d_w = geometry.exact_distance_transform(wet >= min_wetland_pixels)
    notes = []
    if d_f.sentinel_used:
        notes.append("no forest cells: d_f set to the grid diagonal")
    if d_w.sentinel_used:
        notes.append("no wetland cells: d_w set to the grid diagonal")
    for note in notes:
        warnings.warn(note, RuntimeWarning, stacklevel=2)

    values = np.stack([built / area, trees / area, grass / area, d_f.values, d_w.values], axis=-1)
    geo = grid.geo.coarsen(g) if grid.geo is not None else None
    return FeatureGrid(values, int(g), geo, tuple(notes))


def feature_at(V, i, j):
    if not (0 <= i < V.n_rows and 0 <= j < V.n_cols):
        raise OutOfBounds(f"cell ({i}, {j}) outside {V.n_rows}x{V.n_cols} feature grid")
    return FeatureVector(*(float(x) for x in V.values[i, j]))


def _fmt(x):
    return repr(float(x))


def export_features(V, sink=None):
    """Write the grid as CSV ``i,j,a_h,a_t,a_g,d_f,d_w`` in row-major order.

    Floats are written with ``repr`` so a re-import is exact. Returns the
    text when ``sink`` is None.
    """
    out = io.StringIO() if sink is None else sink
    out.write("i,j," + ",".join(FEATURE_NAMES) + "\n")
    for i in range(V.n_rows):
        for j in range(V.n_cols):
            out.write(f"{i},{j}," + ",".join(_fmt(x) for x in V.values[i, j]) + "\n")
    if sink is None:
        return out.getvalue()


def read_features(source, g=1, geo=None):
    """Inverse of :func:`export_features`."""
    text = source if isinstance(source, str) else source.read()
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != ["i", "j", *FEATURE_NAMES]:
        raise ValueError(f"unexpected feature CSV header {header}")
    cells = [(int(r[0]), int(r[1]), [float(x) for x in r[2:]]) for r in reader if r]
    n_rows = max(c[0] for c in cells) + 1
    n_cols = max(c[1] for c in cells) + 1
    values = np.empty((n_rows, n_cols, 5))
    for i, j, vec in cells:
        values[i, j] = vec
    return FeatureGrid(values, g, geo)
