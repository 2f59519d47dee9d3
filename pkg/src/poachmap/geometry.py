"""Grid kernels: windowed class counts and nearest-target distances.

Distances are measured between integer cell centres. The Euclidean transform
works on exact integer squared distances and only takes a square root at the
end, so its output can be compared bit-for-bit with the brute force search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IndivisibleDimensions, OutOfBounds


@dataclass(frozen=True, eq=False)
class DistanceGrid:
    """Distances in cell units plus the exact squared distances they came from.

    ``sentinel_used`` is set when the source mask had no true cell; every
    value is then the grid diagonal ``sqrt(n_rows**2 + n_cols**2)``.
    """

    values: np.ndarray
    squared: np.ndarray
    sentinel_used: bool = False

    @property
    def shape(self):
        return self.values.shape


def sentinel_distance(shape):
    return math.sqrt(shape[0] ** 2 + shape[1] ** 2)


def window_counts(grid, g, cls):
    """Count pixels of semantic class ``cls`` in each non-overlapping g x g block.

    ``grid`` is a :class:`~poachmap.landcover.LandCoverGrid` or a 2-D array
    of semantic class values.
    """
    sem = grid.semantic() if hasattr(grid, "semantic") else np.asarray(grid)
    g = int(g)
    if g < 1:
        raise ValueError("window size must be >= 1")
    n_rows, n_cols = sem.shape
    if n_rows % g or n_cols % g:
        raise IndivisibleDimensions(
            f"raster {n_rows}x{n_cols} is not divisible by window size {g}; crop it first")
    hits = (sem == int(cls)).reshape(n_rows // g, g, n_cols // g, g)
    return hits.sum(axis=(1, 3), dtype=np.int64)


_INF = np.iinfo(np.int64).max // 4


def _column_pass(mask):
    """Squared vertical distance to the nearest true cell in the same column."""
    n_rows, n_cols = mask.shape
    idx = np.arange(n_rows)[:, None]
    big = n_rows * 4 + 1
    # nearest true at or above
    above = np.where(mask, idx, -big)
    np.maximum.accumulate(above, axis=0, out=above)
    # nearest true at or below
    below = np.where(mask, idx, n_rows + big)[::-1]
    below = np.minimum.accumulate(below, axis=0)[::-1]
    dist = np.minimum(idx - above, below - idx).astype(np.int64)
    out = dist * dist
    out[~mask.any(axis=0)[None, :].repeat(n_rows, axis=0)] = _INF
    return out


def _lower_envelope_1d(f, out):
    """Exact 1-D squared distance transform of sampled function ``f``.

    Lower envelope of the parabolas ``(x - q)**2 + f[q]``; entries equal to
    ``_INF`` contribute no parabola. ``f`` and ``out`` are Python lists.
    """
    n = len(f)
    v = []       # parabola apexes in the envelope
    z = []       # left boundary of each parabola's region
    for q in range(n):
        fq = f[q]
        if fq >= _INF:
            continue
        hq = fq + q * q
        while v:
            p = v[-1]
            s = (hq - (f[p] + p * p)) / (2 * (q - p))
            if s <= z[-1]:
                v.pop()
                z.pop()
            else:
                break
        if v:
            z.append(s)
        else:
            z.append(-math.inf)
        v.append(q)
    if not v:
        for x in range(n):
            out[x] = _INF
        return
    k = 0
    last = len(v) - 1
    for x in range(n):
        while k < last and z[k + 1] < x:
            k += 1
        p = v[k]
        out[x] = (x - p) * (x - p) + f[p]


def squared_distance_transform(mask):
    """Exact squared Euclidean distance to the nearest true cell (int64)."""
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2 or mask.size == 0:
        raise ValueError("mask must be a non-empty 2-D grid")
    cols = _column_pass(mask)
    result = np.empty_like(cols)
    row_out = [0] * mask.shape[1]
    for r, row in enumerate(cols.tolist()):
        _lower_envelope_1d(row, row_out)
        result[r] = row_out
    return result


def exact_distance_transform(mask):
    """Euclidean distance from every cell to the nearest true cell of ``mask``.

    Two separable passes: a vertical nearest-neighbour scan per column, then
    the lower envelope of parabolas along each row. Linear in the number of
    cells. An all-false mask yields the diagonal sentinel everywhere.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2 or mask.size == 0:
        raise ValueError("mask must be a non-empty 2-D grid")
    if not mask.any():
        s = sentinel_distance(mask.shape)
        return DistanceGrid(np.full(mask.shape, s),
                            np.full(mask.shape, mask.shape[0] ** 2 + mask.shape[1] ** 2,
                                    dtype=np.int64),
                            sentinel_used=True)
    sq = squared_distance_transform(mask)
    return DistanceGrid(np.sqrt(sq.astype(np.float64)), sq)


def brute_force_squared_distance(mask, cell):
    mask = np.asarray(mask, dtype=bool)
    r, c = cell
    if not (0 <= r < mask.shape[0] and 0 <= c < mask.shape[1]):
        raise OutOfBounds(f"cell {cell} outside {mask.shape[0]}x{mask.shape[1]} grid")
    rows, cols = np.nonzero(mask)
    if rows.size == 0:
        return mask.shape[0] ** 2 + mask.shape[1] ** 2
    dr = rows.astype(np.int64) - r
    dc = cols.astype(np.int64) - c
    return int(np.min(dr * dr + dc * dc))


def brute_force_distance(mask, cell):
    """Exhaustive minimum Euclidean distance from ``cell`` to any true cell."""
    return math.sqrt(brute_force_squared_distance(mask, cell))


def chebyshev_distance_to_points(dims, points):
    """Chebyshev (8-neighbour ring) distance to the nearest of ``points``.

    Multi-source breadth-first expansion: each round dilates the reached set
    by one 3x3 step. Returns an int64 grid. With no points every value is the
    integer ceiling of the grid diagonal.
    """
    n_rows, n_cols = int(dims[0]), int(dims[1])
    if n_rows < 1 or n_cols < 1:
        raise ValueError("dims must be positive")
    dist = np.full((n_rows, n_cols), -1, dtype=np.int64)
    frontier = np.zeros((n_rows, n_cols), dtype=bool)
    for r, c in points:
        if not (0 <= r < n_rows and 0 <= c < n_cols):
            raise OutOfBounds(f"point ({r}, {c}) outside {n_rows}x{n_cols} grid")
        frontier[r, c] = True
    if not frontier.any():
        dist[:] = math.ceil(sentinel_distance((n_rows, n_cols)))
        return dist

    reached = frontier.copy()
    dist[frontier] = 0
    d = 0
    while not reached.all():
        d += 1
        grown = frontier.copy()
        grown[1:, :] |= frontier[:-1, :]
        grown[:-1, :] |= frontier[1:, :]
        vert = grown.copy()
        grown[:, 1:] |= vert[:, :-1]
        grown[:, :-1] |= vert[:, 1:]
        frontier = grown & ~reached
        dist[frontier] = d
        reached |= frontier
    return dist
