"""Classified land-cover rasters.

A raster is a grid of integer class codes (WorldCover style) plus a
geotransform. Codes are resolved to one of five semantic classes through a
:class:`ClassMap`; row 0 is the northern edge of the raster.
"""

from __future__ import annotations

import enum
import io
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    MalformedHeader,
    NonIntegerCode,
    OutOfBounds,
    UnmappedCode,
)


class SemanticClass(enum.IntEnum):
    BUILT_UP = 0
    TREES = 1
    GRASS = 2
    WETLAND = 3
    OTHER = 4


# ESA WorldCover 10 m legend
WORLDCOVER_CODES = {
    10: SemanticClass.TREES,        # tree cover
    20: SemanticClass.OTHER,        # shrubland
    30: SemanticClass.GRASS,        # grassland
    40: SemanticClass.OTHER,        # cropland
    50: SemanticClass.BUILT_UP,     # built-up
    60: SemanticClass.OTHER,        # bare / sparse vegetation
    70: SemanticClass.OTHER,        # snow and ice
    80: SemanticClass.OTHER,        # permanent water bodies
    90: SemanticClass.WETLAND,      # herbaceous wetland
    95: SemanticClass.OTHER,        # mangroves
    100: SemanticClass.OTHER,       # moss and lichen
}


@dataclass(frozen=True)
class ClassMap:
    """Mapping from raster code to :class:`SemanticClass`."""

    code_table: dict = field(default_factory=lambda: dict(WORLDCOVER_CODES))

    def __post_init__(self):
        table = {int(k): SemanticClass(v) for k, v in self.code_table.items()}
        object.__setattr__(self, "code_table", table)

    def with_overrides(self, overrides):
        table = dict(self.code_table)
        table.update({int(k): SemanticClass(v) for k, v in overrides.items()})
        return ClassMap(table)

    def lookup(self, code, strict=True):
        try:
            return self.code_table[int(code)]
        except KeyError:
            if strict:
                raise UnmappedCode(int(code)) from None
            return SemanticClass.OTHER

    def semantic(self, codes, strict=True):
        """Vectorised lookup: integer code array -> array of class values."""
        codes = np.asarray(codes)
        uniq, inverse = np.unique(codes, return_inverse=True)
        resolved = np.array([self.lookup(c, strict) for c in uniq], dtype=np.int8)
        return resolved[inverse].reshape(codes.shape)


@dataclass(frozen=True)
class GeoTransform:
    """North-west corner plus a square pixel size, all in degrees."""

    origin_lat: float
    origin_lon: float
    pixel_size: float

    def __post_init__(self):
        if not self.pixel_size > 0:
            raise ValueError(f"pixel_size must be positive, got {self.pixel_size}")

    @classmethod
    def from_header(cls, header):
        cellsize = float(header["cellsize"])
        return cls(
            origin_lat=float(header["yllcorner"]) + int(header["nrows"]) * cellsize,
            origin_lon=float(header["xllcorner"]),
            pixel_size=cellsize,
        )

    def pixel_center(self, row, col):
        """(lat, lon) of the center of pixel ``(row, col)``."""
        return (self.origin_lat - (row + 0.5) * self.pixel_size,
                self.origin_lon + (col + 0.5) * self.pixel_size)

    def pixel_of(self, lat, lon):
        """Pixel ``(row, col)`` containing a point; edges belong to the south/east pixel."""
        row = math.floor((self.origin_lat - lat) / self.pixel_size)
        col = math.floor((lon - self.origin_lon) / self.pixel_size)
        return row, col

    def coarsen(self, g):
        return GeoTransform(self.origin_lat, self.origin_lon, self.pixel_size * g)


@dataclass(frozen=True, eq=False)
class LandCoverGrid:
    codes: np.ndarray
    geo: GeoTransform
    classes: ClassMap = field(default_factory=ClassMap)
    nodata: int | None = None

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.int64)
        if codes.ndim != 2 or codes.shape[0] < 1 or codes.shape[1] < 1:
            raise DimensionMismatch(f"raster must be a non-empty 2-D grid, got shape {codes.shape}")
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)

    @property
    def n_rows(self):
        return self.codes.shape[0]

    @property
    def n_cols(self):
        return self.codes.shape[1]

    @property
    def shape(self):
        return self.codes.shape

    def semantic(self, strict=False):
        """Grid of :class:`SemanticClass` values (as int8)."""
        return self.classes.semantic(self.codes, strict=strict)

    def __eq__(self, other):
        if not isinstance(other, LandCoverGrid):
            return NotImplemented
        return (np.array_equal(self.codes, other.codes) and self.geo == other.geo
                and self.classes == other.classes and self.nodata == other.nodata)

    __hash__ = None


@dataclass
class ValidationReport:
    counts: dict
    unmapped: list
    valid: bool


_HEADER_INT = ("ncols", "nrows")
_HEADER_FLOAT = ("xllcorner", "yllcorner", "cellsize")
_HEADER_KEYS = _HEADER_INT + _HEADER_FLOAT + ("nodata_value",)


def _read_header(lines):
    header = {}
    consumed = 0
    for line in lines:
        parts = line.split()
        if not parts:
            consumed += 1
            continue
        key = parts[0].lower()
        if key not in _HEADER_KEYS:
            break
        if len(parts) != 2:
            raise MalformedHeader(f"header line {line.strip()!r} must be '<key> <value>'")
        if key in header:
            raise MalformedHeader(f"duplicate header key {parts[0]!r}")
        try:
            header[key] = int(parts[1]) if key in _HEADER_INT + ("nodata_value",) else float(parts[1])
        except ValueError:
            raise MalformedHeader(f"bad value for {parts[0]}: {parts[1]!r}") from None
        consumed += 1
    missing = [k for k in _HEADER_INT + _HEADER_FLOAT if k not in header]
    if missing:
        raise MalformedHeader(f"missing header keys: {', '.join(missing)}")
    if header["ncols"] < 1 or header["nrows"] < 1:
        raise MalformedHeader("ncols and nrows must be positive")
    if not header["cellsize"] > 0:
        raise MalformedHeader("cellsize must be positive")
    return header, consumed


def read_header(text):
    """Parse only the header block of an ASCII grid; returns a dict of keys."""
    if not isinstance(text, str):
        text = text.read()
    header, _ = _read_header(text.splitlines())
    return header


def parse_ascii_grid(text, classes=None, strict=False):
    """Parse an ESRI ASCII grid of integer land-cover codes.

    ``text`` may be a string or a text stream. With ``strict`` every code
    must be present in ``classes`` or :class:`UnmappedCode` is raised.
    """
    if not isinstance(text, str):
        text = text.read()
    lines = text.splitlines()
    header, consumed = _read_header(lines)
    ncols, nrows = header["ncols"], header["nrows"]

    body = [ln for ln in lines[consumed:] if ln.strip()]
    if len(body) != nrows:
        raise DimensionMismatch(f"header says {nrows} rows, body has {len(body)}")
    codes = np.empty((nrows, ncols), dtype=np.int64)
    for r, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != ncols:
            raise DimensionMismatch(
                f"row {r} has {len(tokens)} values, header says ncols={ncols}")
        try:
            codes[r] = [int(t) for t in tokens]
        except ValueError:
            bad = next(t for t in tokens if not _is_int(t))
            raise NonIntegerCode(f"row {r}: {bad!r} is not an integer code") from None

    grid = LandCoverGrid(codes, GeoTransform.from_header(header),
                         classes or ClassMap(), header.get("nodata_value"))
    if strict:
        validate(grid, strict=True)
    return grid


def _is_int(token):
    try:
        int(token)
    except ValueError:
        return False
    return True


def write_ascii_grid(grid, sink=None):
    """Serialise ``grid`` in the same ASCII format; returns the text if no sink."""
    out = io.StringIO() if sink is None else sink
    yll = grid.geo.origin_lat - grid.n_rows * grid.geo.pixel_size
    out.write(f"ncols {grid.n_cols}\n")
    out.write(f"nrows {grid.n_rows}\n")
    out.write(f"xllcorner {grid.geo.origin_lon!r}\n")
    out.write(f"yllcorner {yll!r}\n")
    out.write(f"cellsize {grid.geo.pixel_size!r}\n")
    if grid.nodata is not None:
        out.write(f"NODATA_value {grid.nodata}\n")
    for row in grid.codes:
        out.write(" ".join(map(str, row.tolist())))
        out.write("\n")
    if sink is None:
        return out.getvalue()


def class_of(grid, row, col):
    if not (0 <= row < grid.n_rows and 0 <= col < grid.n_cols):
        raise OutOfBounds(f"pixel ({row}, {col}) outside {grid.n_rows}x{grid.n_cols} raster")
    return grid.classes.lookup(grid.codes[row, col], strict=False)


def validate(grid, strict=False):
    """Count pixels per semantic class and list codes missing from the class map.

    Unmapped codes are counted as OTHER unless ``strict``, in which case the
    first one raises :class:`UnmappedCode`.
    """
    uniq, counts = np.unique(grid.codes, return_counts=True)
    unmapped = [int(c) for c in uniq if int(c) not in grid.classes.code_table]
    if strict and unmapped:
        raise UnmappedCode(unmapped[0])
    tally = Counter()
    for code, n in zip(uniq.tolist(), counts.tolist()):
        tally[grid.classes.lookup(code, strict=False)] += n
    return ValidationReport(counts=dict(tally), unmapped=unmapped, valid=True)
