"""Synthetic land-cover scenarios with a known poaching-probability surface.

The default surface is

    f*(v) = clip(0.8 * exp(-3 * a_h) * exp(-d_w / 50) + 0.1, 0, 1)

which falls with built-up density and with distance to wetland and ignores
a_t, a_g and d_f entirely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng as rngmod
from .errors import InvalidCount, InvalidParams
from .features import FEATURE_NAMES
from .labeling import LabeledSet, make_incidents
from .landcover import ClassMap, GeoTransform, LandCoverGrid, SemanticClass

# representative WorldCover code written for each semantic class
CLASS_CODES = {
    SemanticClass.BUILT_UP: 50,
    SemanticClass.TREES: 10,
    SemanticClass.GRASS: 30,
    SemanticClass.WETLAND: 90,
    SemanticClass.OTHER: 20,
}

# painting order: later classes overwrite earlier ones
PAINT_ORDER = (SemanticClass.GRASS, SemanticClass.TREES, SemanticClass.WETLAND,
               SemanticClass.BUILT_UP)


@dataclass(frozen=True)
class Blob:
    cls: SemanticClass
    row: int                 # top-left pixel
    col: int
    height: int
    width: int
    ellipse: bool = False


@dataclass(frozen=True)
class ScenarioParams:
    n_rows: int = 2000
    n_cols: int = 2000
    g: int = 20
    seed: int = 0
    # per class: (blob count, min side, max side) in pixels
    blobs: dict = field(default_factory=lambda: {
        SemanticClass.GRASS: (60, 80, 400),
        SemanticClass.TREES: (60, 60, 300),
        SemanticClass.WETLAND: (6, 40, 160),
        SemanticClass.BUILT_UP: (40, 40, 300),
    })
    explicit_blobs: tuple = ()
    n_incidents: int = 25
    truth: str = "default"
    noise: float = 0.05
    origin_lat: float = -18.0
    origin_lon: float = 23.0
    pixel_size: float = 1.0 / 12000

    def __post_init__(self):
        if self.g < 1 or self.n_rows % self.g or self.n_cols % self.g:
            raise InvalidParams(f"raster {self.n_rows}x{self.n_cols} not divisible by g={self.g}")
        if self.n_incidents < 1:
            raise InvalidParams("n_incidents must be >= 1")
        if self.noise < 0:
            raise InvalidParams("noise must be non-negative")
        if self.truth not in TRUE_FUNCTIONS:
            raise InvalidParams(f"unknown true function {self.truth!r}")
        for cls, spec in self.blobs.items():
            count, lo, hi = spec
            if count < 0 or lo < 1 or hi < lo:
                raise InvalidParams(f"bad blob spec for {SemanticClass(cls).name}: {spec}")

    @property
    def feature_shape(self):
        return self.n_rows // self.g, self.n_cols // self.g


def _paint(sem, blob):
    r0, c0 = max(blob.row, 0), max(blob.col, 0)
    r1 = min(blob.row + blob.height, sem.shape[0])
    c1 = min(blob.col + blob.width, sem.shape[1])
    if r0 >= r1 or c0 >= c1:
        return
    if not blob.ellipse:
        sem[r0:r1, c0:c1] = blob.cls
        return
    rr = (np.arange(r0, r1) + 0.5 - blob.row - blob.height / 2) / (blob.height / 2)
    cc = (np.arange(c0, c1) + 0.5 - blob.col - blob.width / 2) / (blob.width / 2)
    inside = rr[:, None] ** 2 + cc[None, :] ** 2 <= 1.0
    sem[r0:r1, c0:c1][inside] = blob.cls


def random_blobs(params):
    g = rngmod.stream(params.seed, "synth", 0)
    out = []
    for cls in PAINT_ORDER:
        count, lo, hi = params.blobs.get(cls, (0, 1, 1))
        for _ in range(count):
            h, w = g.integers(lo, hi + 1, size=2)
            row = int(g.integers(-h // 2, params.n_rows - h // 2))
            col = int(g.integers(-w // 2, params.n_cols - w // 2))
            out.append(Blob(cls, row, col, int(h), int(w), bool(g.random() < 0.5)))
    return out


def generate_landcover(params):
    """Seeded rectangles and ellipses of each class over an OTHER background."""
    sem = np.full((params.n_rows, params.n_cols), int(SemanticClass.OTHER), dtype=np.int8)
    blobs = random_blobs(params) + list(params.explicit_blobs)
    for blob in sorted(blobs, key=lambda b: PAINT_ORDER.index(b.cls)
                       if b.cls in PAINT_ORDER else -1):
        _paint(sem, blob)
    codes = np.zeros(sem.shape, dtype=np.int64)
    for cls, code in CLASS_CODES.items():
        codes[sem == cls] = code
    geo = GeoTransform(params.origin_lat, params.origin_lon, params.pixel_size)
    return LandCoverGrid(codes, geo, ClassMap())


def default_truth(X):
    X = np.asarray(X, dtype=np.float64)
    a_h = X[..., FEATURE_NAMES.index("a_h")]
    d_w = X[..., FEATURE_NAMES.index("d_w")]
    return np.clip(0.8 * np.exp(-3.0 * a_h) * np.exp(-d_w / 50.0) + 0.1, 0.0, 1.0)


def uniform_truth(X):
    return np.full(np.asarray(X).shape[:-1], 0.5)


TRUE_FUNCTIONS = {"default": default_truth, "uniform": uniform_truth}


@dataclass(frozen=True, eq=False)
class GroundTruth:
    function: object
    name: str = "default"
    values: np.ndarray | None = None

    def __call__(self, X):
        return self.function(X)

    def over(self, V):
        return GroundTruth(self.function, self.name, self.function(V.values))


def default_true_function():
    return GroundTruth(default_truth, "default")


def true_function(name):
    return GroundTruth(TRUE_FUNCTIONS[name], name)


def plant_incidents(V, truth, n, seed):
    """Sample ``n`` distinct cells with probability proportional to f*(V)."""
    total = V.n_rows * V.n_cols
    if not 1 <= n <= total:
        raise InvalidCount(f"cannot plant {n} incidents on {total} cells")
    weights = np.asarray(truth(V.values), dtype=np.float64).ravel()
    if np.any(weights < 0) or weights.sum() <= 0:
        raise InvalidParams("true function must be non-negative and not identically zero")
    picks = rngmod.stream(seed, "synth", 1).choice(total, size=n, replace=False,
                                                   p=weights / weights.sum())
    return make_incidents([(int(k // V.n_cols), int(k % V.n_cols)) for k in picks])


def noisy_observations(truth_values, sigma, seed):
    """Ground truth plus N(0, sigma^2) noise, clipped to [0, 1]."""
    noise = rngmod.stream(seed, "synth", 2).normal(0.0, sigma, size=np.shape(truth_values))
    return np.clip(truth_values + noise, 0.0, 1.0)


def observed_set(V, truth, sigma, seed):
    """Every cell of ``V`` with a noisy observation of the ground truth as label.

    This is the regression benchmark target: rows in row-major order, labels
    clip(f*(v) + N(0, sigma^2), 0, 1).
    """
    values = truth.values if truth.values is not None else truth(V.values)
    y = noisy_observations(np.asarray(values, dtype=np.float64), sigma, seed).ravel()
    ii, jj = np.indices(V.shape)
    return LabeledSet(V.rows().copy(), y,
                      np.stack([ii.ravel(), jj.ravel()], axis=1).astype(np.int64))
