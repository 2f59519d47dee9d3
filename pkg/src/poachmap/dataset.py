"""Seeded 60/20/20 splitting and feature standardisation."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .errors import EmptySet, InvalidParams, TooFewRows


@dataclass(frozen=True)
class SplitSpec:
    train_frac: float = 0.6
    val_frac: float = 0.2
    test_frac: float = 0.2
    seed: int = 0

    def __post_init__(self):
        fracs = (self.train_frac, self.val_frac, self.test_frac)
        if min(fracs) <= 0 or abs(sum(fracs) - 1.0) > 1e-9:
            raise InvalidParams(f"split fractions must be positive and sum to 1, got {fracs}")

    def sizes(self, n):
        n_train = int(np.floor(self.train_frac * n))
        n_val = int(np.floor(self.val_frac * n))
        return n_train, n_val, n - n_train - n_val


def split_indices(n, spec=SplitSpec()):
    """Shuffled index arrays (train, val, test) for ``n`` rows.

    The permutation is ``Generator(Philox(SeedSequence([seed, crc32("split")])))
    .permutation(n)``, sliced contiguously by :meth:`SplitSpec.sizes`.
    """
    if n < 5:
        raise TooFewRows(f"need at least 5 rows to split, got {n}")
    perm = rngmod.stream(spec.seed, "split").permutation(n)
    a, b, _ = spec.sizes(n)
    return perm[:a], perm[a:a + b], perm[a + b:]


def split(labeled, spec=SplitSpec()):
    tr, va, te = split_indices(len(labeled), spec)
    return labeled.take(tr), labeled.take(va), labeled.take(te)


def export_split(indices, sink=None):
    """Audit CSV ``row,split`` listing which partition each row landed in."""
    out = io.StringIO() if sink is None else sink
    out.write("row,split\n")
    names = ("train", "val", "test")
    assigned = sorted((int(r), names[k]) for k, idx in enumerate(indices) for r in idx)
    for r, name in assigned:
        out.write(f"{r},{name}\n")
    if sink is None:
        return out.getvalue()


@dataclass(frozen=True, eq=False)
class Scaler:
    mean: np.ndarray
    std: np.ndarray
    fitted_on: str = "train"
    degenerate: tuple = ()

    def transform(self, X):
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.std

    def inverse(self, X):
        return np.asarray(X, dtype=np.float64) * self.std + self.mean

    def to_dict(self):
        return {"mean": self.mean.tolist(), "std": self.std.tolist(),
                "fitted_on": self.fitted_on, "degenerate": list(self.degenerate)}

    @classmethod
    def from_dict(cls, d):
        return cls(np.array(d["mean"], dtype=np.float64), np.array(d["std"], dtype=np.float64),
                   d.get("fitted_on", "train"), tuple(d.get("degenerate", ())))

    def __eq__(self, other):
        return (isinstance(other, Scaler) and np.array_equal(self.mean, other.mean)
                and np.array_equal(self.std, other.std))


def fit_scaler(X, fitted_on="train"):
    """Per-feature mean and population standard deviation.

    Constant features get std 1 and are listed in ``degenerate``.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptySet("cannot fit a scaler on zero rows")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    flat = tuple(int(k) for k in np.nonzero(std == 0)[0])
    std = np.where(std == 0, 1.0, std)
    return Scaler(mean, std, fitted_on, flat)


def apply_scaler(scaler, X):
    return scaler.transform(X)


def identity_scaler(d=5):
    return Scaler(np.zeros(d), np.ones(d), "identity")
