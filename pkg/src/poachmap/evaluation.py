"""Scoring, validation grid search and permutation feature importance."""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import rng as rngmod
from .errors import LengthMismatch, PoachmapError, TooFewRows, ZeroVarianceTargets
from .features import FEATURE_NAMES
from .models import (
    ForestParams,
    KernelRidgeParams,
    MlpParams,
    TreeParams,
    fit_forest,
    fit_kernel_ridge,
    fit_mlp,
)


def r2(predictions, targets):
    """Coefficient of determination 1 - SS_res / SS_tot."""
    p = np.asarray(predictions, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if p.shape != t.shape:
        raise LengthMismatch(f"{p.shape} predictions vs {t.shape} targets")
    if t.size < 2:
        raise LengthMismatch("need at least two targets")
    ss_tot = np.sum((t - t.mean()) ** 2)
    if ss_tot == 0:
        raise ZeroVarianceTargets("targets are all identical")
    return float(1.0 - np.sum((t - p) ** 2) / ss_tot)


@dataclass
class ScoreReport:
    family: str
    params: dict
    train_r2: float | None = None
    val_r2: float | None = None
    test_r2: float | None = None
    lattice: list = field(default_factory=list)   # (params, val_r2) per grid point

    def to_csv(self):
        out = io.StringIO()
        out.write("family,params,train_r2,val_r2,test_r2\n")
        out.write(f"{self.family},{_params_str(self.params)},{_num(self.train_r2)},"
                  f"{_num(self.val_r2)},{_num(self.test_r2)}\n")
        if self.lattice:
            out.write("\nlattice_params,lattice_val_r2\n")
            for p, score in self.lattice:
                out.write(f"{_params_str(p)},{_num(score)}\n")
        return out.getvalue()

    def to_text(self):
        lines = [f"model: {self.family} ({_params_str(self.params)})"]
        for name in ("train_r2", "val_r2", "test_r2"):
            val = getattr(self, name)
            if val is not None:
                lines.append(f"  {name:9s} {val: .4f}")
        return "\n".join(lines) + "\n"


def _num(x):
    return "" if x is None else repr(float(x))


def _params_str(p):
    return ";".join(f"{k}={v}" for k, v in sorted(p.items()))


# Model families ------------------------------------------------------------

def make_forest(p, seed):
    return ForestParams(
        n_trees=int(p.get("n_trees", 500)), seed=seed,
        tree=TreeParams(int(p.get("max_depth", 6)), int(p.get("min_samples_leaf", 1)),
                        int(p.get("features_per_split", 5))))


def make_kernel(p, seed):
    gamma = p.get("gamma")
    return KernelRidgeParams(gamma=None if gamma is None else float(gamma),
                             lam=float(p.get("lam", 0.5)),
                             max_rows=int(p.get("max_rows", 4000)), seed=seed)


def make_mlp(p, seed):
    return MlpParams(hidden=tuple(p.get("hidden", (5, 5, 10, 3))),
                     learning_rate=float(p.get("learning_rate", 0.01)),
                     max_iter=int(p.get("max_iter", 5000)),
                     patience=int(p.get("patience", 200)), seed=seed)


def fit_family(family, p, train, val=None, seed=0):
    """Fit one model of ``family`` with parameter dict ``p``.

    ``train`` and ``val`` are (X, y) pairs, already standardised when the
    family needs it.
    """
    X, y = train
    if family == "random_forest":
        return fit_forest(X, y, make_forest(p, seed))
    if family == "kernel_ridge":
        return fit_kernel_ridge(X, y, make_kernel(p, seed))
    if family == "mlp":
        Xv, yv = val if val is not None else (None, None)
        return fit_mlp(X, y, Xv, yv, make_mlp(p, seed))
    raise ValueError(f"unknown model family {family!r}")


FAMILY_NEEDS_SCALING = {"random_forest": False, "kernel_ridge": True, "mlp": True}

DEFAULT_GRIDS = {
    "random_forest": {"max_depth": [2, 4, 6, 8, 10], "n_trees": [100, 300, 500]},
    "kernel_ridge": {"lam": [2.0, 1.0, 0.5, 0.1, 0.01]},   # lam = 1/C, C in {0.5, 1, 2, 10, 100}
    "mlp": {"max_iter": [1000, 3000, 5000], "learning_rate": [0.01, 0.03]},
}


def _size_key(family, p):
    """Tie-break key: smaller is preferred."""
    if family == "random_forest":
        return (p.get("n_trees", 500), p.get("max_depth", 6))
    if family == "kernel_ridge":
        return (abs(np.log(p.get("lam", 0.5) / 0.5)), p.get("lam", 0.5))
    if family == "mlp":
        return (p.get("max_iter", 5000),)
    return ()


def lattice(grid):
    keys = sorted(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def grid_search(family, grid, train, val, seed=0, base=None):
    """Fit every lattice point on ``train`` and keep the best validation R^2.

    Ties go to the smaller model. Returns ``(best_params, report, model)``.
    """
    points = lattice(grid)
    if not points:
        raise ValueError("empty parameter grid")
    scored = []
    for point in points:
        p = {**(base or {}), **point}
        try:
            model = fit_family(family, p, train, val, seed)
        except PoachmapError as exc:
            raise type(exc)(f"at grid point {point}: {exc}") from exc
        scored.append((p, r2(model.predict(val[0]), val[1]), model))
    best_score = max(s for _, s, _ in scored)
    winners = [item for item in scored if item[1] == best_score]
    best_p, best_s, best_model = min(winners, key=lambda item: _size_key(family, item[0]))
    report = ScoreReport(family, best_p, val_r2=best_s,
                         lattice=[(p, s) for p, s, _ in scored])
    return best_p, report, best_model


# Permutation importance ----------------------------------------------------

@dataclass
class ImportanceReport:
    mean: np.ndarray
    std: np.ndarray
    n_repeats: int
    seed: int
    baseline: float
    scores: np.ndarray     # (5, n_repeats) permuted R^2

    def as_dict(self):
        return {name: float(m) for name, m in zip(FEATURE_NAMES, self.mean)}

    def argmax(self):
        return FEATURE_NAMES[int(np.argmax(self.mean))]

    def to_csv(self):
        out = io.StringIO()
        out.write("feature,importance_mean,importance_std\n")
        for name, m, s in zip(FEATURE_NAMES, self.mean, self.std):
            out.write(f"{name},{float(m)!r},{float(s)!r}\n")
        return out.getvalue()

    def to_text(self):
        lines = [f"baseline R^2 {self.baseline:.4f}; {self.n_repeats} repeats, seed {self.seed}"]
        width = 40
        top = max(float(np.max(self.mean)), 1e-12)
        for name, m, s in zip(FEATURE_NAMES, self.mean, self.std):
            bar = "#" * max(0, int(round(width * m / top)))
            lines.append(f"  {name:4s} {m: .4f} +/- {s:.4f} {bar}")
        return "\n".join(lines) + "\n"


def _score(pred, y):
    # Constant predictions still give a well-defined R^2; only the targets must vary.
    return r2(pred, y)


def permutation_importance(model, X, y, n_repeats=10, seed=0, predict=None):
    """Drop in validation R^2 after shuffling each feature column.

    Column ``k`` in repeat ``r`` is permuted with the ``("importance", k, r)``
    stream of ``seed``. ``predict`` defaults to ``model.predict`` and lets
    callers insert a scaler.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(y) < 10:
        raise TooFewRows(f"permutation importance needs >= 10 rows, got {len(y)}")
    predict = predict or model.predict
    baseline = _score(predict(X), y)
    n_feat = X.shape[1]
    scores = np.empty((n_feat, n_repeats))
    for k in range(n_feat):
        for r in range(n_repeats):
            perm = rngmod.stream(seed, "importance", k, r).permutation(len(y))
            Xp = X.copy()
            Xp[:, k] = X[perm, k]
            scores[k, r] = _score(predict(Xp), y)
    drops = baseline - scores
    return ImportanceReport(drops.mean(axis=1), drops.std(axis=1), n_repeats, seed,
                            baseline, scores)
