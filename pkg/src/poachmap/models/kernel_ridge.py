"""RBF kernel ridge regression solved through a Cholesky factorisation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .. import rng as rngmod
from ..errors import EmptyRows, InvalidParams, SingularSystem, TooManyRows, UnfittedModel


@dataclass(frozen=True)
class KernelRidgeParams:
    gamma: float | None = None     # None: 1 / (5 * mean feature variance)
    lam: float = 0.5
    max_rows: int = 4000
    subsample: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.gamma is not None and not self.gamma > 0:
            raise InvalidParams("gamma must be positive")
        if not self.lam > 0:
            raise InvalidParams("lam must be positive")


def rbf_kernel(A, B, gamma):
    """exp(-gamma * ||a - b||^2) for every pair of rows."""
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    sq = (np.sum(A * A, axis=1)[:, None] + np.sum(B * B, axis=1)[None, :] - 2.0 * A @ B.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def default_gamma(X):
    var = float(np.mean(np.var(X, axis=0)))
    return 1.0 / (5.0 * var) if var > 0 else 0.2


class KernelRidge:
    family = "kernel_ridge"
    needs_scaling = True

    def __init__(self, X_train, alpha, gamma, lam):
        self.X_train = np.asarray(X_train, dtype=np.float64)
        self.alpha = np.asarray(alpha, dtype=np.float64)
        self.gamma = float(gamma)
        self.lam = float(lam)

    def predict(self, X):
        if self.alpha.size == 0:
            raise UnfittedModel("kernel ridge model has no coefficients")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        out = np.empty(X.shape[0])
        for start in range(0, X.shape[0], 2048):
            block = X[start:start + 2048]
            out[start:start + 2048] = rbf_kernel(block, self.X_train, self.gamma) @ self.alpha
        return out

    def to_dict(self):
        return {"gamma": self.gamma, "lam": self.lam,
                "X_train": self.X_train.tolist(), "alpha": self.alpha.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(np.array(d["X_train"], dtype=np.float64).reshape(-1, 5),
                   d["alpha"], d["gamma"], d["lam"])


def fit_kernel_ridge(X, y, params=KernelRidgeParams()):
    """Solve (K + lam * n * I) alpha = y for standardised rows ``X``.

    Above ``params.max_rows`` a seeded uniform subsample of that size is
    used (with a warning) unless subsampling is disabled.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(y) == 0:
        raise EmptyRows("cannot fit kernel ridge on zero rows")
    if len(y) > params.max_rows:
        if not params.subsample:
            raise TooManyRows(f"{len(y)} rows exceeds cap of {params.max_rows}")
        warnings.warn(f"kernel ridge: subsampling {len(y)} rows to {params.max_rows}",
                      RuntimeWarning, stacklevel=2)
        keep = np.sort(rngmod.stream(params.seed, "kernel").choice(
            len(y), size=params.max_rows, replace=False))
        X, y = X[keep], y[keep]
    n = len(y)
    gamma = params.gamma if params.gamma is not None else default_gamma(X)
    K = rbf_kernel(X, X, gamma)
    K[np.diag_indices(n)] += params.lam * n
    try:
        factor = linalg.cho_factor(K, lower=True, check_finite=True)
        alpha = linalg.cho_solve(factor, y)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SingularSystem(f"kernel system could not be factorised: {exc}") from exc
    if not np.all(np.isfinite(alpha)):
        raise SingularSystem("non-finite dual coefficients")
    return KernelRidge(X, alpha, gamma, params.lam)
