"""Fully connected tanh network trained by full-batch gradient descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import rng as rngmod
from ..errors import EmptyRows, InvalidParams, NonFiniteLoss, UnfittedModel


@dataclass(frozen=True)
class MlpParams:
    hidden: tuple = (5, 5, 10, 3)
    learning_rate: float = 0.01
    max_iter: int = 5000
    patience: int = 200
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        if not self.hidden or min(self.hidden) < 1:
            raise InvalidParams("hidden layer widths must be positive")
        if not self.learning_rate > 0:
            raise InvalidParams("learning_rate must be positive")


def init_params(sizes, rng):
    """Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)); biases zero."""
    params = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = 1.0 / np.sqrt(fan_in)
        params.append((rng.uniform(-limit, limit, size=(fan_in, fan_out)), np.zeros(fan_out)))
    return params


def forward(params, X):
    """Return the output vector and the list of layer activations."""
    acts = [X]
    h = X
    last = len(params) - 1
    for k, (W, b) in enumerate(params):
        z = h @ W + b
        h = z if k == last else np.tanh(z)
        acts.append(h)
    return h[:, 0], acts


def loss_and_grad(params, X, y):
    """Mean squared error and its gradient with respect to every (W, b)."""
    out, acts = forward(params, X)
    n = len(y)
    resid = out - y
    loss = float(np.mean(resid * resid))
    delta = (2.0 / n) * resid[:, None]
    grads = [None] * len(params)
    for k in range(len(params) - 1, -1, -1):
        W, _ = params[k]
        grads[k] = (acts[k].T @ delta, delta.sum(axis=0))
        if k:
            delta = (delta @ W.T) * (1.0 - acts[k] ** 2)
    return loss, grads


def flatten(params):
    return np.concatenate([np.concatenate([W.ravel(), b]) for W, b in params])


def unflatten(vec, sizes):
    params, pos = [], 0
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        W = vec[pos:pos + fan_in * fan_out].reshape(fan_in, fan_out)
        pos += fan_in * fan_out
        b = vec[pos:pos + fan_out]
        pos += fan_out
        params.append((W.copy(), b.copy()))
    return params


class Mlp:
    family = "mlp"
    needs_scaling = True

    def __init__(self, params, sizes, history=None, best_iter=None):
        self.params = [(np.asarray(W, dtype=np.float64), np.asarray(b, dtype=np.float64))
                       for W, b in params]
        self.sizes = tuple(sizes)
        self.history = history or []
        self.best_iter = best_iter

    def predict(self, X):
        if not self.params:
            raise UnfittedModel("mlp has no weights")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return forward(self.params, X)[0]

    def to_dict(self):
        return {"sizes": list(self.sizes), "best_iter": self.best_iter,
                "weights": [W.ravel().tolist() for W, _ in self.params],
                "biases": [b.tolist() for _, b in self.params]}

    @classmethod
    def from_dict(cls, d):
        sizes = d["sizes"]
        params = [(np.array(W, dtype=np.float64).reshape(a, b), np.array(bias, dtype=np.float64))
                  for W, bias, a, b in zip(d["weights"], d["biases"], sizes[:-1], sizes[1:])]
        return cls(params, sizes, best_iter=d.get("best_iter"))


def fit_mlp(X, y, X_val=None, y_val=None, params=MlpParams()):
    """Train on standardised rows; keep the snapshot with the best validation loss.

    Without a validation set the training loss drives early stopping.
    ``history`` on the returned model holds (train_loss, val_loss) per step.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(y) == 0:
        raise EmptyRows("cannot fit an mlp on zero rows")
    if X_val is None or len(X_val) == 0:
        X_val, y_val = X, y
    X_val = np.asarray(X_val, dtype=np.float64)
    y_val = np.asarray(y_val, dtype=np.float64)

    sizes = (X.shape[1], *params.hidden, 1)
    weights = init_params(sizes, rngmod.stream(params.seed, "mlp"))
    lr = params.learning_rate
    best = ([(W.copy(), b.copy()) for W, b in weights], np.inf, 0)
    history = []
    since_best = 0
    for it in range(params.max_iter):
        # overflow shows up as inf/nan and is reported below
        with np.errstate(over="ignore", invalid="ignore"):
            loss, grads = loss_and_grad(weights, X, y)
            val_out = forward(weights, X_val)[0]
            val_loss = float(np.mean((val_out - y_val) ** 2))
        if not (np.isfinite(loss) and np.isfinite(val_loss)):
            raise NonFiniteLoss(f"loss diverged at iteration {it}; lower the learning rate")
        history.append((loss, val_loss))
        if val_loss < best[1]:
            best = ([(W.copy(), b.copy()) for W, b in weights], val_loss, it)
            since_best = 0
        else:
            since_best += 1
            if since_best >= params.patience:
                break
        weights = [(W - lr * gW, b - lr * gb) for (W, b), (gW, gb) in zip(weights, grads)]
    return Mlp(best[0], sizes, history, best[2])
