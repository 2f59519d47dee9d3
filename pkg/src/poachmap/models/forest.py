"""Bagged ensemble of regression trees."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import rng as rngmod
from ..errors import EmptyRows, InvalidParams, UnfittedModel
from .tree import DecisionTree, TreeParams, fit_tree


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 500
    tree: TreeParams = field(default_factory=TreeParams)
    seed: int = 0
    bootstrap: bool = True

    def __post_init__(self):
        if self.n_trees < 1:
            raise InvalidParams("n_trees must be >= 1")


def pairwise_sum(arrays):
    """Sum a list of equal-shape arrays by fixed recursive halving."""
    n = len(arrays)
    if n == 1:
        return arrays[0].copy()
    mid = n // 2
    return pairwise_sum(arrays[:mid]) + pairwise_sum(arrays[mid:])


class RandomForest:
    family = "random_forest"
    needs_scaling = False

    def __init__(self, trees, params=None):
        self.trees = list(trees)
        self.params = params

    def predict(self, X):
        if not self.trees:
            raise UnfittedModel("forest has no trees")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return pairwise_sum([t.predict(X) for t in self.trees]) / len(self.trees)

    def used_features(self):
        return sorted(set().union(*(t.used_features() for t in self.trees)))

    def to_dict(self):
        p = self.params or ForestParams(n_trees=len(self.trees))
        return {
            "params": {"n_trees": p.n_trees, "seed": p.seed, "bootstrap": p.bootstrap,
                       "max_depth": p.tree.max_depth,
                       "min_samples_leaf": p.tree.min_samples_leaf,
                       "features_per_split": p.tree.features_per_split},
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, d):
        p = d["params"]
        params = ForestParams(
            n_trees=p["n_trees"], seed=p["seed"], bootstrap=p["bootstrap"],
            tree=TreeParams(p["max_depth"], p["min_samples_leaf"], p["features_per_split"]))
        return cls([DecisionTree.from_dict(t) for t in d["trees"]], params)


def fit_forest(X, y, params=ForestParams()):
    """Fit ``n_trees`` trees, tree ``t`` on a bootstrap resample drawn from
    the ``("forest", t)`` stream of ``params.seed``."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(y) == 0:
        raise EmptyRows("cannot fit a forest on zero rows")
    n = len(y)
    trees = []
    for t in range(params.n_trees):
        g = rngmod.stream(params.seed, "forest", t)
        if params.bootstrap:
            idx = g.integers(0, n, size=n)
            trees.append(fit_tree(X[idx], y[idx], params.tree, g))
        else:
            trees.append(fit_tree(X, y, params.tree, g))
    return RandomForest(trees, params)
