"""CART regression trees grown by variance reduction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyRows, InvalidParams, UnfittedModel

LEAF = -1


@dataclass(frozen=True)
class TreeParams:
    max_depth: int = 6
    min_samples_leaf: int = 1
    features_per_split: int = 5

    def __post_init__(self):
        if self.max_depth < 1:
            raise InvalidParams("max_depth must be >= 1")
        if self.min_samples_leaf < 1:
            raise InvalidParams("min_samples_leaf must be >= 1")
        if not 1 <= self.features_per_split <= 5:
            raise InvalidParams("features_per_split must be in [1, 5]")


class DecisionTree:
    """Binary regression tree stored as flat node arrays.

    Node ``k`` is a leaf when ``feature[k] == -1``; otherwise samples with
    ``x[feature[k]] <= threshold[k]`` go to ``left[k]`` and the rest to
    ``right[k]``. ``value[k]`` is the mean training label reaching the node.
    """

    family = "decision_tree"
    needs_scaling = False

    def __init__(self, feature, threshold, left, right, value, max_depth=None):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.max_depth = max_depth

    @property
    def n_nodes(self):
        return len(self.feature)

    def depth(self):
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        for k in range(self.n_nodes):
            if self.feature[k] != LEAF:
                depths[self.left[k]] = depths[self.right[k]] = depths[k] + 1
        return int(depths.max())

    def leaves(self):
        return np.nonzero(self.feature == LEAF)[0]

    def used_features(self):
        return sorted(set(self.feature[self.feature != LEAF].tolist()))

    def apply(self, X):
        """Index of the leaf each row lands in."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            feat = self.feature[node]
            inner = feat != LEAF
            if not inner.any():
                return node
            r, n, f = rows[inner], node[inner], feat[inner]
            go_left = X[r, f] <= self.threshold[n]
            node[r] = np.where(go_left, self.left[n], self.right[n])

    def predict(self, X):
        if self.n_nodes == 0:
            raise UnfittedModel("tree has no nodes")
        return self.value[self.apply(X)]

    def to_dict(self):
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "max_depth": self.max_depth,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["feature"], d["threshold"], d["left"], d["right"], d["value"],
                   d.get("max_depth"))


def _best_split(Xn, yn, features, min_leaf):
    """Best (feature, threshold) for one node, or None.

    Maximises S_L**2/n_L + S_R**2/n_R, which is the same as minimising the
    summed squared error of the two children. Candidates are midpoints
    between consecutive distinct sorted values. The first maximum wins, so
    ties go to the lower feature index and then the smaller threshold.
    """
    n = len(yn)
    if n < 2:
        return None
    features = np.asarray(features)
    xs = Xn[:, features]
    order = np.argsort(xs, axis=0, kind="stable")
    xs = np.take_along_axis(xs, order, axis=0)
    csum = np.cumsum(yn[order], axis=0)
    total = csum[-1]
    s_left = csum[:-1]
    n_left = np.arange(1, n, dtype=np.float64)[:, None]
    n_right = n - n_left
    valid = (xs[:-1] < xs[1:]) & (n_left >= min_leaf) & (n_right >= min_leaf)
    score = s_left * s_left / n_left + (total - s_left) ** 2 / n_right
    score[~valid] = -np.inf
    k = np.argmax(score, axis=0)
    col_best = score[k, np.arange(len(features))]
    if not np.isfinite(col_best).any():
        return None
    # first maximum over features in index order
    c = int(np.argmax(col_best))
    return int(features[c]), (xs[k[c], c] + xs[k[c] + 1, c]) / 2.0


def fit_tree(X, y, params=TreeParams(), rng=None):
    """Grow a regression tree greedily, depth first, left child first.

    ``rng`` is only consulted when ``params.features_per_split`` is below
    the number of features.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or len(y) == 0:
        raise EmptyRows("cannot fit a tree on zero rows")
    n_features = X.shape[1]
    m = min(params.features_per_split, n_features)
    if m < n_features and rng is None:
        raise InvalidParams("feature subsampling needs an rng")

    feature, threshold, left, right, value = [], [], [], [], []

    def grow(idx, depth):
        k = len(feature)
        yn = y[idx]
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        constant = bool(np.all(yn == yn[0]))
        # a constant node keeps its label exactly; the mean can drift by an ulp
        value.append(float(yn[0]) if constant else float(yn.mean()))
        if depth >= params.max_depth or len(idx) < 2 * params.min_samples_leaf:
            return k
        if constant:
            return k
        if m < n_features:
            feats = np.sort(rng.choice(n_features, size=m, replace=False))
        else:
            feats = range(n_features)
        split = _best_split(X[idx], yn, feats, params.min_samples_leaf)
        if split is None:
            return k
        f, thr = split
        go_left = X[idx, f] <= thr
        feature[k] = int(f)
        threshold[k] = float(thr)
        left[k] = grow(idx[go_left], depth + 1)
        right[k] = grow(idx[~go_left], depth + 1)
        return k

    grow(np.arange(len(y)), 0)
    return DecisionTree(feature, threshold, left, right, value, params.max_depth)
