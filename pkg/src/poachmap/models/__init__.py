"""Regressors mapping a feature vector to a poaching score.

All models expose ``predict(X)`` on an (n, 5) array and return raw,
unclamped outputs; clamping to [0, 1] happens when a heatmap is emitted.
"""

import numpy as np

from ..errors import UnfittedModel
from .forest import ForestParams, RandomForest, fit_forest, pairwise_sum
from .kernel_ridge import KernelRidge, KernelRidgeParams, fit_kernel_ridge, rbf_kernel
from .mlp import Mlp, MlpParams, fit_mlp
from .serialize import deserialize, load_bundle, serialize
from .tree import DecisionTree, TreeParams, fit_tree


def predict(model, x):
    """Raw prediction for one feature vector (length 5) or a batch (n, 5)."""
    if model is None or not hasattr(model, "predict"):
        raise UnfittedModel("no fitted model")
    arr = np.asarray(x.as_array() if hasattr(x, "as_array") else x, dtype=np.float64)
    out = model.predict(np.atleast_2d(arr))
    return float(out[0]) if arr.ndim == 1 else out


__all__ = [
    "DecisionTree", "TreeParams", "fit_tree",
    "RandomForest", "ForestParams", "fit_forest", "pairwise_sum",
    "KernelRidge", "KernelRidgeParams", "fit_kernel_ridge", "rbf_kernel",
    "Mlp", "MlpParams", "fit_mlp",
    "serialize", "deserialize", "load_bundle", "predict",
]
