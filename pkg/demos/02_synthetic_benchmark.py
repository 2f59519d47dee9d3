# coding: utf-8

# # Recovering a known hotspot surface
#
# The synthetic scenario paints blobs of built-up land, trees, grass and wetland
# on a 2000x2000 raster. The ground truth is
#
#     f*(v) = 0.8 exp(-3 a_h) exp(-d_w / 50) + 0.1
#
# so only built-up density and wetland distance matter. We observe f* with
# N(0, 0.05^2) noise on every feature cell, fit three regressors and ask
# which features they lean on.

import warnings

import numpy as np

from poachmap import dataset, evaluation, features, synth

params = synth.ScenarioParams()
grid = synth.generate_landcover(params)
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    V = features.build_feature_grid(grid, params.g)
print("feature grid", V.shape)

truth = synth.default_true_function().over(V)
data = synth.observed_set(V, truth, params.noise, params.seed)
train, val, test = dataset.split(data)
print("rows", len(train), len(val), len(test))

# Forests work on raw features. Kernel ridge and the MLP want standardised
# inputs, with the scaler fitted on the training rows only.

scaler = dataset.fit_scaler(train.X)
tr = scaler.transform(train.X), train.y
va = scaler.transform(val.X), val.y

rf = evaluation.fit_family("random_forest", {"n_trees": 500, "max_depth": 6}, (train.X, train.y))
best, report, krr = evaluation.grid_search("kernel_ridge", evaluation.DEFAULT_GRIDS["kernel_ridge"], tr, va)
mlp = evaluation.fit_family("mlp", {}, tr, va)

for name, model, X in [("forest", rf, test.X), ("kernel ridge", krr, scaler.transform(test.X)),
                       ("mlp", mlp, scaler.transform(test.X))]:
    print(f"{name:13s} test R^2 {evaluation.r2(model.predict(X), test.y):.3f}")
print("kernel ridge lambda picked on validation:", best["lam"])

# Permutation importance on the validation rows. a_t, a_g and d_f never enter
# f*, so shuffling them should cost nothing.

imp = evaluation.permutation_importance(rf, val.X, val.y, n_repeats=10, seed=0)
print(imp.to_text())
