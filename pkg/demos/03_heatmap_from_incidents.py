# coding: utf-8

# # From incident points to a heatmap
#
# In the field we never see f*. We only have a handful of incident cells. Cells
# within Chebyshev ring 9 of an incident get labels 1.0, 0.9, ... 0.1; cells far
# from every incident get 0; the band in between is left out of training.

import warnings
from pathlib import Path

import numpy as np

from poachmap import features, heatmap, labeling, synth
from poachmap.models import ForestParams, fit_forest

params = synth.ScenarioParams()
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    V = features.build_feature_grid(synth.generate_landcover(params), params.g)
truth = synth.default_true_function().over(V)
incidents = synth.plant_incidents(V, truth, params.n_incidents, params.seed)

# The default zero radius of 400 cells is larger than this 100x100 grid, so
# scale it down to keep some negative rows.

policy = labeling.LabelPolicy(zero_radius=20)
data = labeling.synthesize_labels(V, incidents, policy)
print(labeling.label_stats(data))

model = fit_forest(data.X, data.y, ForestParams(n_trees=200))
P = heatmap.generate_heatmap(model, V)

# Dark pixels are likely poaching spots.

out = Path("build")
out.mkdir(exist_ok=True)
(out / "demo_heatmap.pgm").write_bytes(heatmap.write_pgm(P))
print("wrote", out / "demo_heatmap.pgm")

corr = np.corrcoef(P.values.ravel(), truth.values.ravel())[0, 1]
print(f"correlation with the hidden f*: {corr:.3f}")
