import warnings

import numpy as np
import pytest
from scipy.stats import chisquare

from poachmap import features, synth
from poachmap.errors import InvalidCount, InvalidParams
from poachmap.features import FeatureGrid
from poachmap.landcover import SemanticClass

NO_BLOBS = {c: (0, 1, 1) for c in synth.PAINT_ORDER}


def test_zero_blobs_give_uniform_other():
    p = synth.ScenarioParams(n_rows=40, n_cols=60, g=10, blobs=NO_BLOBS)
    grid = synth.generate_landcover(p)
    assert np.all(grid.semantic() == SemanticClass.OTHER)


def test_same_seed_same_raster():
    small = {c: (5, 10, 40) for c in synth.PAINT_ORDER}
    p = synth.ScenarioParams(n_rows=200, n_cols=200, g=10, seed=3, blobs=small)
    a, b = synth.generate_landcover(p), synth.generate_landcover(p)
    assert np.array_equal(a.codes, b.codes)
    c = synth.generate_landcover(synth.ScenarioParams(n_rows=200, n_cols=200, g=10, seed=4,
                                                      blobs=small))
    assert not np.array_equal(a.codes, c.codes)


def test_every_class_present_by_default():
    grid = synth.generate_landcover(synth.ScenarioParams(n_rows=1000, n_cols=1000, g=20))
    present = set(np.unique(grid.semantic()).tolist())
    assert present == {int(c) for c in SemanticClass}


def test_trees_block_gives_known_distance_pattern():
    # 20x20 Trees blob covering V-cell (2, 3) on a 10x10 raster of g=20 windows
    p = synth.ScenarioParams(n_rows=200, n_cols=200, g=20, blobs=NO_BLOBS,
                             explicit_blobs=(synth.Blob(SemanticClass.TREES, 40, 60, 20, 20),))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        V = features.build_feature_grid(synth.generate_landcover(p), p.g)
    ii, jj = np.indices((10, 10))
    assert np.array_equal(V.feature("d_f"), np.hypot(ii - 2, jj - 3))
    expected_at = np.zeros((10, 10))
    expected_at[2, 3] = 1.0
    assert np.array_equal(V.feature("a_t"), expected_at)


def test_default_truth_values():
    v = np.zeros(5)
    assert synth.default_truth(v) == pytest.approx(0.9)
    far = np.array([1.0, 0, 0, 0, 1e6])
    assert synth.default_truth(far) == pytest.approx(0.1)
    v2 = np.array([0.3, 0.0, 0.0, 4.0, 12.0])
    expected = 0.8 * np.exp(-0.9) * np.exp(-12 / 50) + 0.1
    assert synth.default_truth(v2) == pytest.approx(expected, rel=1e-15)


def test_truth_ignores_trees_and_grass():
    rng = np.random.default_rng(0)
    X = rng.random((500, 5)) * [1, 1, 1, 40, 40]
    Y = X.copy()
    Y[:, 1:4] = rng.random((500, 3)) * [1, 1, 40]
    assert np.array_equal(synth.default_truth(X), synth.default_truth(Y))


def uniform_grid(shape):
    return FeatureGrid(np.zeros(shape + (5,)), 1, None)


def test_uniform_planting_passes_chi_square():
    V = uniform_grid((10, 10))
    truth = synth.true_function("uniform")
    counts = np.zeros(100)
    for seed in range(1000):
        for i, j in synth.plant_incidents(V, truth, 10, seed).cells:
            counts[i * 10 + j] += 1
    assert counts.sum() == 10_000
    assert chisquare(counts).pvalue > 0.001


def test_planting_all_cells_and_bounds():
    V = uniform_grid((4, 5))
    inc = synth.plant_incidents(V, synth.true_function("uniform"), 20, 0)
    assert sorted(map(tuple, inc.cells)) == [(i, j) for i in range(4) for j in range(5)]
    with pytest.raises(InvalidCount):
        synth.plant_incidents(V, synth.true_function("uniform"), 21, 0)
    with pytest.raises(InvalidCount):
        synth.plant_incidents(V, synth.true_function("uniform"), 0, 0)


def test_planting_deterministic(scenario):
    V, truth = scenario["V"], scenario["truth"]
    a = synth.plant_incidents(V, truth, 25, 5)
    b = synth.plant_incidents(V, truth, 25, 5)
    assert a.cells == b.cells and len(set(a.cells)) == 25


def test_bad_params():
    with pytest.raises(InvalidParams):
        synth.ScenarioParams(n_rows=105, n_cols=100, g=10)
    with pytest.raises(InvalidParams):
        synth.ScenarioParams(n_incidents=0)
    with pytest.raises(InvalidParams):
        synth.ScenarioParams(truth="nope")


def test_observed_set_noise(scenario):
    data = synth.observed_set(scenario["V"], scenario["truth"], 0.05, 0)
    resid = data.y - scenario["truth"].values.ravel()
    assert len(data) == 10_000 and data.y.min() >= 0 and data.y.max() <= 1
    assert abs(resid.std() - 0.05) < 0.005
