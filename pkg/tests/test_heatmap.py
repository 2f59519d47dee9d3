import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from poachmap import labeling
from poachmap.dataset import fit_scaler
from poachmap.errors import ScalerMissing, ScalerUnexpected
from poachmap.features import FeatureGrid
from poachmap.geometry import chebyshev_distance_to_points
from poachmap.heatmap import (
    ProbabilityGrid,
    generate_heatmap,
    gray_levels,
    read_csv,
    read_pgm,
    write_csv,
    write_pgm,
)
from poachmap.models import DecisionTree, ForestParams, RandomForest, fit_forest, fit_kernel_ridge


def const_forest(v):
    return RandomForest([DecisionTree([-1], [0.0], [-1], [-1], [v])])


def grid_of(values):
    return FeatureGrid(np.asarray(values, dtype=float), 1, None)


def test_constant_model_gives_uniform_grid():
    V = grid_of(np.random.default_rng(0).random((4, 6, 5)))
    P = generate_heatmap(const_forest(0.5), V)
    assert P.shape == (4, 6) and np.all(P.values == 0.5)


def test_out_of_range_predictions_are_clamped():
    vals = np.zeros((2, 2, 5))
    vals[1, 1, 0] = 1.0
    # split on a_h: left leaf 1.7, right leaf -0.3
    model = RandomForest([DecisionTree([0, -1, -1], [0.5, 0, 0], [1, -1, -1], [2, -1, -1],
                                       [0.0, 1.7, -0.3])])
    P = generate_heatmap(model, grid_of(vals))
    assert P.values.tolist() == [[1.0, 1.0], [1.0, 0.0]]


def test_scaler_presence_is_checked():
    rng = np.random.default_rng(1)
    X = rng.random((20, 5))
    V = grid_of(X.reshape(4, 5, 5))
    scaler = fit_scaler(X)
    krr = fit_kernel_ridge(scaler.transform(X), rng.random(20))
    with pytest.raises(ScalerMissing):
        generate_heatmap(krr, V)
    with pytest.raises(ScalerUnexpected):
        generate_heatmap(const_forest(0.2), V, scaler)
    P = generate_heatmap(krr, V, scaler)
    expected = np.clip(krr.predict(scaler.transform(X)), 0, 1).reshape(4, 5)
    assert np.array_equal(P.values, expected)


def test_gray_levels_and_polarity():
    P = ProbabilityGrid([[1.0, 0.0, 0.5]])
    assert gray_levels(P).tolist() == [[0, 255, 128]]
    assert gray_levels(P, invert=True).tolist() == [[255, 0, 128]]


def test_pgm_layout():
    P = ProbabilityGrid(np.random.default_rng(2).random((7, 11)))
    data = write_pgm(P)
    header = b"P5\n11 7\n255\n"
    assert data.startswith(header) and len(data) == len(header) + 77
    assert np.array_equal(read_pgm(data), gray_levels(P))
    sink = io.BytesIO()
    write_pgm(P, sink)
    assert sink.getvalue() == data


def test_csv_two_by_two():
    P = ProbabilityGrid([[0.1, 0.2], [0.3, 1.0 / 3]])
    text = write_csv(P)
    assert len(text.splitlines()) == 5 and text.startswith("i,j,p\n")
    assert np.array_equal(read_csv(text).values, P.values)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)),
              elements=st.floats(0, 1)))
def test_csv_round_trip(values):
    P = ProbabilityGrid(values)
    assert np.array_equal(read_csv(write_csv(P)).values, P.values)


def test_probability_grid_rejects_bad_values():
    with pytest.raises(ValueError):
        ProbabilityGrid(np.zeros((0, 0)))
    with pytest.raises(ValueError):
        ProbabilityGrid([[1.2]])


def test_hotspots_are_hotter_than_far_cells(scenario):
    V, incidents = scenario["V"], scenario["incidents"]
    policy = labeling.LabelPolicy(zero_radius=20)
    data = labeling.synthesize_labels(V, incidents, policy)
    model = fit_forest(data.X, data.y, ForestParams(n_trees=100))
    P = generate_heatmap(model, V)
    d = chebyshev_distance_to_points(V.shape, incidents.cells)
    near, far = P.values[d <= 9], P.values[d > 20]
    assert far.size > 0 and near.mean() > far.mean()
    assert write_pgm(P) == write_pgm(generate_heatmap(model, V))
