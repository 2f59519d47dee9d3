import io
import math
import warnings

import numpy as np
import pytest

from conftest import brute_squared_distances
from poachmap.errors import IndivisibleDimensions, OutOfBounds
from poachmap.features import (
    FEATURE_NAMES,
    FeatureGrid,
    build_feature_grid,
    export_features,
    feature_at,
    read_features,
)
from poachmap.landcover import GeoTransform, LandCoverGrid

GEO = GeoTransform(-18.0, 23.0, 1 / 12000)


def grid(codes):
    return LandCoverGrid(np.asarray(codes), GEO)


def test_full_scale_dimensions():
    # 12000 x 12000 pixels with g = 20 gives the 600 x 600 feature grid
    assert 12000 // 20 == 600
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        V = build_feature_grid(grid(np.full((1200, 1200), 30)), 20)
    assert V.shape == (60, 60)
    assert V.geo.pixel_size == pytest.approx(20 / 12000)


def test_pure_grass_sentinels():
    with pytest.warns(RuntimeWarning):
        V = build_feature_grid(grid(np.full((40, 40), 30)), 20)
    s = math.sqrt(2 * 2 + 2 * 2)
    for i in range(2):
        for j in range(2):
            v = feature_at(V, i, j)
            assert (v.a_h, v.a_t, v.a_g, v.d_f, v.d_w) == (0, 0, 1, s, s)
    assert len(V.warnings) == 2


def test_single_tree_block_distance_pattern():
    codes = np.full((60, 60), 20)
    codes[:20, :20] = 10
    codes[40:, 40:] = 90
    V = build_feature_grid(grid(codes), 20)
    r2, r5, r8 = math.sqrt(2), math.sqrt(5), math.sqrt(8)
    assert V.feature("d_f").tolist() == [[0, 1, 2], [1, r2, r5], [2, r5, r8]]
    assert V.feature("d_w")[2, 2] == 0


def test_quarter_built_up():
    codes = np.full((20, 20), 30)
    codes[:5, :] = 50
    codes[10, 10] = 10
    codes[11, 11] = 90
    v = feature_at(build_feature_grid(grid(codes), 20), 0, 0)
    assert v.a_h == 0.25
    assert v.d_f == 0 and v.d_w == 0


def test_indivisible():
    with pytest.raises(IndivisibleDimensions):
        build_feature_grid(grid(np.full((30, 40), 10)), 20)


def test_feature_at_bounds():
    with pytest.warns(RuntimeWarning):
        V = build_feature_grid(grid(np.full((4, 4), 10)), 2)
    with pytest.raises(OutOfBounds):
        feature_at(V, 2, 0)


def brute_features(codes, g, classes):
    """Recount every block from raw codes and search all cells for distances."""
    n_r, n_c = codes.shape[0] // g, codes.shape[1] // g
    out = np.zeros((n_r, n_c, 5))
    forest = np.zeros((n_r, n_c), bool)
    wet = np.zeros((n_r, n_c), bool)
    for i in range(n_r):
        for j in range(n_c):
            block = codes[i * g:(i + 1) * g, j * g:(j + 1) * g].ravel().tolist()
            out[i, j, 0] = sum(c == 50 for c in block) / (g * g)
            out[i, j, 1] = sum(c == 10 for c in block) / (g * g)
            out[i, j, 2] = sum(c == 30 for c in block) / (g * g)
            forest[i, j] = any(c == 10 for c in block)
            wet[i, j] = any(c == 90 for c in block)
    return out, forest, wet


def test_random_grid_matches_recount():
    rng = np.random.default_rng(2)
    codes = rng.choice([10, 20, 30, 50, 90, 80], p=[.02, .5, .3, .1, .03, .05], size=(60, 80))
    V = build_feature_grid(grid(codes), 4)
    expect, forest, wet = brute_features(codes, 4, None)
    assert np.array_equal(V.values[:, :, :3], expect[:, :, :3])
    assert np.array_equal(V.feature("d_f"), np.sqrt(brute_squared_distances(forest)))
    assert np.array_equal(V.feature("d_w"), np.sqrt(brute_squared_distances(wet)))
    # fractions are multiples of 1/g^2; a_h + a_t + a_g <= 1
    assert np.all(np.isclose(V.values[:, :, :3] * 16, np.round(V.values[:, :, :3] * 16)))
    assert np.all(V.values[:, :, :3].sum(axis=2) <= 1 + 1e-12)


def test_min_tree_pixels_threshold():
    codes = np.full((4, 4), 20)
    codes[0, 0] = 10
    codes[2, 2] = codes[2, 3] = 10
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        V = build_feature_grid(grid(codes), 2, min_tree_pixels=2)
    assert V.feature("d_f").tolist() == [[math.sqrt(2), 1], [1, 0]]


def test_deterministic_and_locality():
    rng = np.random.default_rng(9)
    codes = rng.choice([10, 20, 30, 50, 90], size=(40, 40))
    a = build_feature_grid(grid(codes), 5)
    b = build_feature_grid(grid(codes), 5)
    assert a.values.tobytes() == b.values.tobytes()
    changed = codes.copy()
    changed[7, 13] = 50 if codes[7, 13] != 50 else 30
    c = build_feature_grid(grid(changed), 5)
    diff = np.argwhere(np.any(a.values[:, :, :3] != c.values[:, :, :3], axis=2))
    assert diff.tolist() == [[1, 2]]


def test_export_shape_and_round_trip():
    V = FeatureGrid(np.arange(5.0).reshape(1, 1, 5) / 3, 20)
    text = export_features(V)
    assert text.splitlines()[0] == "i,j," + ",".join(FEATURE_NAMES)
    assert len(text.splitlines()) == 2

    rng = np.random.default_rng(0)
    V = FeatureGrid(rng.random((7, 4, 5)) * [1, 1, 1, 50, 80], 20)
    buf = io.StringIO()
    export_features(V, buf)
    back = read_features(buf.getvalue())
    assert np.array_equal(back.values, V.values)


def test_export_line_count_full_scale():
    V = FeatureGrid(np.zeros((600, 600, 5)), 20)
    assert export_features(V).count("\n") == 360001
