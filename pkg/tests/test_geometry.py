import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import brute_chebyshev, brute_squared_distances
from poachmap.errors import IndivisibleDimensions, OutOfBounds
from poachmap.geometry import (
    brute_force_distance,
    chebyshev_distance_to_points,
    exact_distance_transform,
    window_counts,
)
from poachmap.landcover import ClassMap, GeoTransform, LandCoverGrid, SemanticClass as S

GEO = GeoTransform(0.0, 0.0, 1.0)


def test_window_counts_uniform():
    g = LandCoverGrid(np.full((4, 4), 10), GEO)
    assert window_counts(g, 2, S.TREES).tolist() == [[4, 4], [4, 4]]
    assert window_counts(g, 2, S.BUILT_UP).tolist() == [[0, 0], [0, 0]]


def test_window_counts_match_double_loop():
    rng = np.random.default_rng(3)
    g = LandCoverGrid(rng.choice([10, 20, 30, 50, 90], size=(40, 40)), GEO)
    sem = g.semantic()
    for cls in S:
        got = window_counts(g, 20, cls)
        for i in range(2):
            for j in range(2):
                block = sem[i * 20:(i + 1) * 20, j * 20:(j + 1) * 20]
                assert got[i, j] == sum(1 for v in block.ravel() if v == cls)


def test_window_counts_indivisible():
    g = LandCoverGrid(np.full((5, 4), 10), GEO)
    with pytest.raises(IndivisibleDimensions):
        window_counts(g, 2, S.TREES)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 5), st.data())
def test_window_counts_sum_to_area(bi, bj, g, data):
    codes = data.draw(arrays(np.int64, (bi * g, bj * g), elements=st.sampled_from([10, 30, 50, 90, 20])))
    grid = LandCoverGrid(codes, GEO)
    total = sum(window_counts(grid, g, cls) for cls in S)
    assert np.all(total == g * g)


def test_single_source_edt():
    m = np.zeros((3, 3), bool)
    m[0, 0] = True
    d = exact_distance_transform(m)
    r2, r5, r8 = math.sqrt(2), math.sqrt(5), math.sqrt(8)
    assert d.values.tolist() == [[0, 1, 2], [1, r2, r5], [2, r5, r8]]
    assert not d.sentinel_used


def test_all_true_and_all_false():
    assert np.all(exact_distance_transform(np.ones((4, 5), bool)).values == 0)
    empty = exact_distance_transform(np.zeros((3, 4), bool))
    assert empty.sentinel_used
    assert np.all(empty.values == 5.0)


def test_edt_matches_brute_force_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        shape = tuple(rng.integers(1, 30, size=2))
        m = rng.random(shape) < rng.uniform(0.01, 0.3)
        d = exact_distance_transform(m)
        assert np.array_equal(d.squared, brute_squared_distances(m))
        r, c = rng.integers(0, shape[0]), rng.integers(0, shape[1])
        assert d.values[r, c] == brute_force_distance(m, (r, c))


masks = st.tuples(st.integers(1, 12), st.integers(1, 12)).flatmap(
    lambda s: arrays(bool, s, elements=st.booleans()))


@settings(max_examples=60, deadline=None)
@given(masks)
def test_edt_properties(m):
    d = exact_distance_transform(m)
    if m.any():
        assert np.array_equal(d.squared, brute_squared_distances(m))
        assert np.array_equal(d.values == 0, m)
    # 1-Lipschitz across 4- and 8-neighbours
    v = d.values
    assert np.all(np.abs(np.diff(v, axis=0)) <= 1 + 1e-12)
    assert np.all(np.abs(np.diff(v, axis=1)) <= 1 + 1e-12)
    assert np.all(np.abs(v[1:, 1:] - v[:-1, :-1]) <= math.sqrt(2) + 1e-12)


@settings(max_examples=40, deadline=None)
@given(masks, st.data())
def test_edt_monotone_under_added_source(m, data):
    if not m.any():
        return
    r = data.draw(st.integers(0, m.shape[0] - 1))
    c = data.draw(st.integers(0, m.shape[1] - 1))
    more = m.copy()
    more[r, c] = True
    assert np.all(exact_distance_transform(more).squared <= exact_distance_transform(m).squared)


def test_brute_force_examples():
    m = np.zeros((1, 4), bool)
    m[0, 3] = True
    assert brute_force_distance(m, (0, 0)) == 3.0
    assert brute_force_distance(m, (0, 3)) == 0.0
    assert brute_force_distance(np.zeros((3, 4), bool), (1, 1)) == 5.0
    with pytest.raises(OutOfBounds):
        brute_force_distance(m, (1, 0))


def test_chebyshev_examples():
    d = chebyshev_distance_to_points((11, 11), [(5, 5)])
    assert d[6, 6] == 1 and d[5, 5] == 0 and d[5, 7] == 2 and d[0, 0] == 5
    with pytest.raises(OutOfBounds):
        chebyshev_distance_to_points((4, 4), [(4, 0)])
    empty = chebyshev_distance_to_points((3, 4), [])
    assert np.all(empty == 5)


def test_chebyshev_matches_brute_force():
    rng = np.random.default_rng(5)
    pts = [tuple(p) for p in rng.integers(0, 60, size=(20, 2))]
    d = chebyshev_distance_to_points((60, 60), pts)
    assert np.array_equal(d, brute_chebyshev((60, 60), pts))
    assert d.dtype.kind == "i"
    assert np.all(np.abs(np.diff(d, axis=0)) <= 1) and np.all(np.abs(np.diff(d, axis=1)) <= 1)
