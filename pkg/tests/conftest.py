import warnings

import numpy as np
import pytest

from poachmap import features, synth


def brute_squared_distances(mask):
    """Exhaustive squared distance from every cell to every true cell."""
    mask = np.asarray(mask, dtype=bool)
    tr, tc = np.nonzero(mask)
    rr, cc = np.indices(mask.shape)
    if tr.size == 0:
        return np.full(mask.shape, mask.shape[0] ** 2 + mask.shape[1] ** 2, dtype=np.int64)
    dr = rr.reshape(-1, 1).astype(np.int64) - tr.reshape(1, -1)
    dc = cc.reshape(-1, 1).astype(np.int64) - tc.reshape(1, -1)
    return (dr * dr + dc * dc).min(axis=1).reshape(mask.shape)


def brute_chebyshev(shape, points):
    rr, cc = np.indices(shape)
    best = np.full(shape, np.iinfo(np.int64).max)
    for r, c in points:
        best = np.minimum(best, np.maximum(np.abs(rr - r), np.abs(cc - c)))
    return best


@pytest.fixture(scope="session")
def scenario():
    """The 2000x2000 / g=20 benchmark scenario with 25 planted incidents."""
    params = synth.ScenarioParams()
    grid = synth.generate_landcover(params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        V = features.build_feature_grid(grid, params.g)
    truth = synth.default_true_function().over(V)
    incidents = synth.plant_incidents(V, truth, params.n_incidents, params.seed)
    return {"params": params, "grid": grid, "V": V, "truth": truth, "incidents": incidents}


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get(
        "tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
