# coding: utf-8

# # Exact distances on the feature grid
#
# d_f and d_w are the Euclidean distance, in feature-grid cells, from each cell
# to the nearest cell holding forest (or wetland). A brute-force search over all
# cell pairs is quadratic. The two-pass lower-envelope transform gets the same
# integers in linear time.

import time

import numpy as np

from poachmap.geometry import brute_force_squared_distance, squared_distance_transform

# A small mask first, so the output is easy to read.

mask = np.zeros((7, 9), dtype=bool)
mask[1, 2] = mask[5, 7] = True
print(squared_distance_transform(mask))

# Each entry is dr**2 + dc**2 to the closer of the two true cells. Check a few
# cells against the exhaustive search.

for cell in [(0, 0), (3, 4), (6, 8)]:
    print(cell, squared_distance_transform(mask)[cell], brute_force_squared_distance(mask, cell))

# Now a 600x600 grid, the size of the feature grid for a 12000 pixel raster at g=20.

rng = np.random.default_rng(0)
big = rng.random((600, 600)) < 0.002
t0 = time.perf_counter()
sq = squared_distance_transform(big)
print(f"600x600 transform: {time.perf_counter() - t0:.3f}s, max distance {np.sqrt(sq.max()):.2f} cells")
