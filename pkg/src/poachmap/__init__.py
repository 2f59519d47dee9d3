"""Poaching hotspot heatmaps from classified land-cover rasters.

Pipeline: parse a land-cover raster (:mod:`poachmap.landcover`), aggregate
it into a five-feature grid (:mod:`poachmap.features`), turn incident
locations into distance-decayed labels (:mod:`poachmap.labeling`), split and
scale (:mod:`poachmap.dataset`), fit a regressor (:mod:`poachmap.models`),
score it (:mod:`poachmap.evaluation`) and paint the probability heatmap
(:mod:`poachmap.heatmap`). :mod:`poachmap.synth` builds scenarios with a
known answer.
"""

from .dataset import Scaler, SplitSpec, apply_scaler, fit_scaler, split
from .evaluation import grid_search, permutation_importance, r2
from .features import FEATURE_NAMES, FeatureGrid, FeatureVector, build_feature_grid, feature_at
from .geometry import (
    brute_force_distance,
    chebyshev_distance_to_points,
    exact_distance_transform,
    window_counts,
)
from .heatmap import ProbabilityGrid, generate_heatmap, write_csv, write_pgm
from .labeling import IncidentSet, LabeledSet, LabelPolicy, parse_incidents, synthesize_labels
from .landcover import (
    ClassMap,
    GeoTransform,
    LandCoverGrid,
    SemanticClass,
    class_of,
    parse_ascii_grid,
    validate,
)

__version__ = "0.1.0"
