"""INI configuration for the command line pipeline.

Example::

    [run]
    seed = 7
    out = build/run

    [paths]
    raster = scenario/raster.asc
    incidents = scenario/incidents.csv

    [features]
    g = 20

    [classes]
    ; raster code = semantic class (built_up, trees, grass, wetland, other)
    95 = trees

    [labels]
    decay_step = 0.1
    positive_radius = 9
    zero_radius = 400

    [split]
    train = 0.6
    val = 0.2
    test = 0.2

    [model]
    family = random_forest      ; random_forest | kernel_ridge | mlp
    grid_search = false
    n_trees = 500
    max_depth = 6

    [grid]
    ; comma separated lattice per parameter, used when grid_search = true
    max_depth = 2, 4, 6, 8, 10
    n_trees = 100, 300, 500

    [importance]
    n_repeats = 10

    [heatmap]
    invert = false

    [synth]
    n_rows = 2000
    n_cols = 2000
    n_incidents = 25
    grass = 60, 80, 400          ; blob count, min side, max side

Every stage draws randomness from the single ``run.seed`` through named
streams, so any stage can be rerun alone with the same result.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import InvalidParams
from .evaluation import DEFAULT_GRIDS, FAMILY_NEEDS_SCALING
from .labeling import LabelPolicy
from .landcover import ClassMap, SemanticClass
from .dataset import SplitSpec
from .synth import ScenarioParams

CLASS_NAMES = {c.name.lower(): c for c in SemanticClass}
CLASS_NAMES["builtup"] = SemanticClass.BUILT_UP
_INT_MODEL_KEYS = {"n_trees", "max_depth", "min_samples_leaf", "features_per_split",
                   "max_iter", "patience", "max_rows"}
_FLOAT_MODEL_KEYS = {"gamma", "lam", "learning_rate"}


@dataclass
class Config:
    seed: int = 0
    out: Path = Path("out")
    raster: Path | None = None
    incidents: Path | None = None
    g: int = 20
    min_tree_pixels: int = 1
    min_wetland_pixels: int = 1
    classes: ClassMap = field(default_factory=ClassMap)
    strict: bool = False
    policy: LabelPolicy = field(default_factory=LabelPolicy)
    split: SplitSpec = field(default_factory=SplitSpec)
    family: str = "random_forest"
    model_params: dict = field(default_factory=lambda: {"n_trees": 500, "max_depth": 6})
    grid_search: bool = False
    grid: dict | None = None
    n_repeats: int = 10
    invert: bool = False
    scenario: ScenarioParams = field(default_factory=ScenarioParams)
    class_overrides: dict = field(default_factory=dict)

    @property
    def needs_scaling(self):
        return FAMILY_NEEDS_SCALING[self.family]

    def effective_grid(self):
        return self.grid if self.grid is not None else DEFAULT_GRIDS[self.family]

    def with_overrides(self, seed=None, out=None):
        cfg = replace(self)
        if seed is not None:
            cfg = replace(cfg, seed=int(seed))
        if out is not None:
            cfg = replace(cfg, out=Path(out))
        cfg.split = replace(cfg.split, seed=cfg.seed)
        cfg.scenario = replace(cfg.scenario, seed=cfg.seed)
        return cfg

    def to_ini(self):
        """Effective configuration with every default resolved."""
        cp = configparser.ConfigParser()
        cp["run"] = {"seed": str(self.seed), "out": str(self.out)}
        cp["paths"] = {k: str(v) for k, v in
                       (("raster", self.raster), ("incidents", self.incidents)) if v is not None}
        cp["features"] = {"g": str(self.g), "min_tree_pixels": str(self.min_tree_pixels),
                          "min_wetland_pixels": str(self.min_wetland_pixels),
                          "strict": str(self.strict).lower()}
        cp["classes"] = {str(k): v.name.lower() for k, v in sorted(self.classes.code_table.items())}
        cp["labels"] = {"decay_step": repr(self.policy.decay_step),
                        "positive_radius": str(self.policy.positive_radius),
                        "zero_radius": str(self.policy.zero_radius)}
        cp["split"] = {"train": repr(self.split.train_frac), "val": repr(self.split.val_frac),
                       "test": repr(self.split.test_frac)}
        cp["model"] = {"family": self.family, "grid_search": str(self.grid_search).lower(),
                       **{k: _fmt_value(v) for k, v in sorted(self.model_params.items())}}
        if self.grid_search:
            cp["grid"] = {k: ", ".join(_fmt_value(x) for x in v)
                          for k, v in sorted(self.effective_grid().items())}
        cp["importance"] = {"n_repeats": str(self.n_repeats)}
        cp["heatmap"] = {"invert": str(self.invert).lower()}
        s = self.scenario
        cp["synth"] = {"n_rows": str(s.n_rows), "n_cols": str(s.n_cols), "g": str(s.g),
                       "n_incidents": str(s.n_incidents), "truth": s.truth,
                       "noise": repr(s.noise),
                       **{SemanticClass(c).name.lower(): ", ".join(map(str, v))
                          for c, v in sorted(s.blobs.items())}}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()


def _fmt_value(v):
    if isinstance(v, (tuple, list)):
        return " ".join(str(x) for x in v)
    return repr(v) if isinstance(v, float) else str(v)


def _parse_model_value(key, raw):
    if key in _INT_MODEL_KEYS:
        return int(raw)
    if key in _FLOAT_MODEL_KEYS:
        return float(raw)
    if key == "hidden":
        return tuple(int(x) for x in raw.replace(",", " ").split())
    raise InvalidParams(f"unknown model parameter {key!r}")


def _class(name):
    try:
        return CLASS_NAMES[name.strip().lower()]
    except KeyError:
        raise InvalidParams(f"unknown semantic class {name!r}") from None


def parse_config(text, base_dir=None):
    """Build a :class:`Config` from INI text; relative paths resolve against ``base_dir``."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise InvalidParams(f"config syntax error: {exc}") from exc
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    cfg = Config()

    def path(v):
        p = Path(v)
        return p if p.is_absolute() else base / p

    try:
        if cp.has_section("run"):
            cfg.seed = cp.getint("run", "seed", fallback=0)
            if "out" in cp["run"]:
                cfg.out = path(cp["run"]["out"])
        if cp.has_section("paths"):
            if "raster" in cp["paths"]:
                cfg.raster = path(cp["paths"]["raster"])
            if "incidents" in cp["paths"]:
                cfg.incidents = path(cp["paths"]["incidents"])
        if cp.has_section("features"):
            f = cp["features"]
            cfg.g = f.getint("g", 20)
            cfg.min_tree_pixels = f.getint("min_tree_pixels", 1)
            cfg.min_wetland_pixels = f.getint("min_wetland_pixels", 1)
            cfg.strict = f.getboolean("strict", False)
        if cp.has_section("classes"):
            cfg.class_overrides = {int(k): _class(v) for k, v in cp["classes"].items()}
            cfg.classes = ClassMap().with_overrides(cfg.class_overrides)
        if cp.has_section("labels"):
            lb = cp["labels"]
            cfg.policy = LabelPolicy(lb.getfloat("decay_step", 0.1),
                                     lb.getint("positive_radius", 9),
                                     lb.getint("zero_radius", 400))
        if cp.has_section("split"):
            sp = cp["split"]
            cfg.split = SplitSpec(sp.getfloat("train", 0.6), sp.getfloat("val", 0.2),
                                  sp.getfloat("test", 0.2))
        if cp.has_section("model"):
            m = dict(cp["model"])
            cfg.family = m.pop("family", "random_forest").strip()
            if cfg.family not in FAMILY_NEEDS_SCALING:
                raise InvalidParams(f"unknown model family {cfg.family!r}")
            cfg.grid_search = cp["model"].getboolean("grid_search", False)
            m.pop("grid_search", None)
            defaults = {"random_forest": {"n_trees": 500, "max_depth": 6}}.get(cfg.family, {})
            cfg.model_params = {**defaults,
                                **{k: _parse_model_value(k, v) for k, v in m.items()}}
        if cp.has_section("grid"):
            cfg.grid = {k: [_parse_model_value(k, x) for x in v.split(",")]
                        for k, v in cp["grid"].items()}
        if cp.has_section("importance"):
            cfg.n_repeats = cp.getint("importance", "n_repeats", fallback=10)
            if cfg.n_repeats < 1:
                raise InvalidParams("n_repeats must be >= 1")
        if cp.has_section("heatmap"):
            cfg.invert = cp.getboolean("heatmap", "invert", fallback=False)
        if cp.has_section("synth"):
            cfg.scenario = _parse_scenario(cp["synth"])
        if cfg.g < 1:
            raise InvalidParams("g must be >= 1")
    except ValueError as exc:
        if isinstance(exc, InvalidParams):
            raise
        raise InvalidParams(f"bad config value: {exc}") from exc
    return cfg.with_overrides()


def _parse_scenario(sec):
    defaults = ScenarioParams()
    blobs = dict(defaults.blobs)
    for cls in (SemanticClass.GRASS, SemanticClass.TREES, SemanticClass.WETLAND,
                SemanticClass.BUILT_UP):
        key = cls.name.lower()
        if key in sec:
            parts = [int(x) for x in sec[key].split(",")]
            if len(parts) != 3:
                raise InvalidParams(f"synth.{key} needs 'count, min, max'")
            blobs[cls] = tuple(parts)
    return ScenarioParams(
        n_rows=sec.getint("n_rows", defaults.n_rows),
        n_cols=sec.getint("n_cols", defaults.n_cols),
        g=sec.getint("g", defaults.g),
        blobs=blobs,
        n_incidents=sec.getint("n_incidents", defaults.n_incidents),
        truth=sec.get("truth", defaults.truth).strip(),
        noise=sec.getfloat("noise", defaults.noise),
    )


def load_config(path):
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_config(text, base_dir=path.parent)
