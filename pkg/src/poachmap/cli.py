"""Command line interface.

    poachmap synth      --config run.ini     scenario raster, incidents, truth
    poachmap featurize  --config run.ini     features.csv
    poachmap label      --config run.ini     labels.csv
    poachmap train      --config run.ini     model.json, scores.csv
    poachmap heatmap    --config run.ini     heatmap.pgm, heatmap.csv
    poachmap importance --config run.ini     importance.csv
    poachmap pipeline   --config run.ini     all of the above + manifest.json

Exit codes: 0 success, 1 I/O error, 2 invalid input, 3 model or numeric error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import warnings
from pathlib import Path


from . import dataset, evaluation, features, heatmap, labeling, landcover, synth
from .config import Config, load_config
from .errors import PoachmapError
from .models import load_bundle, serialize

log = logging.getLogger("poachmap")

PIPELINE_ARTIFACTS = ("features.csv", "labels.csv", "model.json", "scores.csv",
                      "heatmap.pgm", "heatmap.csv", "importance.csv")


class InputMissing(OSError):
    pass


def _require(path, what):
    if path is None:
        raise InputMissing(f"no {what} path configured")
    if not Path(path).is_file():
        raise InputMissing(f"{what} not found: {path}")
    return Path(path)


def _write_text(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# Stage helpers -------------------------------------------------------------

def load_raster(cfg):
    path = _require(cfg.raster, "raster")
    with open(path, encoding="utf-8") as fh:
        return landcover.parse_ascii_grid(fh, cfg.classes, strict=cfg.strict)


def feature_grid(cfg):
    grid = load_raster(cfg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        V = features.build_feature_grid(grid, cfg.g, cfg.min_tree_pixels, cfg.min_wetland_pixels)
    for w in caught:
        log.warning("%s", w.message)
    return grid, V


def labeled_set(cfg, grid=None, V=None):
    if V is None:
        grid, V = feature_grid(cfg)
    path = _require(cfg.incidents, "incidents file")
    with open(path, encoding="utf-8") as fh:
        incidents = labeling.parse_incidents(fh, grid.geo, cfg.g, grid.shape)
    return V, incidents, labeling.synthesize_labels(V, incidents, cfg.policy)


def splits(cfg, labeled):
    train, val, test = dataset.split(labeled, cfg.split)
    scaler = dataset.fit_scaler(train.X, "train") if cfg.needs_scaling else None
    return train, val, test, scaler


def _xy(part, scaler):
    return (part.X if scaler is None else scaler.transform(part.X)), part.y


def _safe_r2(pred, y):
    try:
        return evaluation.r2(pred, y)
    except PoachmapError:
        return None


# Commands ------------------------------------------------------------------

def cmd_featurize(cfg):
    grid, V = feature_grid(cfg)
    report = landcover.validate(grid)
    _write_text(cfg.out / "features.csv", features.export_features(V))
    counts = ", ".join(f"{c.name.lower()}={n}" for c, n in sorted(report.counts.items()))
    log.info("raster %dx%d -> features %dx%d (g=%d); pixels: %s",
             grid.n_rows, grid.n_cols, V.n_rows, V.n_cols, cfg.g, counts)
    return {"features.csv": cfg.out / "features.csv"}


def cmd_label(cfg, grid=None, V=None, computed=None):
    _, incidents, labeled = computed or labeled_set(cfg, grid, V)
    stats = labeling.label_stats(labeled)
    _write_text(cfg.out / "labels.csv", labeling.export_labels(labeled))
    log.info("%d incident cells -> %d positive and %d zero rows",
             len(incidents), stats["positive"], stats["zero"])
    return {"labels.csv": cfg.out / "labels.csv"}


def cmd_train(cfg, labeled=None):
    if labeled is None:
        labeled = labeled_set(cfg)[2]
    train, val, test, scaler = splits(cfg, labeled)
    tr, va, te = _xy(train, scaler), _xy(val, scaler), _xy(test, scaler)
    if cfg.grid_search:
        params, report, model = evaluation.grid_search(
            cfg.family, cfg.effective_grid(), tr, va, seed=cfg.seed, base=cfg.model_params)
    else:
        params = dict(cfg.model_params)
        model = evaluation.fit_family(cfg.family, params, tr, va, seed=cfg.seed)
        report = evaluation.ScoreReport(cfg.family, params)
        report.val_r2 = _safe_r2(model.predict(va[0]), va[1])
    report.train_r2 = _safe_r2(model.predict(tr[0]), tr[1])
    report.test_r2 = _safe_r2(model.predict(te[0]), te[1])
    _write_text(cfg.out / "model.json", serialize(model, scaler))
    _write_text(cfg.out / "scores.csv", report.to_csv())
    log.info("trained %s\n%s", cfg.family, report.to_text().rstrip())
    return {"model.json": cfg.out / "model.json", "scores.csv": cfg.out / "scores.csv"}


def _load_model(path):
    path = _require(path, "model file")
    return load_bundle(path.read_bytes())


def cmd_heatmap(cfg, model_path=None, V=None):
    model, scaler = _load_model(model_path or cfg.out / "model.json")
    if V is None:
        V = feature_grid(cfg)[1]
    P = heatmap.generate_heatmap(model, V, scaler)
    pgm = cfg.out / "heatmap.pgm"
    pgm.parent.mkdir(parents=True, exist_ok=True)
    pgm.write_bytes(heatmap.write_pgm(P, invert=cfg.invert))
    _write_text(cfg.out / "heatmap.csv", heatmap.write_csv(P))
    log.info("heatmap %dx%d: mean p %.4f, max p %.4f", *P.shape,
             float(P.values.mean()), float(P.values.max()))
    return {"heatmap.pgm": pgm, "heatmap.csv": cfg.out / "heatmap.csv"}


def cmd_importance(cfg, model_path=None, labeled=None):
    model, scaler = _load_model(model_path or cfg.out / "model.json")
    if labeled is None:
        labeled = labeled_set(cfg)[2]
    _, val, _, _ = splits(cfg, labeled)
    predict = model.predict if scaler is None else (lambda X: model.predict(scaler.transform(X)))
    report = evaluation.permutation_importance(model, val.X, val.y, cfg.n_repeats,
                                               cfg.seed, predict=predict)
    _write_text(cfg.out / "importance.csv", report.to_csv())
    log.info("permutation importance on validation split\n%s", report.to_text().rstrip())
    return {"importance.csv": cfg.out / "importance.csv"}


def cmd_synth(cfg):
    params = cfg.scenario
    grid = synth.generate_landcover(params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        V = features.build_feature_grid(grid, params.g)
    truth = synth.true_function(params.truth).over(V)
    incidents = synth.plant_incidents(V, truth, params.n_incidents, params.seed)
    raster_path = cfg.raster or cfg.out / "raster.asc"
    incidents_path = cfg.incidents or cfg.out / "incidents.csv"
    with open(_mk(raster_path), "w", encoding="utf-8", newline="\n") as fh:
        landcover.write_ascii_grid(grid, fh)
    _write_text(incidents_path, "i,j\n" + "".join(f"{i},{j}\n" for i, j in incidents.cells))
    truth_path = cfg.out / "truth.csv"
    _write_text(truth_path, heatmap.write_csv(heatmap.ProbabilityGrid(truth.values)))
    log.info("synthetic %dx%d raster, %d incidents", params.n_rows, params.n_cols,
             len(incidents))
    return {"raster": raster_path, "incidents": incidents_path, "truth.csv": truth_path}


def _mk(path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return path


def sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def cmd_pipeline(cfg):
    """featurize -> label -> train -> heatmap -> importance, then a manifest."""
    outputs = {}
    grid, V = feature_grid(cfg)
    _write_text(cfg.out / "features.csv", features.export_features(V))
    outputs["features.csv"] = cfg.out / "features.csv"
    computed = labeled_set(cfg, grid, V)
    labeled = computed[2]
    outputs.update(cmd_label(cfg, computed=computed))
    outputs.update(cmd_train(cfg, labeled))
    outputs.update(cmd_heatmap(cfg, V=V))
    outputs.update(cmd_importance(cfg, labeled=labeled))
    manifest = {"artifacts": {name: {"path": Path(p).name, "sha256": sha256(p)}
                              for name, p in outputs.items()},
                "seed": cfg.seed}
    _write_text(cfg.out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return outputs


COMMANDS = {
    "featurize": cmd_featurize,
    "label": cmd_label,
    "train": cmd_train,
    "heatmap": cmd_heatmap,
    "importance": cmd_importance,
    "synth": cmd_synth,
    "pipeline": cmd_pipeline,
}


def build_parser():
    p = argparse.ArgumentParser(prog="poachmap", description="Poaching hotspot heatmaps "
                                "from land-cover rasters and incident locations.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="INI configuration file")
        sp.add_argument("--seed", type=int, help="top-level seed (overrides [run] seed)")
        sp.add_argument("--out", help="output directory (overrides [run] out)")
        if name in ("heatmap", "importance"):
            sp.add_argument("--model", help="model file (default <out>/model.json)")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config) if args.config else Config()
        if args.seed is not None and args.seed < 0:
            raise PoachmapError("--seed must be non-negative")
        cfg = cfg.with_overrides(seed=args.seed, out=args.out)
        log.info("effective config:\n%s", cfg.to_ini().rstrip())
        cfg.out.mkdir(parents=True, exist_ok=True)
        _write_text(cfg.out / "effective_config.ini", cfg.to_ini())
        fn = COMMANDS[args.command]
        if args.command in ("heatmap", "importance"):
            fn(cfg, args.model)
        else:
            fn(cfg)
    except PoachmapError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
