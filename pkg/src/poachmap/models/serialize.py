"""Model files.

A model file is a single JSON document::

    {"format": "poachmap-model", "version": 1, "family": "<family>",
     "model": {...}, "scaler": {...} | null}

Floats are written with ``repr`` precision, so a round trip reproduces
predictions bit for bit. Keys are sorted to make the bytes deterministic.
"""

import json

from ..dataset import Scaler
from ..errors import CorruptModel, UnknownVersion
from .forest import RandomForest
from .kernel_ridge import KernelRidge
from .mlp import Mlp
from .tree import DecisionTree

FORMAT = "poachmap-model"
VERSION = 1

FAMILIES = {cls.family: cls for cls in (DecisionTree, RandomForest, KernelRidge, Mlp)}


def serialize(model, scaler=None):
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "family": model.family,
        "model": model.to_dict(),
        "scaler": None if scaler is None else scaler.to_dict(),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def load_bundle(text):
    """Parse a model file into ``(model, scaler_or_None)``."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptModel(f"model file is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptModel(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise CorruptModel("not a poachmap model file")
    if doc.get("version") != VERSION:
        raise UnknownVersion(f"unsupported model file version {doc.get('version')!r}")
    try:
        cls = FAMILIES[doc["family"]]
        model = cls.from_dict(doc["model"])
        scaler = None if doc.get("scaler") is None else Scaler.from_dict(doc["scaler"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"model file is missing or has malformed fields: {exc}") from exc
    return model, scaler


def deserialize(text):
    return load_bundle(text)[0]
