"""JSON file formats: weight-v1, family-v1, weight2d-v1, family2d-v1.

Every file is an object with a ``"format"`` tag, ``"resolution"`` and the
values; an optional ``"meta"`` object carries provenance (generator spec,
averaging mode, ...).  Output is deterministic: sorted keys, ``repr``
doubles, trailing newline.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .averaging import WeightFamily
from .grid import ValidationError, Weight
from .product import Weight2D, WeightFamily2D

FORMATS = ("weight-v1", "family-v1", "weight2d-v1", "family2d-v1")


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"


def to_document(x, meta: dict | None = None) -> dict:
    if isinstance(x, Weight):
        doc = {"format": "weight-v1", "resolution": x.resolution, "values": x.values.tolist()}
    elif isinstance(x, WeightFamily):
        doc = {"format": "family-v1", "resolution": x.resolution,
               "mask": x.mask.astype(int).tolist(), "weights": x.members.tolist()}
    elif isinstance(x, Weight2D):
        doc = {"format": "weight2d-v1", "resolution": x.resolution, "values": x.values.tolist()}
    elif isinstance(x, WeightFamily2D):
        doc = {"format": "family2d-v1", "resolution": x.resolution,
               "mask": x.mask.astype(int).tolist(), "weights": x.members.tolist()}
    else:
        raise TypeError(f"cannot serialise {type(x).__name__}")
    if meta:
        doc["meta"] = meta
    return doc


def _field(doc: dict, name: str):
    if name not in doc:
        raise ValidationError(f"missing field {name!r}")
    return doc[name]


def _array(doc: dict, name: str, ndim: int) -> np.ndarray:
    raw = _field(doc, name)
    try:
        arr = np.array(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"field {name!r} is not a numeric array: {exc}") from None
    if arr.ndim != ndim:
        raise ValidationError(f"field {name!r} must be a {ndim}-dimensional array, got {arr.ndim}")
    return arr


def from_document(doc) -> Weight | WeightFamily | Weight2D | WeightFamily2D:
    if not isinstance(doc, dict):
        raise ValidationError("top level must be a JSON object")
    fmt = _field(doc, "format")
    if fmt not in FORMATS:
        raise ValidationError(f"field 'format': unknown format {fmt!r}")
    resolution = _field(doc, "resolution")
    if not isinstance(resolution, int) or isinstance(resolution, bool) or resolution < 0:
        raise ValidationError(f"field 'resolution' must be a non-negative integer, got {resolution!r}")
    try:
        if fmt == "weight-v1":
            return Weight(resolution, _array(doc, "values", 1))
        if fmt == "weight2d-v1":
            return Weight2D(resolution, _array(doc, "values", 2))
        ndim = 2 if fmt == "family-v1" else 4
        members = _array(doc, "weights", ndim)
        mask = doc.get("mask")
        if mask is not None:
            mask = np.array(mask)
            if mask.dtype.kind not in "biu" or np.any((mask != 0) & (mask != 1)):
                raise ValidationError("field 'mask' must contain 0/1 bits")
        if fmt == "family-v1":
            return WeightFamily(resolution, members, mask)
        return WeightFamily2D(resolution, members, mask)
    except ValidationError as exc:
        raise ValidationError(f"{fmt}: {exc}") from None


def save(path: str | Path, x, meta: dict | None = None) -> None:
    Path(path).write_text(dumps(to_document(x, meta)))


def load_document(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def load(path: str | Path):
    return from_document(load_document(path))
