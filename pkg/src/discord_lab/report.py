"""Machine-readable command reports.

Reports are JSON documents. Floats are written with 17 significant digits so
that parsing the text gives back bit-identical values; infinities use the
``Infinity`` token that :func:`json.loads` accepts.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np


@dataclass
class Report:
    command: str
    inputs: dict[str, Any]
    results: dict[str, Any]
    tolerances: dict[str, Any] = field(default_factory=dict)
    rng_seed: int | None = None

    def to_json(self) -> str:
        return dumps(asdict(self)) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Report:
        return cls(**json.loads(text))


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if all(c not in s for c in ".en"):
        s += ".0"
    return s


def _scalar(x) -> str | None:
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format_float(float(x))
    if isinstance(x, str):
        return json.dumps(x)
    return None


def _is_flat(seq) -> bool:
    return all(_scalar(v) is not None for v in seq)


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Serialise nested dicts, sequences, numpy arrays and scalars."""
    s = _scalar(obj)
    if s is not None:
        return s
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if _is_flat(obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")
