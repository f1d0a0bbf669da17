"""Canonical JSON: sorted keys, floats at 17 significant digits.

Non-finite floats have no JSON literal and are written as the strings
"inf", "-inf" and "nan".
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, is_dataclass
from typing import Any, Optional

import numpy as np

SCHEMA = "equigon/1"


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def canonical_dumps(obj: Any) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, enum.Enum):
        return canonical_dumps(obj.value)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return canonical_dumps(obj.tolist())
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{canonical_dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_dumps(v) for v in obj) + "]"
    if hasattr(obj, "to_json"):
        return canonical_dumps(obj.to_json())
    if is_dataclass(obj):
        return canonical_dumps(asdict(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def with_schema(command: str, payload: dict) -> dict:
    return {"schema": SCHEMA, "command": command, **payload}


@dataclass
class RunRecord:
    """Enough to replay a CLI invocation and diff its output."""

    command: str
    inputs: dict
    outputs: Any
    tool_version: str
    seed: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "tool_version": self.tool_version,
            "seed": self.seed,
        }

    def dumps(self) -> str:
        return canonical_dumps(self)

    @classmethod
    def loads(cls, text: str) -> "RunRecord":
        raw = json.loads(text)
        return cls(raw["command"], raw["inputs"], raw["outputs"], raw["tool_version"], raw.get("seed"))
