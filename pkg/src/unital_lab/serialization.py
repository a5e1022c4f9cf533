"""JSON codecs: complex numbers travel as ``[re, im]`` pairs."""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np


class ConfigError(ValueError):
    """A configuration or spec file is malformed; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(obj, field: str = "value") -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2 and all(_is_number(x) for x in obj):
        return complex(float(obj[0]), float(obj[1]))
    raise ConfigError(field, f"expected a number or an [re, im] pair, got {obj!r}")


def matrix_to_json(m) -> list:
    """Nested rows of ``[re, im]`` pairs."""
    a = np.asarray(m, dtype=complex)
    return [[complex_to_json(z) for z in row] for row in a]


def matrix_from_json(obj, field: str = "matrix", shape: tuple | None = None) -> np.ndarray:
    """Parse nested rows of pairs, or a flat row-major list of pairs for a square matrix."""
    if not isinstance(obj, (list, tuple)) or not obj:
        raise ConfigError(field, "expected a non-empty list")
    if all(isinstance(row, (list, tuple)) and row and not _is_pair(row) for row in obj) or _real_rows(obj, shape):
        rows = [[complex_from_json(z, f"{field}[{r}][{c}]") for c, z in enumerate(row)] for r, row in enumerate(obj)]
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ConfigError(field, "rows have unequal lengths")
        a = np.array(rows, dtype=complex)
    else:
        flat = [complex_from_json(z, f"{field}[{k}]") for k, z in enumerate(obj)]
        if shape is None:
            side = math.isqrt(len(flat))
            if side * side != len(flat):
                raise ConfigError(field, f"{len(flat)} entries do not form a square matrix")
            shape = (side, side)
        if shape[0] * shape[1] != len(flat):
            raise ConfigError(field, f"{len(flat)} entries do not fill a {shape[0]}x{shape[1]} matrix")
        a = np.array(flat, dtype=complex).reshape(shape)
    if shape is not None and a.shape != tuple(shape):
        raise ConfigError(field, f"expected shape {tuple(shape)}, got {a.shape}")
    return a


def _real_rows(obj, shape) -> bool:
    # [[a, b], [c, d]] reads as a real 2x2 matrix when a flat list of pairs cannot fit the shape
    if not all(_is_pair(row) for row in obj):
        return False
    if shape is not None:
        return tuple(shape) == (len(obj), 2)
    return len(obj) == 2


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _is_pair(obj) -> bool:
    return isinstance(obj, (list, tuple)) and len(obj) == 2 and all(_is_number(x) for x in obj)


def dumps(obj) -> str:
    # repr-based float output is the shortest exact round trip (at most 17 significant digits)
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a JSON object")
    return data
