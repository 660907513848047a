"""JSON wire formats.

Matrices travel as ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` with
row-major data; frames as ``{"p": p, "q": q, "tol": t}``.  Subspaces use the
matrix format with columns as the basis.  Reports carry the schema tag
``krein-kit/1``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import KreinFrame
from .errors import SchemaError
from .subspaces import Subspace

SCHEMA = "krein-kit/1"

__all__ = [
    "SCHEMA",
    "matrix_to_json",
    "matrix_from_json",
    "frame_to_json",
    "frame_from_json",
    "subspace_to_json",
    "subspace_from_json",
    "load_json",
]


def matrix_to_json(matrix) -> dict:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_json(obj, name: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise SchemaError(f"{name}: expected an object, got {type(obj).__name__}")
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{name}: missing or invalid rows/cols/data: {exc}") from exc
    if rows < 0 or cols < 0:
        raise SchemaError(f"{name}: negative dimensions")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise SchemaError(f"{name}: data must hold rows*cols = {rows * cols} entries")
    flat = np.zeros(rows * cols, dtype=np.complex128)
    for idx, entry in enumerate(data):
        if (not isinstance(entry, (list, tuple))) or len(entry) != 2:
            raise SchemaError(f"{name}: entry {idx} is not a [re, im] pair")
        try:
            flat[idx] = complex(float(entry[0]), float(entry[1]))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{name}: entry {idx} is not numeric: {exc}") from exc
    if flat.size and not np.all(np.isfinite(flat)):
        raise SchemaError(f"{name}: entries must be finite")
    return flat.reshape(rows, cols)


def frame_to_json(frame: KreinFrame) -> dict:
    return {"p": frame.p, "q": frame.q, "tol": frame.tol}


def frame_from_json(obj, name: str = "frame") -> KreinFrame:
    if not isinstance(obj, dict):
        raise SchemaError(f"{name}: expected an object")
    try:
        p, q = int(obj["p"]), int(obj["q"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{name}: missing or invalid p/q: {exc}") from exc
    tol = obj.get("tol", 1e-9)
    try:
        tol = float(tol)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{name}: invalid tol: {exc}") from exc
    if p < 0 or q < 0 or p + q < 1 or not (0.0 < tol < 1.0):
        raise SchemaError(f"{name}: invalid frame parameters p={p}, q={q}, tol={tol}")
    return KreinFrame(p=p, q=q, tol=tol)


def subspace_to_json(space: Subspace) -> dict:
    return matrix_to_json(space.basis)


def subspace_from_json(frame: KreinFrame, obj, name: str = "subspace") -> Subspace:
    m = matrix_from_json(obj, name=name)
    if m.shape[0] != frame.n:
        raise SchemaError(f"{name}: expected {frame.n} rows, got {m.shape[0]}")
    return Subspace.from_span(frame, m)


def load_json(path) -> object:
    """Read a JSON document, mapping IO and parse errors to SchemaError."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON in {path}: {exc}") from exc
