"""Deterministic JSON files holding named tensors, exact or floating point.

One file carries a header (format version, complex dimension, scalar mode)
and a payload of named dense tensors stored flat in row-major index order
against the basis x1..xn, y1..yn.  Rational entries serialize as "p/q"
strings and parse back exactly; float entries rely on JSON shortest
round-trip formatting.  Output bytes are stable: keys are sorted and the
formatting is fixed.
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass
from fractions import Fraction
from math import prod

import numpy as np

__all__ = [
    "FORMAT_NAME",
    "FORMAT_VERSION",
    "TensorFile",
    "TensorFileError",
    "dumps",
    "loads",
    "read_tensor_file",
    "write_tensor_file",
]

FORMAT_NAME = "hermcurv-tensors"
FORMAT_VERSION = 1

_SCALAR_MODES = ("rational", "float")
_BASIS_ORDER = "x1..xn,y1..yn"
_INDEX_ORDER = "row-major"


class TensorFileError(RuntimeError):
    """Malformed document, shape/payload mismatch, or unparsable entry."""


def _coerce_rational_entry(x, name: str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise TensorFileError(f"tensor {name!r}: bad rational {x!r}") from exc
    raise TensorFileError(
        f"tensor {name!r}: entry {x!r} is not exact; use float mode for floats"
    )


def _coerce_tensor(name: str, arr, scalar: str) -> np.ndarray:
    if scalar == "float":
        try:
            out = np.asarray(arr, dtype=float)
        except (TypeError, ValueError) as exc:
            raise TensorFileError(f"tensor {name!r}: not a float array") from exc
        return out
    raw = np.asarray(arr, dtype=object)
    out = np.empty(raw.shape, dtype=object)
    for idx, x in np.ndenumerate(raw):
        out[idx] = _coerce_rational_entry(x, name)
    return out


@dataclass(frozen=True, eq=False)
class TensorFile:
    """Named tensors sharing one scalar mode on one model size."""

    n: int
    scalar: str
    tensors: dict

    @classmethod
    def from_arrays(cls, n: int, scalar: str, tensors: dict) -> "TensorFile":
        if scalar not in _SCALAR_MODES:
            raise TensorFileError(f"scalar mode must be one of {_SCALAR_MODES}")
        if not isinstance(n, int) or n < 1:
            raise TensorFileError("n must be a positive integer")
        clean = {}
        for name, arr in tensors.items():
            if not isinstance(name, str) or not name:
                raise TensorFileError("tensor names must be nonempty strings")
            clean[name] = _coerce_tensor(name, arr, scalar)
        return cls(n=n, scalar=scalar, tensors=clean)

    def tensor(self, name: str) -> np.ndarray:
        if name not in self.tensors:
            have = ", ".join(sorted(self.tensors)) or "none"
            raise TensorFileError(f"file has no tensor {name!r} (has: {have})")
        return self.tensors[name]

    def names(self) -> list:
        return sorted(self.tensors)


def _entry_to_json(x, scalar: str):
    if scalar == "rational":
        return str(x)
    return float(x)


def dumps(tf: TensorFile) -> str:
    """Serialize to a byte-stable JSON string (sorted keys, fixed layout)."""
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "n": tf.n,
        "scalar": tf.scalar,
        "basis_order": _BASIS_ORDER,
        "index_order": _INDEX_ORDER,
        "tensors": {
            name: {
                "shape": list(arr.shape),
                "data": [_entry_to_json(x, tf.scalar) for x in arr.flat],
            }
            for name, arr in tf.tensors.items()
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> TensorFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorFileError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise TensorFileError("top level must be an object")
    if doc.get("format") != FORMAT_NAME:
        raise TensorFileError(f"format must be {FORMAT_NAME!r}")
    if doc.get("version") != FORMAT_VERSION:
        raise TensorFileError(f"unsupported format version {doc.get('version')!r}")
    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise TensorFileError("header field n must be a positive integer")
    scalar = doc.get("scalar")
    if scalar not in _SCALAR_MODES:
        raise TensorFileError(f"scalar mode must be one of {_SCALAR_MODES}")
    raw = doc.get("tensors")
    if not isinstance(raw, dict):
        raise TensorFileError("tensors must be an object")
    tensors = {}
    for name, body in raw.items():
        if not isinstance(body, dict):
            raise TensorFileError(f"tensor {name!r}: entry must be an object")
        shape = body.get("shape")
        data = body.get("data")
        if (not isinstance(shape, list)
                or not all(isinstance(s, int) and s >= 0 for s in shape)):
            raise TensorFileError(f"tensor {name!r}: bad shape {shape!r}")
        if not isinstance(data, list):
            raise TensorFileError(f"tensor {name!r}: data must be a list")
        if len(data) != prod(shape):
            raise TensorFileError(
                f"tensor {name!r}: shape {shape} needs {prod(shape)} entries,"
                f" got {len(data)}"
            )
        if scalar == "rational":
            flat = []
            for x in data:
                if not isinstance(x, str):
                    raise TensorFileError(
                        f"tensor {name!r}: rational entries must be strings"
                    )
                flat.append(_coerce_rational_entry(x, name))
            arr = np.empty(len(flat), dtype=object)
            arr[:] = flat
        else:
            for x in data:
                if isinstance(x, bool) or not isinstance(x, numbers.Real):
                    raise TensorFileError(
                        f"tensor {name!r}: float entries must be numbers"
                    )
            arr = np.asarray(data, dtype=float)
        tensors[name] = arr.reshape(tuple(shape))
    return TensorFile(n=n, scalar=scalar, tensors=tensors)


def write_tensor_file(path, tf: TensorFile) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps(tf))


def read_tensor_file(path) -> TensorFile:
    with open(path, "r", encoding="ascii") as fh:
        return loads(fh.read())
