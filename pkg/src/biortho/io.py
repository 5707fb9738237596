"""JSON matrix/state files and deterministic command reports.

Complex numbers are always written as ``[re, im]`` pairs. Floats use
Python's shortest round-trip representation, so reading back a written file
reproduces every entry bit for bit.
"""

import csv
import hashlib
import io as _io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import ShapeMismatch

__all__ = [
    "FileFormatError",
    "MatrixFile",
    "StateFile",
    "read_matrix",
    "write_matrix",
    "read_state",
    "write_state",
    "to_jsonable",
    "Report",
    "inputs_digest",
]


class FileFormatError(ValueError):
    """Malformed matrix or state file."""


def _pair(z, where):
    if not (isinstance(z, (list, tuple)) and len(z) == 2):
        raise FileFormatError(f"{where}: expected [re, im], got {z!r}")
    re, im = z
    if isinstance(re, bool) or isinstance(im, bool) or not all(isinstance(x, (int, float)) for x in z):
        raise FileFormatError(f"{where}: entries must be numbers")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise FileFormatError(f"{where}: non-finite entry")
    return complex(re, im)


def _encode(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


@dataclass(frozen=True)
class MatrixFile:
    matrix: np.ndarray
    label: Optional[str] = None

    @property
    def dim(self):
        return self.matrix.shape[0]

    def to_dict(self):
        out = {"dim": int(self.dim), "matrix": [[_encode(z) for z in row] for row in self.matrix]}
        if self.label is not None:
            out["label"] = self.label
        return out

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "dim" not in d or "matrix" not in d:
            raise FileFormatError("matrix file needs 'dim' and 'matrix'")
        n = d["dim"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise FileFormatError(f"invalid dim {n!r}")
        rows = d["matrix"]
        if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
            raise FileFormatError(f"matrix shape does not match dim={n}")
        m = np.array([[_pair(z, f"matrix[{i}][{j}]") for j, z in enumerate(r)] for i, r in enumerate(rows)])
        label = d.get("label")
        if label is not None and not isinstance(label, str):
            raise FileFormatError("label must be a string")
        return cls(m.astype(complex), label)


@dataclass(frozen=True)
class StateFile:
    coeffs: np.ndarray
    basis: str = "phi"

    @property
    def dim(self):
        return self.coeffs.shape[0]

    def to_dict(self):
        return {"dim": int(self.dim), "coeffs": [_encode(z) for z in self.coeffs], "basis": self.basis}

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "dim" not in d or "coeffs" not in d:
            raise FileFormatError("state file needs 'dim' and 'coeffs'")
        n = d["dim"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise FileFormatError(f"invalid dim {n!r}")
        c = d["coeffs"]
        if not isinstance(c, list) or len(c) != n:
            raise FileFormatError(f"coeffs length does not match dim={n}")
        basis = d.get("basis", "phi")
        if basis not in ("phi", "ambient"):
            raise FileFormatError(f"basis must be 'phi' or 'ambient', got {basis!r}")
        return cls(np.array([_pair(z, f"coeffs[{i}]") for i, z in enumerate(c)], dtype=complex), basis)


def _load(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
        return raw, json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from exc


def read_matrix(path, with_bytes=False):
    raw, d = _load(path)
    mf = MatrixFile.from_dict(d)
    return (mf, raw) if with_bytes else mf


def write_matrix(path, matrix, label=None):
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"matrix must be square, got shape {m.shape}")
    with open(path, "w") as fh:
        json.dump(MatrixFile(m, label).to_dict(), fh)


def read_state(path, with_bytes=False):
    raw, d = _load(path)
    sf = StateFile.from_dict(d)
    return (sf, raw) if with_bytes else sf


def write_state(path, coeffs, basis="phi"):
    with open(path, "w") as fh:
        json.dump(StateFile(np.asarray(coeffs, dtype=complex).ravel(), basis).to_dict(), fh)


def _real(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def to_jsonable(obj):
    """Convert numpy values to JSON types: complex -> [re, im], non-finite -> string."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_real(obj.real), _real(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _real(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def inputs_digest(chunks):
    h = hashlib.sha256()
    for c in chunks:
        b = c if isinstance(c, bytes) else str(c).encode()
        h.update(len(b).to_bytes(8, "big"))
        h.update(b)
    return h.hexdigest()


def _flatten(prefix, v, rows):
    if isinstance(v, dict):
        for k, x in v.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), x, rows)
    elif isinstance(v, (list, tuple, np.ndarray)):
        for i, x in enumerate(v):
            _flatten(f"{prefix}[{i}]", x, rows)
    elif isinstance(v, (complex, np.complexfloating)):
        rows.append((prefix, *to_jsonable(v)))
    else:
        rows.append((prefix, to_jsonable(v), ""))


@dataclass
class Report:
    command: list
    digest: str
    payload: dict
    version: str
    tolerances: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "command": list(self.command),
            "inputs_digest": self.digest,
            "version": self.version,
            "tolerances": to_jsonable(self.tolerances),
            "payload": to_jsonable(self.payload),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_csv(self):
        """One ``key,re,im`` row per scalar; real values leave ``im`` empty."""
        rows = []
        _flatten("", self.payload, rows)
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "re", "im"])
        for key, re, im in rows:
            w.writerow([key, re, im])
        return buf.getvalue()

    def render(self, fmt="json"):
        return self.to_csv() if fmt == "csv" else self.to_json()
