"""Frame bundle files and report envelopes.

A bundle is a UTF-8 JSON document::

    {
      "version": 1,
      "dimension": 2,
      "signature": [1, -1],
      "field": "complex",
      "families": {"A": [[1, 1], [0, 1], [1, 0]], "B": [[[0, 1], 0], ...]},
      "operators": {"U": [[1, 0], [0, 0.8]]},      (optional)
      "metadata": {...}                           (optional)
    }

Real scalars are bare numbers, complex scalars ``[re, im]``. Reports are
wrapped in an envelope carrying the tool version, command, a SHA-256 digest
of the canonical bundle, the seed and the wall time; floats in reports are
written with 12 significant digits.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BundleError
from .frames import FrameFamily
from .krein import KreinSpace

__all__ = [
    "FrameBundle",
    "ReportEnvelope",
    "parse_bundle",
    "load_bundle",
    "bundle_to_dict",
    "dump_bundle",
    "canonical_json",
    "digest",
    "to_jsonable",
    "SIG_DIGITS",
]

BUNDLE_VERSION = 1
SIG_DIGITS = 12


@dataclass
class FrameBundle:
    space: KreinSpace
    families: dict
    operators: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    version: int = BUNDLE_VERSION

    def family(self, name: str) -> FrameFamily:
        try:
            return self.families[name]
        except KeyError:
            raise BundleError(f"$.families: no family named {name!r} (have {sorted(self.families)})") from None

    def operator(self, name: str) -> np.ndarray:
        try:
            return self.operators[name]
        except KeyError:
            raise BundleError(f"$.operators: no operator named {name!r} (have {sorted(self.operators)})") from None


def _scalar(x, where: str, field_: str):
    if isinstance(x, bool):
        raise BundleError(f"{where}: expected a number, got {x!r}")
    if isinstance(x, (int, float)):
        return complex(x) if field_ == "complex" else float(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        if field_ == "real":
            if x[1] != 0:
                raise BundleError(f"{where}: complex scalar in a real bundle")
            return float(x[0])
        return complex(x[0], x[1])
    raise BundleError(f"{where}: expected a number or [re, im], got {x!r}")


def _vectors(rows, where: str, dim: int, field_: str) -> np.ndarray:
    if not isinstance(rows, list):
        raise BundleError(f"{where}: expected a list of vectors")
    out = []
    for i, v in enumerate(rows):
        if not isinstance(v, list) or len(v) != dim:
            raise BundleError(f"{where}[{i}]: expected a vector of length {dim}")
        out.append([_scalar(x, f"{where}[{i}][{j}]", field_) for j, x in enumerate(v)])
    dtype = complex if field_ == "complex" else float
    return np.array(out, dtype=dtype).reshape(len(out), dim)


def parse_bundle(doc: dict) -> FrameBundle:
    """Validate a decoded bundle document. Errors name the offending JSON path."""
    if not isinstance(doc, dict):
        raise BundleError("$: expected an object")
    for key in ("version", "dimension", "signature", "field", "families"):
        if key not in doc:
            raise BundleError(f"$.{key}: missing")
    if doc["version"] != BUNDLE_VERSION:
        raise BundleError(f"$.version: unsupported version {doc['version']!r}")
    dim = doc["dimension"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise BundleError("$.dimension: expected a positive integer")
    sig = doc["signature"]
    if not isinstance(sig, list) or len(sig) != dim:
        raise BundleError(f"$.signature: expected {dim} entries")
    for i, s in enumerate(sig):
        if s not in (1, -1) or isinstance(s, bool):
            raise BundleError(f"$.signature[{i}]: expected +1 or -1, got {s!r}")
    fld = doc["field"]
    if fld not in ("real", "complex"):
        raise BundleError(f"$.field: expected 'real' or 'complex', got {fld!r}")
    space = KreinSpace(tuple(sig), fld)
    fams = doc["families"]
    if not isinstance(fams, dict) or not fams:
        raise BundleError("$.families: expected a non-empty object")
    families = {
        name: FrameFamily(space, _vectors(rows, f"$.families.{name}", dim, fld)) for name, rows in fams.items()
    }
    ops = doc.get("operators", {})
    if not isinstance(ops, dict):
        raise BundleError("$.operators: expected an object")
    operators = {}
    for name, rows in ops.items():
        M = _vectors(rows, f"$.operators.{name}", dim, "complex")
        if M.shape[0] != dim:
            raise BundleError(f"$.operators.{name}: expected {dim} rows")
        operators[name] = M.real if not np.any(M.imag) else M
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise BundleError("$.metadata: expected an object")
    return FrameBundle(space, families, operators, meta)


def load_bundle(path) -> FrameBundle:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise BundleError(f"{path}: {exc.strerror}") from None
    return parse_bundle(doc)


def _enc_scalar(x):
    x = complex(x)
    if x.imag == 0:
        r = x.real
        return int(r) if r.is_integer() and abs(r) < 2**53 else r
    return [x.real, x.imag]


def _enc_rows(M) -> list:
    return [[_enc_scalar(x) for x in row] for row in np.asarray(M)]


def bundle_to_dict(b: FrameBundle) -> dict:
    """Canonical document for ``b`` (inverse of :func:`parse_bundle`)."""
    d = {
        "version": b.version,
        "dimension": b.space.dim,
        "signature": list(b.space.signature),
        "field": b.space.field,
        "families": {k: _enc_rows(F.vectors) for k, F in b.families.items()},
    }
    if b.operators:
        d["operators"] = {k: _enc_rows(U) for k, U in b.operators.items()}
    if b.metadata:
        d["metadata"] = b.metadata
    return d


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def dump_bundle(b: FrameBundle, path=None) -> str:
    text = json.dumps(bundle_to_dict(b), indent=1, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def digest(b: FrameBundle) -> str:
    return "sha256:" + hashlib.sha256(canonical_json(bundle_to_dict(b)).encode("utf-8")).hexdigest()


def _round(x: float) -> float:
    if not math.isfinite(x):
        return None
    return float(f"{x:.{SIG_DIGITS}g}")


def to_jsonable(obj):
    """Recursively convert reports to JSON-safe values with 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return _round(z.real) if z.imag == 0 else [_round(z.real), _round(z.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class ReportEnvelope:
    tool_version: str
    command: str
    input_digest: str | None
    seed: int | None
    payload: dict
    wall_time: float | None = None

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {
            "tool": "kreinweave",
            "tool_version": self.tool_version,
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "payload": to_jsonable(self.payload),
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=1, sort_keys=True) + "\n"
