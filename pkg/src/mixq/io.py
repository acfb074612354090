"""JSON state files: ``{schema_version, n_qubits, entries, metadata}``.

``entries`` lists the 4^n matrix elements in row-major order as
``{"re": float, "im": float}`` objects. Python's shortest round-trip float
repr makes write-then-read bitwise exact.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import DensityMatrix, Operator, density_violations, qubits_for_dim
from .errors import ArgumentError, StateFileError

SCHEMA_VERSION = 1


def matrix_to_entries(mat: np.ndarray) -> list[dict]:
    return [{"re": float(z.real), "im": float(z.imag)} for z in np.asarray(mat).ravel()]


def state_document(rho: DensityMatrix | Operator, metadata: dict | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n_qubits": rho.n_qubits,
        "entries": matrix_to_entries(rho.data),
        "metadata": dict(metadata or {}),
    }


def write_state(path, rho: DensityMatrix | Operator, metadata: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(state_document(rho, metadata)))
    return path


def _parse_matrix(doc) -> tuple[np.ndarray, dict]:
    if not isinstance(doc, dict):
        raise StateFileError("state file must contain a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise StateFileError(
            f"unsupported schema_version {doc.get('schema_version')!r} (expected {SCHEMA_VERSION})"
        )
    n = doc.get("n_qubits")
    entries = doc.get("entries")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1 or not isinstance(entries, list):
        raise StateFileError("state file needs integer n_qubits >= 1 and an entries list")
    if len(entries) != 4**n:
        raise StateFileError(f"expected {4**n} entries for {n} qubits, found {len(entries)}")
    try:
        flat = np.array([complex(e["re"], e["im"]) for e in entries], dtype=np.complex128)
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"malformed entry: {exc}") from None
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise StateFileError("metadata must be an object")
    return flat.reshape(2**n, 2**n), metadata


def load_document(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path} is not valid JSON: {exc}") from None


def read_state(path) -> tuple[DensityMatrix, dict]:
    """Load and validate a density matrix; invariant failures are named."""
    mat, metadata = _parse_matrix(load_document(path))
    bad = density_violations(mat)
    if bad:
        raise StateFileError(f"{path}: state violates invariant(s): {', '.join(bad)}")
    try:
        return DensityMatrix(mat), metadata
    except ArgumentError as exc:
        raise StateFileError(f"{path}: {exc}") from None


def read_operator(path) -> Operator:
    mat, _ = _parse_matrix(load_document(path))
    qubits_for_dim(mat.shape[0])
    return Operator(mat)
