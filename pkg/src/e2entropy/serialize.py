"""Complex arrays as nested ``[re, im]`` pairs, and atomic file writes."""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

SCHEMA_VERSION = 1


def to_pairs(a) -> list:
    """Nested lists with every complex entry replaced by ``[re, im]``."""
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def from_pairs(data) -> np.ndarray:
    """Inverse of :func:`to_pairs`; raises ``ValueError`` on ragged input."""
    try:
        arr = np.array(data, dtype=float)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"ragged or non-numeric array: {exc}") from None
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def dumps(obj) -> str:
    # float repr round-trips exactly, so reports re-parse bit for bit
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_atomic(path, text: str) -> None:
    """Write ``text`` to a temporary file beside ``path``, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
