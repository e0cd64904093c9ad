"""JSON channel and state files.

Channel file::

    {"dim_in": 2, "dim_out": 2,
     "kraus": [ [[[re, im], [re, im]], [[re, im], [re, im]]], ... ]}

State file::

    {"dim": 4, "matrix": [[[re, im], ...], ...], "shape": {"dim_a": 2, "dim_b": 2}}

Matrices are row-major; ``shape`` is optional. Bipartite indices follow
``a * dim_b + b``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import BipartiteShape, Channel
from .errors import DomainError
from .serialize import dumps, from_pairs, to_pairs, write_atomic
from .spectra import as_density


class FormatError(ValueError):
    """Unreadable or structurally invalid input file."""


def _load(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise FormatError(f"{path}:1:1: top level must be a JSON object")
    return data


def _int_field(data, key, path) -> int:
    value = data.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise FormatError(f"{path}: field {key!r} must be a positive integer")
    return value


def _matrix(data, path, field, shape) -> np.ndarray:
    try:
        m = from_pairs(data)
    except ValueError as exc:
        raise FormatError(f"{path}: field {field!r}: {exc}") from None
    if m.shape != shape:
        raise FormatError(f"{path}: field {field!r} has shape {m.shape}, expected {shape}")
    return m


def parse_channel(data: dict, path="<channel>") -> Channel:
    d_in = _int_field(data, "dim_in", path)
    d_out = _int_field(data, "dim_out", path)
    kraus = data.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise FormatError(f"{path}: field 'kraus' must be a non-empty list of matrices")
    ops = [_matrix(k, path, f"kraus[{i}]", (d_out, d_in)) for i, k in enumerate(kraus)]
    try:
        return Channel(np.stack(ops))
    except DomainError as exc:
        raise FormatError(f"{path}: {exc}") from None


def parse_state(data: dict, path="<state>"):
    """Return ``(rho, shape)``; ``shape`` is None when the file has none."""
    dim = _int_field(data, "dim", path)
    rho = _matrix(data.get("matrix"), path, "matrix", (dim, dim))
    try:
        rho = as_density(rho)
    except DomainError as exc:
        raise FormatError(f"{path}: {exc}") from None
    shape = None
    if data.get("shape") is not None:
        sh = data["shape"]
        if not isinstance(sh, dict):
            raise FormatError(f"{path}: field 'shape' must be an object")
        shape = BipartiteShape(_int_field(sh, "dim_a", path), _int_field(sh, "dim_b", path))
        if shape.total != dim:
            raise FormatError(f"{path}: shape {shape.dim_a}x{shape.dim_b} does not match dim {dim}")
    return rho, shape


def read_channel(path) -> Channel:
    return parse_channel(_load(path), path)


def read_state(path):
    return parse_state(_load(path), path)


def channel_to_dict(phi: Channel) -> dict:
    return {"dim_in": phi.dim_in, "dim_out": phi.dim_out, "kraus": to_pairs(phi.kraus)}


def state_to_dict(rho, shape: BipartiteShape | None = None) -> dict:
    rho = np.asarray(rho, dtype=complex)
    out = {"dim": rho.shape[0], "matrix": to_pairs(rho)}
    if shape is not None:
        out["shape"] = {"dim_a": shape.dim_a, "dim_b": shape.dim_b}
    return out


def write_channel(path, phi: Channel) -> None:
    write_atomic(path, dumps(channel_to_dict(phi)))


def write_state(path, rho, shape: BipartiteShape | None = None) -> None:
    write_atomic(path, dumps(state_to_dict(rho, shape)))
