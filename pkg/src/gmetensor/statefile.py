"""JSON state files.

Schema (field names are fixed)::

    {"kind": "pure" | "density", "parties": n, "local_dim": d,
     "data": [[re, im], ...]            # pure: d^n amplitudes
           | [[[re, im], ...], ...]}    # density: d^n rows of d^n entries

Composite index convention: party 1 is the most significant digit.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .errors import GMEError, InvalidDimension
from .states import DensityMatrix, PureState, density_matrix, pure_state


class StateFileError(GMEError):
    pass


def _pairs(a: np.ndarray) -> list:
    return np.stack([a.real, a.imag], axis=-1).tolist()


def to_dict(state: Union[PureState, DensityMatrix]) -> dict:
    if isinstance(state, PureState):
        kind, data = "pure", _pairs(state.amplitudes)
    elif isinstance(state, DensityMatrix):
        kind, data = "density", _pairs(state.mat)
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    return {"kind": kind, "parties": state.n, "local_dim": state.d, "data": data}


def from_dict(payload: dict) -> Union[PureState, DensityMatrix]:
    try:
        kind = payload["kind"]
        n = int(payload["parties"])
        d = int(payload["local_dim"])
        raw = np.asarray(payload["data"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"malformed state file: {exc}") from exc
    if raw.shape[-1:] != (2,):
        raise StateFileError("entries must be [re, im] pairs")
    values = raw[..., 0] + 1j * raw[..., 1]
    dim = d**n
    if kind == "pure":
        if values.shape != (dim,):
            raise InvalidDimension(f"pure state needs {dim} amplitudes, got shape {values.shape}")
        return pure_state(values, n, d)
    if kind == "density":
        if values.shape != (dim, dim):
            raise InvalidDimension(f"density matrix needs shape ({dim}, {dim}), got {values.shape}")
        return density_matrix(values, n, d)
    raise StateFileError(f"unknown kind {kind!r}; expected 'pure' or 'density'")


def write_state(state, path) -> None:
    Path(path).write_text(json.dumps(to_dict(state)))


def read_state(path):
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise StateFileError("state file must hold a JSON object")
    return from_dict(payload)
