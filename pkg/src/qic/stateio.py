"""Reading and writing the plain-text state file.

A state file has two fields::

    dims: [2, 2]
    entries: [[0.7071, 0], [0, 0], [0, 0], [0.7071, 0]]

``entries`` lists ``[re, im]`` pairs in row-major order: ``D`` of them for
a state vector and ``D*D`` for a density matrix. Nesting the pairs in rows
(one row for a vector) is also accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml


@dataclass(frozen=True)
class StateFile:
    dims: tuple[int, ...]
    data: np.ndarray

    @property
    def is_vector(self) -> bool:
        return self.data.ndim == 1

    def density(self) -> np.ndarray:
        if self.is_vector:
            return np.outer(self.data, self.data.conj())
        return self.data


def _pairs(entries) -> np.ndarray:
    arr = np.asarray(entries, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("state entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def parse_state(text: str) -> StateFile:
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict) or "dims" not in doc or "entries" not in doc:
        raise ValueError("state file needs 'dims' and 'entries' fields")
    dims = tuple(int(d) for d in doc["dims"])
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"invalid dims {dims}")
    size = int(np.prod(dims))
    vals = _pairs(doc["entries"]).reshape(-1)
    if vals.size == size:
        return StateFile(dims, vals)
    if vals.size == size * size:
        return StateFile(dims, vals.reshape(size, size))
    raise ValueError(f"{vals.size} entries fit neither a vector nor a matrix on dims {list(dims)}")


def read_state(path) -> StateFile:
    with open(path) as fh:
        return parse_state(fh.read())


def format_state(dims, data) -> str:
    data = np.asarray(data, dtype=complex).reshape(-1)
    pairs = ", ".join(f"[{float(z.real)!r}, {float(z.imag)!r}]" for z in data)
    return f"dims: [{', '.join(str(int(d)) for d in dims)}]\nentries: [{pairs}]\n"


def write_state(path, dims, data) -> None:
    with open(path, "w") as fh:
        fh.write(format_state(dims, data))
