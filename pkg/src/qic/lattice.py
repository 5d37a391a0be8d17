"""Chain and rectangular-grid lattices for cluster states.

Sites are numbered from 1 in row-major order, so a chain of ``N`` sites is
the ``1 x N`` grid.
"""

from __future__ import annotations

import re


def parse_shape(shape) -> tuple[int, int]:
    """Normalize ``5``, ``(3, 3)``, ``"chain:5"`` or ``"grid:3x3"`` to ``(rows, cols)``."""
    if isinstance(shape, (int,)) and not isinstance(shape, bool):
        rows, cols = 1, int(shape)
    elif isinstance(shape, str):
        m = re.fullmatch(r"\s*chain:(\d+)\s*", shape)
        g = re.fullmatch(r"\s*grid:(\d+)[xX](\d+)\s*", shape)
        if m:
            rows, cols = 1, int(m.group(1))
        elif g:
            rows, cols = int(g.group(1)), int(g.group(2))
        else:
            raise ValueError(f"unrecognized lattice {shape!r}; use chain:N or grid:RxC")
    else:
        rows, cols = (int(x) for x in shape)
    if rows < 1 or cols < 1:
        raise ValueError(f"invalid lattice size {rows}x{cols}")
    return rows, cols


def n_sites(shape) -> int:
    rows, cols = parse_shape(shape)
    return rows * cols


def site(r: int, c: int, cols: int) -> int:
    """1-based site index of 0-based row ``r`` and column ``c``."""
    return r * cols + c + 1


def coords(a: int, cols: int) -> tuple[int, int]:
    return divmod(a - 1, cols)


def neighbours(shape) -> dict[int, list[int]]:
    """Nearest neighbours of every site, sorted ascending."""
    rows, cols = parse_shape(shape)
    out = {}
    for r in range(rows):
        for c in range(cols):
            nb = []
            for dr, dc in ((-1, 0), (0, -1), (0, 1), (1, 0)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    nb.append(site(rr, cc, cols))
            out[site(r, c, cols)] = sorted(nb)
    return out


def cluster_gate_sequence(shape) -> list[tuple[str, tuple[int, ...]]]:
    """For each site in index order: H on it, then CNOT to each later neighbour."""
    gates = []
    for a, nb in neighbours(shape).items():
        gates.append(("H", (a,)))
        gates.extend(("CNOT", (a, b)) for b in nb if b > a)
    return gates


def checkerboard_colour(a: int, cols: int) -> int:
    """0 or 1 colouring with no two neighbours alike; site 1 gets 0."""
    r, c = coords(a, cols)
    return (r + c) % 2
