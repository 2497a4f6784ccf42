"""Uniform grids on the probability simplex.

The first dim-1 coordinates run over multiples of the step; the last
coordinate closes the sum to one.  Points with any coordinate below the
floor are dropped.  Points are emitted in lexicographic order of the free
coordinates, which fixes scan output ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_STEP = 0.005
DEFAULT_FLOOR = 0.0025


@dataclass(frozen=True)
class SimplexGrid:
    dim: int
    step: float
    floor: float
    points: tuple[tuple[float, ...], ...]

    def __len__(self) -> int:
        return len(self.points)


def _fill(prefix: list[float], remaining: float, levels: int, step: float,
          floor: float, out: list[tuple[float, ...]]) -> None:
    if levels == 0:
        if remaining >= floor - 1e-12:
            out.append(tuple(prefix) + (remaining,))
        return
    n_max = int(np.floor(remaining / step + 1e-9))
    for i in range(n_max + 1):
        value = i * step
        if value < floor - 1e-12:
            continue
        _fill(prefix + [value], remaining - value, levels - 1, step, floor, out)


def simplex_grid(dim: int = 3, step: float = DEFAULT_STEP, floor: float = DEFAULT_FLOOR) -> SimplexGrid:
    if dim < 2:
        raise ValueError(f"simplex dimension must be >= 2, got {dim}")
    if not (0.0 < step < 1.0):
        raise ValueError(f"step must lie in (0, 1), got {step!r}")
    if not (0.0 < floor < 1.0 / dim):
        raise ValueError(f"floor must lie in (0, 1/dim), got {floor!r}")
    points: list[tuple[float, ...]] = []
    _fill([], 1.0, dim - 1, step, floor, points)
    for p in points:
        assert abs(sum(p) - 1.0) <= 1e-12
    return SimplexGrid(dim=dim, step=step, floor=floor, points=tuple(points))
