"""Height-field settling substrate over the bin interior."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from heapseg import _kernels
from heapseg.errors import PlacementError
from heapseg.heapgen.config import BinSpec


@dataclass
class HeightField:
    """Regular grid of surface heights (meters) over the bin interior.

    Cell (j, i) covers [x0 + i*h, x0 + (i+1)*h) x [y0 + j*h, y0 + (j+1)*h).
    Heights start at the bin floor (z = 0) and only ever rise.
    """

    grid: np.ndarray
    cell_size: float
    x0: float
    y0: float

    @classmethod
    def for_bin(cls, bin_spec: BinSpec, cell_size: float) -> "HeightField":
        nx = max(1, math.ceil(bin_spec.width / cell_size - 1e-9))
        ny = max(1, math.ceil(bin_spec.depth / cell_size - 1e-9))
        return cls(
            grid=np.zeros((ny, nx), dtype=np.float64),
            cell_size=cell_size,
            x0=-bin_spec.width / 2.0,
            y0=-bin_spec.depth / 2.0,
        )

    @property
    def x_max(self) -> float:
        return self.x0 + self.grid.shape[1] * self.cell_size

    @property
    def y_max(self) -> float:
        return self.y0 + self.grid.shape[0] * self.cell_size

    def drop(self, corners: np.ndarray) -> float:
        """Drop a triangle soup straight down onto the surface.

        ``corners`` is (T, 3, 3) world-frame geometry at z-offset 0. Returns
        the vertical offset that brings its conservative footprint into
        contact with the surface, and raises that surface by the soup's
        per-cell upper envelope. Non-interpenetration holds by construction:
        the object's lower envelope never dips below any touched cell.
        """
        lower = np.full(self.grid.shape, np.inf)
        upper = np.full(self.grid.shape, -np.inf)
        _kernels.footprint_accumulate(
            lower, upper, corners, self.x0, self.y0, 1.0 / self.cell_size
        )
        mask = np.isfinite(lower)
        if not mask.any():
            raise PlacementError("footprint does not overlap the bin interior")
        z = float((self.grid[mask] - lower[mask]).max())
        np.maximum(self.grid, np.where(mask, upper + z, -np.inf), out=self.grid)
        return z
