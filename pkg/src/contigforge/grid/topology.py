"""Square virtual processor grid and the band layouts built on it."""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ..core.errors import NonSquareGrid


@dataclass(frozen=True)
class GridTopology:
    """A sqrt(P) x sqrt(P) arrangement of virtual ranks, row-major."""

    p_total: int
    side: int
    coords: Dict[int, Tuple[int, int]] = field(repr=False)

    def rank_of(self, row: int, col: int) -> int:
        """Rank at grid position (row, col)."""
        return row * self.side + col

    def coords_of(self, rank: int) -> Tuple[int, int]:
        """Grid position of a rank."""
        return self.coords[rank]

    def row_ranks(self, row: int) -> List[int]:
        """Ranks of one grid row, ordered by column."""
        return [self.rank_of(row, col) for col in range(self.side)]

    def col_ranks(self, col: int) -> List[int]:
        """Ranks of one grid column, ordered by row."""
        return [self.rank_of(row, col) for row in range(self.side)]

    def transpose_rank(self, rank: int) -> int:
        """Rank (j, i) for a rank at (i, j)."""
        row, col = self.coords[rank]
        return self.rank_of(col, row)

    @property
    def ranks(self) -> range:
        return range(self.p_total)


def grid_create(p_total: int) -> GridTopology:
    """Build the topology for p_total ranks; p_total must be a perfect square."""
    if p_total < 1:
        raise NonSquareGrid(p_total)
    side = math.isqrt(p_total)
    if side * side != p_total:
        raise NonSquareGrid(p_total)

    coords = {rank: divmod(rank, side) for rank in range(p_total)}
    return GridTopology(p_total=p_total, side=side, coords=coords)


def band_bounds(n: int, parts: int) -> np.ndarray:
    """Boundaries of `parts` contiguous bands over [0, n); sizes differ by at most one."""
    base, extra = divmod(n, parts)
    sizes = np.full(parts, base, dtype=np.int64)
    sizes[:extra] += 1
    return np.concatenate(([0], np.cumsum(sizes))).astype(np.int64)


def vector_bounds(n: int, topology: GridTopology) -> np.ndarray:
    """Ownership boundaries for a vector of length n distributed over every rank.

    Rank (i, j) owns the j-th piece of row band i, so gathering a grid row
    reassembles exactly the row band i of a matrix with the same n.
    """
    rows = band_bounds(n, topology.side)
    bounds = [0]
    for i in range(topology.side):
        pieces = band_bounds(int(rows[i + 1] - rows[i]), topology.side)
        bounds.extend(int(rows[i] + edge) for edge in pieces[1:])
    return np.asarray(bounds, dtype=np.int64)


def owner_of(bounds: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Owning rank of each index under the given boundaries."""
    return np.searchsorted(bounds, indices, side="right") - 1
