"""Sparse matrices block-distributed over the virtual grid.

Rank (i, j) stores the block formed by row band i and column band j. Block-local
indices are offsets from the band starts.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import DimensionMismatch, MatrixError
from ..grid.codec import pack_arrays, unpack_arrays
from ..grid.collectives import VirtualGrid
from ..grid.topology import band_bounds, owner_of
from ..grid.vector import DistVector
from .local import INDEX, Block, LocalSparse, as_csc, pack_block
from .payloads import PAYLOAD_DTYPES, PayloadKind
from .semiring import Semiring

logger = logging.getLogger(__name__)

Triples = Tuple[np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True)
class DistSparseMatrix:
    grid: VirtualGrid
    n_rows: int
    n_cols: int
    kind: PayloadKind
    blocks: Tuple[Block, ...]
    row_bounds: np.ndarray
    col_bounds: np.ndarray

    @property
    def dtype(self) -> np.dtype:
        return PAYLOAD_DTYPES[self.kind]

    @property
    def nnz(self) -> int:
        return sum(block.nnz for block in self.blocks)

    def block(self, rank: int) -> LocalSparse:
        """CSC view of a rank's block."""
        return as_csc(self.blocks[rank])

    def offsets(self, rank: int) -> Tuple[int, int]:
        """Global (row, col) of the block's local (0, 0)."""
        i, j = self.grid.topology.coords_of(rank)
        return int(self.row_bounds[i]), int(self.col_bounds[j])

    def band_shape(self, rank: int) -> Tuple[int, int]:
        i, j = self.grid.topology.coords_of(rank)
        return (
            int(self.row_bounds[i + 1] - self.row_bounds[i]),
            int(self.col_bounds[j + 1] - self.col_bounds[j]),
        )

    @classmethod
    def empty(
        cls, grid: VirtualGrid, n_rows: int, n_cols: int, kind: PayloadKind
    ) -> "DistSparseMatrix":
        return cls.from_triples(
            grid, n_rows, n_cols, kind, np.zeros(0), np.zeros(0), np.zeros(0, PAYLOAD_DTYPES[kind])
        )

    @classmethod
    def from_blocks(
        cls,
        grid: VirtualGrid,
        n_rows: int,
        n_cols: int,
        kind: PayloadKind,
        blocks: Sequence[LocalSparse],
    ) -> "DistSparseMatrix":
        if len(blocks) != grid.p_total:
            raise MatrixError(f"expected {grid.p_total} blocks, got {len(blocks)}")
        return cls(
            grid=grid,
            n_rows=n_rows,
            n_cols=n_cols,
            kind=kind,
            blocks=tuple(pack_block(block) for block in blocks),
            row_bounds=band_bounds(n_rows, grid.side),
            col_bounds=band_bounds(n_cols, grid.side),
        )

    @classmethod
    def from_triples(
        cls,
        grid: VirtualGrid,
        n_rows: int,
        n_cols: int,
        kind: PayloadKind,
        rows: np.ndarray,
        cols: np.ndarray,
        values: np.ndarray,
        semiring: Optional[Semiring] = None,
    ) -> "DistSparseMatrix":
        """Place globally known triples directly into their blocks (input loading)."""
        rows = np.asarray(rows, dtype=INDEX)
        cols = np.asarray(cols, dtype=INDEX)
        values = np.asarray(values, dtype=PAYLOAD_DTYPES[kind])
        if len(rows) and (rows.min() < 0 or rows.max() >= n_rows):
            raise MatrixError("row index out of range")
        if len(cols) and (cols.min() < 0 or cols.max() >= n_cols):
            raise MatrixError("column index out of range")

        row_bounds = band_bounds(n_rows, grid.side)
        col_bounds = band_bounds(n_cols, grid.side)
        owners = _block_owner(grid, row_bounds, col_bounds, rows, cols)
        blocks = []
        for rank in grid.topology.ranks:
            i, j = grid.topology.coords_of(rank)
            mine = owners == rank
            blocks.append(
                LocalSparse.from_triples(
                    int(row_bounds[i + 1] - row_bounds[i]),
                    int(col_bounds[j + 1] - col_bounds[j]),
                    rows[mine] - row_bounds[i],
                    cols[mine] - col_bounds[j],
                    values[mine],
                    semiring,
                )
            )
        return cls.from_blocks(grid, n_rows, n_cols, kind, blocks)

    @classmethod
    def from_rank_triples(
        cls,
        grid: VirtualGrid,
        n_rows: int,
        n_cols: int,
        kind: PayloadKind,
        per_rank: Sequence[Triples],
        semiring: Optional[Semiring] = None,
    ) -> "DistSparseMatrix":
        """Route triples generated on arbitrary ranks to their block owners (alltoall)."""
        dtype = PAYLOAD_DTYPES[kind]
        row_bounds = band_bounds(n_rows, grid.side)
        col_bounds = band_bounds(n_cols, grid.side)

        outboxes: List[Dict[int, bytes]] = []
        for rank in grid.topology.ranks:
            rows, cols, values = per_rank[rank]
            rows = np.asarray(rows, dtype=INDEX)
            cols = np.asarray(cols, dtype=INDEX)
            values = np.asarray(values, dtype=dtype)
            owners = _block_owner(grid, row_bounds, col_bounds, rows, cols)
            outboxes.append(
                {
                    int(dst): pack_arrays(
                        rows[owners == dst], cols[owners == dst], values[owners == dst]
                    )
                    for dst in np.unique(owners)
                }
            )
        inboxes = grid.alltoall(outboxes)

        blocks = []
        for rank in grid.topology.ranks:
            i, j = grid.topology.coords_of(rank)
            parts = [
                unpack_arrays(inboxes[rank][src], [INDEX, INDEX, dtype])
                for src in sorted(inboxes[rank])
            ]
            rows = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, dtype=INDEX)
            cols = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0, dtype=INDEX)
            values = np.concatenate([p[2] for p in parts]) if parts else np.zeros(0, dtype=dtype)
            blocks.append(
                LocalSparse.from_triples(
                    int(row_bounds[i + 1] - row_bounds[i]),
                    int(col_bounds[j + 1] - col_bounds[j]),
                    rows - row_bounds[i],
                    cols - col_bounds[j],
                    values,
                    semiring,
                )
            )
        return cls.from_blocks(grid, n_rows, n_cols, kind, blocks)

    def with_blocks(
        self, blocks: Sequence[LocalSparse], kind: Optional[PayloadKind] = None
    ) -> "DistSparseMatrix":
        return replace(
            self,
            kind=kind or self.kind,
            blocks=tuple(pack_block(block) for block in blocks),
        )

    def map_blocks(
        self,
        fn: Callable[..., LocalSparse],
        *per_rank_args: Sequence,
        kind: Optional[PayloadKind] = None,
    ) -> "DistSparseMatrix":
        """Apply a rank-local block transformation fn(rank, block, *args)."""
        ranks = list(self.grid.topology.ranks)
        blocks = [self.block(rank) for rank in ranks]
        return self.with_blocks(self.grid.map_ranks(fn, ranks, blocks, *per_rank_args), kind)

    def global_triples(self, rank: int) -> Triples:
        """Triples of one block in global coordinates."""
        rows, cols, values = self.block(rank).triples()
        row0, col0 = self.offsets(rank)
        return rows + row0, cols + col0, values

    def triples(self) -> Triples:
        """All nonzeros sorted by (row, col); an inspection view with no ledger traffic."""
        parts = [self.global_triples(rank) for rank in self.grid.topology.ranks]
        rows = np.concatenate([p[0] for p in parts])
        cols = np.concatenate([p[1] for p in parts])
        values = np.concatenate([p[2] for p in parts])
        order = np.lexsort((cols, rows))
        return rows[order], cols[order], values[order]

    def edges(self) -> Dict[Tuple[int, int], tuple]:
        """Nonzeros as {(row, col): payload tuple}."""
        rows, cols, values = self.triples()
        return {(int(r), int(c)): v.item() for r, c, v in zip(rows, cols, values)}

    def edge_set(self) -> set:
        rows, cols, _ = self.triples()
        return set(zip(rows.tolist(), cols.tolist()))

    def validate(self) -> None:
        """Every block canonical and sized to its bands."""
        for rank in self.grid.topology.ranks:
            block = self.block(rank)
            if (block.n_rows, block.n_cols) != self.band_shape(rank):
                raise MatrixError(f"block {rank} has shape {(block.n_rows, block.n_cols)}")
            if block.dtype != self.dtype:
                raise MatrixError(f"block {rank} carries {block.dtype}, expected {self.dtype}")
            block.validate()

    def is_structurally_symmetric(self) -> bool:
        edges = self.edge_set()
        return all((v, u) in edges for u, v in edges)

    def expand(self, vector: DistVector) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Give every block the vector entries of its row band and column band.

        A row allgather assembles row band i on every rank of grid row i; a
        transpose exchange then hands rank (i, j) the row band j held by (j, i).
        """
        if vector.n != self.n_rows or self.n_rows != self.n_cols:
            raise DimensionMismatch("expand needs a square matrix and a matching vector")
        dtype = vector.dtype
        gathered = self.grid.allgather_rows([part.astype(dtype).tobytes() for part in vector.parts])
        row_bands = [b"".join(pieces) for pieces in gathered]
        col_bands = self.grid.transpose_exchange(row_bands)
        return [
            (
                np.frombuffer(row_bands[rank], dtype=dtype),
                np.frombuffer(col_bands[rank], dtype=dtype),
            )
            for rank in self.grid.topology.ranks
        ]


def _block_owner(
    grid: VirtualGrid,
    row_bounds: np.ndarray,
    col_bounds: np.ndarray,
    rows: np.ndarray,
    cols: np.ndarray,
) -> np.ndarray:
    return owner_of(row_bounds, rows) * grid.side + owner_of(col_bounds, cols)
