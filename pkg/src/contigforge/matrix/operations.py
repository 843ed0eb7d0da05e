"""Distributed sparse operations: SpGEMM, degree reduction, pruning and transpose."""

import logging
from typing import Iterable, List, Union

import numpy as np

from ..core.errors import DimensionMismatch
from ..grid.topology import vector_bounds
from ..grid.vector import DistVector
from .distributed import DistSparseMatrix
from .local import INDEX, LocalSparse, combine, decode_block, encode_block, local_spgemm, pack_block
from .payloads import mirror_payload
from .semiring import Semiring

logger = logging.getLogger(__name__)


def spgemm(a: DistSparseMatrix, b: DistSparseMatrix, semiring: Semiring) -> DistSparseMatrix:
    """C = A . B over the semiring, as sqrt(P) broadcast stages (SUMMA).

    In stage s, block A(i, s) is broadcast along grid row i and block B(s, j)
    along grid column j; rank (i, j) multiplies the pair and keeps the partial.
    """
    if a.n_cols != b.n_rows:
        raise DimensionMismatch(f"cannot multiply {a.n_rows}x{a.n_cols} by {b.n_rows}x{b.n_cols}")
    if not np.array_equal(a.col_bounds, b.row_bounds):
        raise DimensionMismatch("inner bands of the operands differ")

    grid = a.grid
    topology = grid.topology
    partials: List[List[LocalSparse]] = [[] for _ in topology.ranks]

    for stage in range(grid.side):
        a_stage: List[LocalSparse] = [None] * grid.p_total  # type: ignore[list-item]
        b_stage: List[LocalSparse] = [None] * grid.p_total  # type: ignore[list-item]
        for i in range(grid.side):
            root = topology.rank_of(i, stage)
            received = grid.row_broadcast(i, stage, encode_block(a.blocks[root]))
            for col, payload in enumerate(received):
                a_stage[topology.rank_of(i, col)] = decode_block(payload, a.dtype)
        for j in range(grid.side):
            root = topology.rank_of(stage, j)
            received = grid.col_broadcast(j, stage, encode_block(b.blocks[root]))
            for row, payload in enumerate(received):
                b_stage[topology.rank_of(row, j)] = decode_block(payload, b.dtype)

        products = grid.map_ranks(
            lambda left, right: local_spgemm(left, right, semiring), a_stage, b_stage
        )
        for rank, product in enumerate(products):
            partials[rank].append(product)

    def merge(parts: List[LocalSparse]) -> LocalSparse:
        rows = np.concatenate([part.row_idx for part in parts])
        cols = np.concatenate([part.col_indices() for part in parts])
        values = np.concatenate([part.values for part in parts]).astype(semiring.out_dtype)
        return combine(parts[0].n_rows, parts[0].n_cols, rows, cols, values, semiring)

    blocks = grid.map_ranks(merge, partials)
    result = DistSparseMatrix.from_blocks(grid, a.n_rows, b.n_cols, semiring.kind, blocks)
    logger.debug("spgemm[%s]: %d x %d nnz -> %d", semiring.name, a.nnz, b.nnz, result.nnz)
    return result


def row_degree(matrix: DistSparseMatrix) -> DistVector:
    """Nonzeros per row: band-local counts summed by reduce_scatter."""
    grid = matrix.grid
    n = matrix.n_rows
    partials = []
    for rank in grid.topology.ranks:
        block = matrix.block(rank)
        row0, _ = matrix.offsets(rank)
        partial = np.zeros(n, dtype=np.int64)
        partial[row0 : row0 + block.n_rows] = np.bincount(block.row_idx, minlength=block.n_rows)
        partials.append(partial)
    parts = grid.reduce_scatter(partials, vector_bounds(n, grid.topology))
    return DistVector.from_parts(grid, n, parts)


KillSet = Union[DistVector, Iterable[int]]


def kill_vector(matrix: DistSparseMatrix, kill: KillSet) -> DistVector:
    """Indicator vector (1 = removed) for a set of vertex ids."""
    if isinstance(kill, DistVector):
        return kill
    mask = np.zeros(matrix.n_rows, dtype=np.int8)
    ids = np.fromiter((int(v) for v in kill), dtype=INDEX)
    mask[ids] = 1
    return DistVector.from_global(matrix.grid, mask)


def prune_rows_cols(matrix: DistSparseMatrix, kill: KillSet) -> DistSparseMatrix:
    """Clear every nonzero in a killed row or column; indexing is unchanged."""
    pieces = matrix.expand(kill_vector(matrix, kill))

    def prune(rank: int, block: LocalSparse, piece) -> LocalSparse:
        row_kill, col_kill = piece
        keep = (row_kill[block.row_idx] == 0) & (col_kill[block.col_indices()] == 0)
        return block.select(keep)

    return matrix.map_blocks(prune, pieces)


def transpose(matrix: DistSparseMatrix) -> DistSparseMatrix:
    """Local transpose with mirrored payloads, then block (i, j) moves to (j, i)."""
    grid = matrix.grid
    kind = matrix.kind

    def flip(rank: int) -> bytes:
        block = matrix.block(rank).transposed(lambda values: mirror_payload(kind, values))
        return encode_block(pack_block(block))

    received = grid.transpose_exchange(grid.map_ranks(flip, list(grid.topology.ranks)))
    blocks = [decode_block(payload, matrix.dtype) for payload in received]
    return DistSparseMatrix(
        grid=grid,
        n_rows=matrix.n_cols,
        n_cols=matrix.n_rows,
        kind=kind,
        blocks=tuple(pack_block(block) for block in blocks),
        row_bounds=matrix.col_bounds,
        col_bounds=matrix.row_bounds,
    )


def drop_diagonal(matrix: DistSparseMatrix) -> DistSparseMatrix:
    def off_diagonal(rank: int, block: LocalSparse) -> LocalSparse:
        row0, col0 = matrix.offsets(rank)
        return block.select(block.row_idx + row0 != block.col_indices() + col0)

    return matrix.map_blocks(off_diagonal)


def _keys(block: LocalSparse) -> np.ndarray:
    return block.col_indices() * max(block.n_rows, 1) + block.row_idx


def ewise_positions(a: DistSparseMatrix, b: DistSparseMatrix) -> List[np.ndarray]:
    """For every nonzero of A, its position in the matching block of B or -1.

    A and B must share the distribution, so the join is rank-local.
    """
    if (a.n_rows, a.n_cols) != (b.n_rows, b.n_cols):
        raise DimensionMismatch("element-wise operands differ in shape")

    def join(left: LocalSparse, right: LocalSparse) -> np.ndarray:
        keys, other = _keys(left), _keys(right)
        pos = np.searchsorted(other, keys)
        found = pos < len(other)
        found[found] = other[pos[found]] == keys[found]
        return np.where(found, pos, -1)

    ranks = list(a.grid.topology.ranks)
    return a.grid.map_ranks(join, [a.block(r) for r in ranks], [b.block(r) for r in ranks])


def mask_out(a: DistSparseMatrix, b: DistSparseMatrix) -> DistSparseMatrix:
    """A without the coordinates stored in B."""
    positions = ewise_positions(a, b)
    return a.map_blocks(lambda rank, block, pos: block.select(pos < 0), positions)
