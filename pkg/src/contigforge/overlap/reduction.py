"""Transitive reduction of the overlap graph."""

import logging
from typing import Tuple

import numpy as np

from ..constants import DEFAULT_FUZZ, DEFAULT_MAX_ITERATIONS
from ..core.errors import NonConvergence
from ..matrix.distributed import DistSparseMatrix
from ..matrix.local import LocalSparse
from ..matrix.operations import ewise_positions, mask_out, spgemm, transpose
from ..matrix.semiring import WALK

logger = logging.getLogger(__name__)


def mark_transitive(overlaps: DistSparseMatrix, fuzz: int) -> Tuple[DistSparseMatrix, int]:
    """Edges (i, k) with a valid walk i -> j -> k no longer than overhang(i, k) + fuzz."""
    walks = spgemm(overlaps, overlaps, WALK)
    positions = ewise_positions(overlaps, walks)

    def mark(rank: int, block: LocalSparse, pos: np.ndarray) -> LocalSparse:
        found = pos >= 0
        best = np.full(block.nnz, np.iinfo(np.int64).max, dtype=np.int64)
        if found.any():
            walk_best = walks.block(rank).values["best"][pos[found]]
            direction = block.values["direction"][found].astype(np.int64)
            best[found] = walk_best[np.arange(len(direction)), direction]
        limit = block.values["overhang"].astype(np.int64) + fuzz
        return block.select(found & (best <= limit))

    marked = overlaps.map_blocks(mark, positions)
    total = overlaps.grid.allreduce_sum([block.nnz for block in marked.blocks])
    return marked, total


def transitive_reduction(
    overlaps: DistSparseMatrix,
    fuzz: int = DEFAULT_FUZZ,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> DistSparseMatrix:
    """Remove transitive edges until none are left; the result is the string matrix S.

    Marks are mirrored before removal so both orientations of an edge go together.
    """
    current = overlaps
    for iteration in range(1, max_iterations + 1):
        marked, total = mark_transitive(current, fuzz)
        logger.debug("transitive reduction pass %d: %d edges marked", iteration, total)
        if total == 0:
            logger.info("transitive reduction: %d -> %d edges", overlaps.nnz, current.nnz)
            return current
        current = mask_out(mask_out(current, marked), transpose(marked))
    raise NonConvergence(f"transitive reduction still marking edges after {max_iterations} passes")
