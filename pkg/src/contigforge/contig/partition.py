"""Greedy LPT assignment of contigs to ranks."""

import heapq
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..grid.codec import pack_arrays, unpack_arrays
from ..grid.vector import DistVector

logger = logging.getLogger(__name__)


def lpt_partition(sizes: Sequence[int], n_parts: int) -> np.ndarray:
    """Contig -> rank by Longest Processing Time first.

    Contigs are taken by size descending (smaller id first on ties) and each
    goes to the least-loaded rank (lowest rank on ties).
    """
    if n_parts < 1:
        raise ValueError(f"need at least one rank, got {n_parts}")
    sizes = np.asarray(sizes, dtype=np.int64)
    order = sorted(range(len(sizes)), key=lambda c: (-int(sizes[c]), c))
    heap = [(0, rank) for rank in range(n_parts)]
    assignment = np.zeros(len(sizes), dtype=np.int64)
    for contig in order:
        load, rank = heapq.heappop(heap)
        assignment[contig] = rank
        heapq.heappush(heap, (load + int(sizes[contig]), rank))
    return assignment


def partition_loads(sizes: Sequence[int], assignment: np.ndarray, n_parts: int) -> np.ndarray:
    """Total contig size per rank."""
    return np.bincount(
        np.asarray(assignment, dtype=np.int64),
        weights=np.asarray(sizes, dtype=np.float64),
        minlength=n_parts,
    ).astype(np.int64)


@dataclass(frozen=True)
class AssignmentVector:
    """par: contig id -> rank, replicated on every rank."""

    par: np.ndarray
    n_parts: int

    def loads(self, sizes: Sequence[int]) -> np.ndarray:
        return partition_loads(sizes, self.par, self.n_parts)


def greedy_partitioning(sizes: DistVector) -> AssignmentVector:
    """Collect the contig sizes on rank 0, run LPT there and broadcast par."""
    grid = sizes.grid
    gathered = grid.gather(0, [pack_arrays(part.astype(np.int64)) for part in sizes.parts])
    all_sizes = np.concatenate([unpack_arrays(p, [np.dtype(np.int64)])[0] for p in gathered])
    par = lpt_partition(all_sizes, grid.p_total)
    received = grid.broadcast(0, pack_arrays(par))
    (replica,) = unpack_arrays(received[-1], [np.dtype(np.int64)])
    loads = partition_loads(all_sizes, par, grid.p_total)
    logger.info(
        "LPT: %d contigs over %d ranks, max load %d, idle ranks %d",
        len(all_sizes),
        grid.p_total,
        int(loads.max()) if len(loads) else 0,
        int((loads == 0).sum()),
    )
    return AssignmentVector(par=replica, n_parts=grid.p_total)
