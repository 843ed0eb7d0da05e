"""Moving reads between ranks: initial residency, band replication and exchange."""

import logging
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.errors import UnassignedRead
from ..grid.collectives import VirtualGrid
from ..grid.topology import vector_bounds
from .store import ReadStore

logger = logging.getLogger(__name__)

Assignment = Union[Mapping[int, int], np.ndarray]


def distribute_reads(grid: VirtualGrid, store: ReadStore) -> List[ReadStore]:
    """Initial residency: rank r holds the reads of its vector slice (parallel file read)."""
    bounds = vector_bounds(len(store), grid.topology)
    return [
        store.take(np.arange(bounds[rank], bounds[rank + 1], dtype=np.int64))
        for rank in grid.topology.ranks
    ]


def band_reads(grid: VirtualGrid, stores: Sequence[ReadStore]) -> List[Tuple[ReadStore, ReadStore]]:
    """Reads of each rank's row band and column band.

    The row band is assembled by a row allgather; the column band of (i, j)
    is the row band of (j, i), obtained by a transpose exchange.
    """
    gathered = grid.allgather_rows([store.to_bytes() for store in stores])
    row_stores = [
        ReadStore.concat([ReadStore.from_bytes(p) for p in pieces]) for pieces in gathered
    ]
    received = grid.transpose_exchange([store.to_bytes() for store in row_stores])
    col_stores = [ReadStore.from_bytes(payload) for payload in received]
    return list(zip(row_stores, col_stores))


def ship_reads(
    grid: VirtualGrid,
    stores: Sequence[ReadStore],
    destinations: Sequence[np.ndarray],
    needed: Optional[Sequence[np.ndarray]] = None,
) -> List[ReadStore]:
    """Send each resident read to its destination rank in one alltoall.

    destinations[r][k] is the rank that wants the k-th read of stores[r], or -1.
    Reads marked in needed must have a destination. Reads that stay on their
    rank are not counted as traffic.
    """
    outboxes = []
    for rank in grid.topology.ranks:
        store = stores[rank]
        dest = np.asarray(destinations[rank], dtype=np.int64)
        if needed is not None:
            missing = np.asarray(needed[rank], dtype=bool) & (dest < 0)
            if missing.any():
                read_id = int(store.ids[np.flatnonzero(missing)[0]])
                raise UnassignedRead(f"read {read_id} belongs to a contig but has no destination")
        outbox = {}
        for dst in np.unique(dest[dest >= 0]):
            outbox[int(dst)] = store.take(np.flatnonzero(dest == dst)).to_bytes()
        outboxes.append(outbox)

    inboxes = grid.alltoall(outboxes)
    result = [
        ReadStore.concat([ReadStore.from_bytes(inbox[src]) for src in sorted(inbox)])
        for inbox in inboxes
    ]
    logger.debug("shipped %d reads", sum(len(store) for store in result))
    return result


def exchange_reads(
    grid: VirtualGrid,
    stores: Sequence[ReadStore],
    assignment: Assignment,
    required: Optional[Iterable[int]] = None,
) -> List[ReadStore]:
    """Redistribute reads so each rank holds exactly the reads assigned to it.

    assignment maps read id to rank (a mapping, or an array with -1 for none).
    Raises UnassignedRead if a read in `required` has no destination.
    """
    required_set = set(int(r) for r in required) if required is not None else set()
    destinations = []
    needed = []
    for store in stores:
        dest = np.array(
            [_lookup(assignment, int(read_id)) for read_id in store.ids], dtype=np.int64
        )
        destinations.append(dest)
        needed.append(np.array([int(r) in required_set for r in store.ids], dtype=bool))
    return ship_reads(grid, stores, destinations, needed)


def _lookup(assignment: Assignment, read_id: int) -> int:
    if isinstance(assignment, np.ndarray):
        return int(assignment[read_id]) if read_id < len(assignment) else -1
    return int(assignment.get(read_id, -1))
