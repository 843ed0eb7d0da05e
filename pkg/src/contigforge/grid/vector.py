"""Dense vectors distributed over every rank of the virtual grid."""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .codec import pack_arrays, unpack_arrays
from .collectives import VirtualGrid
from .topology import owner_of, vector_bounds


@dataclass
class DistVector:
    """Length-n vector; rank r owns the slice [bounds[r], bounds[r+1])."""

    grid: VirtualGrid
    n: int
    bounds: np.ndarray
    parts: List[np.ndarray]

    @classmethod
    def from_global(cls, grid: VirtualGrid, values: np.ndarray) -> "DistVector":
        values = np.asarray(values)
        bounds = vector_bounds(len(values), grid.topology)
        parts = [values[bounds[r] : bounds[r + 1]].copy() for r in grid.topology.ranks]
        return cls(grid=grid, n=len(values), bounds=bounds, parts=parts)

    @classmethod
    def full(cls, grid: VirtualGrid, n: int, fill: int, dtype=np.int64) -> "DistVector":
        return cls.from_global(grid, np.full(n, fill, dtype=dtype))

    @classmethod
    def from_parts(cls, grid: VirtualGrid, n: int, parts: Sequence[np.ndarray]) -> "DistVector":
        return cls(grid=grid, n=n, bounds=vector_bounds(n, grid.topology), parts=list(parts))

    @property
    def dtype(self) -> np.dtype:
        return self.parts[0].dtype if self.parts else np.dtype(np.int64)

    def local_range(self, rank: int) -> Tuple[int, int]:
        return int(self.bounds[rank]), int(self.bounds[rank + 1])

    def owners(self, indices: np.ndarray) -> np.ndarray:
        return owner_of(self.bounds, indices)

    def to_numpy(self) -> np.ndarray:
        """Concatenated global view (inspection and tests; no ledger traffic)."""
        if not self.parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(self.parts)


def fetch(vector: DistVector, requests: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Each rank looks up arbitrary global entries; two alltoall supersteps."""
    grid = vector.grid
    index_dtype = np.dtype(np.int64)

    outboxes = []
    plans = []
    for rank in grid.topology.ranks:
        wanted = np.asarray(requests[rank], dtype=np.int64)
        owners = vector.owners(wanted)
        plan = {int(dst): np.flatnonzero(owners == dst) for dst in np.unique(owners)}
        plans.append(plan)
        outboxes.append({dst: pack_arrays(wanted[pos]) for dst, pos in plan.items()})
    request_inboxes = grid.alltoall(outboxes)

    replies = []
    for rank in grid.topology.ranks:
        lo, _ = vector.local_range(rank)
        outbox = {}
        for src, payload in request_inboxes[rank].items():
            (indices,) = unpack_arrays(payload, [index_dtype])
            outbox[src] = pack_arrays(vector.parts[rank][indices - lo])
        replies.append(outbox)
    reply_inboxes = grid.alltoall(replies)

    results = []
    for rank in grid.topology.ranks:
        wanted = np.asarray(requests[rank], dtype=np.int64)
        values = np.zeros(len(wanted), dtype=vector.dtype)
        for src, positions in plans[rank].items():
            if len(positions) == 0:
                continue
            (answer,) = unpack_arrays(reply_inboxes[rank][src], [vector.dtype])
            values[positions] = answer
        results.append(values)
    return results


def scatter_min(vector: DistVector, updates: Sequence[Tuple[np.ndarray, np.ndarray]]) -> DistVector:
    """Send (index, value) proposals to owners; owners keep the minimum per index."""
    grid = vector.grid
    outboxes = []
    for rank in grid.topology.ranks:
        indices, values = updates[rank]
        indices = np.asarray(indices, dtype=np.int64)
        values = np.asarray(values, dtype=vector.dtype)
        owners = vector.owners(indices)
        outboxes.append(
            {
                int(dst): pack_arrays(indices[owners == dst], values[owners == dst])
                for dst in np.unique(owners)
            }
        )
    inboxes = grid.alltoall(outboxes)

    parts = []
    for rank in grid.topology.ranks:
        lo, _ = vector.local_range(rank)
        part = vector.parts[rank].copy()
        for src in sorted(inboxes[rank]):
            indices, values = unpack_arrays(inboxes[rank][src], [np.dtype(np.int64), vector.dtype])
            np.minimum.at(part, indices - lo, values)
        parts.append(part)
    return DistVector(grid=grid, n=vector.n, bounds=vector.bounds, parts=parts)
