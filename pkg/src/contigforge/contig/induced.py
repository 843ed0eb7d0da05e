"""Redistribute the linear matrix so every contig lives on a single rank."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from ..core.errors import InconsistentAssignment
from ..grid.codec import pack_arrays, unpack_arrays
from ..grid.vector import DistVector
from ..matrix.distributed import DistSparseMatrix
from ..matrix.local import INDEX, LocalSparse
from .components import NONE, ComponentVector
from .partition import AssignmentVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InducedBlock:
    """Rank-local re-indexed submatrix; global_ids[i] is the read behind local vertex i."""

    rank: int
    matrix: LocalSparse
    global_ids: np.ndarray

    @property
    def n_vertices(self) -> int:
        return len(self.global_ids)

    def global_triples(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        rows, cols, values = self.matrix.triples()
        return self.global_ids[rows], self.global_ids[cols], values

    def edges(self) -> Dict[Tuple[int, int], tuple]:
        rows, cols, values = self.global_triples()
        return {(int(r), int(c)): v.item() for r, c, v in zip(rows, cols, values)}


def destination_vector(components: ComponentVector, assignment: AssignmentVector) -> DistVector:
    """dest[u] = par[v[u]], NONE for reads outside every contig."""
    labels = components.labels
    parts = []
    for part in labels.parts:
        dest = np.full(len(part), NONE, dtype=np.int64)
        member = part >= 0
        dest[member] = assignment.par[part[member]]
        parts.append(dest)
    return DistVector.from_parts(labels.grid, labels.n, parts)


def induced_subgraph(
    linear: DistSparseMatrix, components: ComponentVector, assignment: AssignmentVector
) -> List[InducedBlock]:
    """One InducedBlock per rank holding exactly the contigs assigned to it.

    Destinations reach the blocks through a row allgather followed by a
    transpose exchange; every nonzero then travels as a (u, v, label) triple
    in a single alltoall.
    """
    grid = linear.grid
    dest = destination_vector(components, assignment)
    bands = linear.expand(dest)

    outboxes = []
    for rank in grid.topology.ranks:
        rows, cols, values = linear.global_triples(rank)
        row0, col0 = linear.offsets(rank)
        row_dest, col_dest = bands[rank]
        du = row_dest[rows - row0]
        dv = col_dest[cols - col0]
        bad = (du != dv) | (du < 0)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise InconsistentAssignment(
                f"edge ({int(rows[k])}, {int(cols[k])}) spans ranks {int(du[k])} and {int(dv[k])}"
            )
        outboxes.append(
            {
                int(dst): pack_arrays(rows[du == dst], cols[du == dst], values[du == dst])
                for dst in np.unique(du)
            }
        )
    inboxes = grid.alltoall(outboxes)

    result = []
    for rank in grid.topology.ranks:
        parts = [
            unpack_arrays(inboxes[rank][src], [INDEX, INDEX, linear.dtype])
            for src in sorted(inboxes[rank])
        ]
        rows = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, dtype=INDEX)
        cols = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0, dtype=INDEX)
        values = np.concatenate([p[2] for p in parts]) if parts else np.zeros(0, dtype=linear.dtype)
        global_ids = np.unique(np.concatenate((rows, cols)))
        n_local = len(global_ids)
        matrix = LocalSparse.from_triples(
            n_local,
            n_local,
            np.searchsorted(global_ids, rows),
            np.searchsorted(global_ids, cols),
            values,
        )
        result.append(InducedBlock(rank=rank, matrix=matrix, global_ids=global_ids))

    logger.info(
        "induced subgraph: %d edges over %d ranks, %d ranks idle",
        sum(block.matrix.nnz for block in result),
        grid.p_total,
        sum(1 for block in result if block.n_vertices == 0),
    )
    return result
