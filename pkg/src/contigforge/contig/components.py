"""Connected components of the linear graph by hooking and shortcutting."""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..core.errors import ContigError
from ..grid.codec import pack_arrays, unpack_arrays
from ..grid.collectives import VirtualGrid
from ..grid.topology import vector_bounds
from ..grid.vector import DistVector, fetch, scatter_min
from ..matrix.distributed import DistSparseMatrix
from ..matrix.operations import row_degree

logger = logging.getLogger(__name__)

NONE = -1
INDEX = np.dtype(np.int64)


@dataclass
class ComponentVector:
    """Read id -> dense contig id, NONE for masked or isolated reads."""

    labels: DistVector
    n_components: int

    def to_numpy(self) -> np.ndarray:
        return self.labels.to_numpy()


def _propagate(
    grid: VirtualGrid, deltas: Sequence[Tuple[np.ndarray, np.ndarray]]
) -> List[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
    """Ship changed (index, value) pairs to the ranks caching them.

    Row-band changes travel by row allgather; the column band of (i, j) is the
    row band of (j, i) and is obtained with a transpose exchange.
    """
    gathered = grid.allgather_rows([pack_arrays(idx, val) for idx, val in deltas])
    row_deltas = []
    for pieces in gathered:
        unpacked = [unpack_arrays(piece, [INDEX, INDEX]) for piece in pieces]
        row_deltas.append(
            (np.concatenate([u[0] for u in unpacked]), np.concatenate([u[1] for u in unpacked]))
        )
    received = grid.transpose_exchange([pack_arrays(idx, val) for idx, val in row_deltas])
    result = []
    for rank, payload in enumerate(received):
        col_idx, col_val = unpack_arrays(payload, [INDEX, INDEX])
        result.append((row_deltas[rank][0], row_deltas[rank][1], col_idx, col_val))
    return result


def connected_components(linear: DistSparseMatrix, max_rounds: int = 10_000) -> ComponentVector:
    """Label every non-isolated vertex with its component.

    Each round hooks parent pointers along edges (f[f[u]] and f[u] take the
    smaller f[v]), then shortcuts f[u] = f[f[u]]. Blocks keep cached copies of
    f for their row and column bands and only edges touching changed entries
    propose again. Roots end up as the smallest id of each component.
    """
    grid = linear.grid
    topology = grid.topology
    n = linear.n_rows
    bounds = vector_bounds(n, topology)

    parent = DistVector.from_global(grid, np.arange(n, dtype=np.int64))
    row_cache, col_cache, edges = [], [], []
    for rank in topology.ranks:
        row0, col0 = linear.offsets(rank)
        rows_n, cols_n = linear.band_shape(rank)
        row_cache.append(np.arange(row0, row0 + rows_n, dtype=np.int64))
        col_cache.append(np.arange(col0, col0 + cols_n, dtype=np.int64))
        block = linear.block(rank)
        edges.append((block.row_idx, block.col_indices()))
    active = [np.ones(len(rows), dtype=bool) for rows, _ in edges]

    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise ContigError(f"connected components did not converge in {max_rounds} rounds")

        proposals = []
        for rank in topology.ranks:
            rows, cols = edges[rank]
            rows, cols = rows[active[rank]], cols[active[rank]]
            fu, fv = row_cache[rank][rows], col_cache[rank][cols]
            hook = fv < fu
            row0, _ = linear.offsets(rank)
            targets = np.concatenate((fu[hook], rows[hook] + row0))
            values = np.concatenate((fv[hook], fv[hook]))
            proposals.append((targets, values))
        hooked = scatter_min(parent, proposals)

        grandparents = fetch(hooked, hooked.parts)
        shortcut = DistVector.from_parts(grid, n, grandparents)

        deltas = []
        for rank in topology.ranks:
            changed = np.flatnonzero(shortcut.parts[rank] != parent.parts[rank])
            deltas.append((changed + bounds[rank], shortcut.parts[rank][changed]))
        n_changed = grid.allreduce_sum([len(idx) for idx, _ in deltas])
        parent = shortcut
        if n_changed == 0:
            break

        updates = _propagate(grid, deltas)
        for rank in topology.ranks:
            row_idx, row_val, col_idx, col_val = updates[rank]
            row0, col0 = linear.offsets(rank)
            row_cache[rank][row_idx - row0] = row_val
            col_cache[rank][col_idx - col0] = col_val
            row_changed = np.zeros(len(row_cache[rank]), dtype=bool)
            col_changed = np.zeros(len(col_cache[rank]), dtype=bool)
            row_changed[row_idx - row0] = True
            col_changed[col_idx - col0] = True
            rows, cols = edges[rank]
            active[rank] = row_changed[rows] | col_changed[cols]

    logger.debug("connected components converged after %d rounds", rounds)
    return _relabel(linear, parent)


def _relabel(linear: DistSparseMatrix, parent: DistVector) -> ComponentVector:
    """Dense contig ids ordered by root id; isolated vertices get NONE."""
    grid = linear.grid
    degrees = row_degree(linear)

    root_counts = []
    for rank in grid.topology.ranks:
        lo, _ = parent.local_range(rank)
        ids = np.arange(lo, lo + len(parent.parts[rank]))
        root_counts.append(int(((parent.parts[rank] == ids) & (degrees.parts[rank] > 0)).sum()))
    gathered = grid.gather(0, [np.int64(c).tobytes() for c in root_counts])
    counts = np.array([np.frombuffer(p, dtype=np.int64)[0] for p in gathered], dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(counts)))
    n_components = int(starts[-1])
    offsets = grid.broadcast(0, starts.astype(np.int64).tobytes())

    root_labels = []
    for rank in grid.topology.ranks:
        lo, _ = parent.local_range(rank)
        ids = np.arange(lo, lo + len(parent.parts[rank]))
        is_root = (parent.parts[rank] == ids) & (degrees.parts[rank] > 0)
        first = int(np.frombuffer(offsets[rank], dtype=np.int64)[rank])
        label = np.full(len(ids), NONE, dtype=np.int64)
        label[is_root] = first + np.arange(int(is_root.sum()))
        root_labels.append(label)
    root_vector = DistVector.from_parts(grid, parent.n, root_labels)

    looked_up = fetch(root_vector, parent.parts)
    labels = [
        np.where(degrees.parts[rank] > 0, looked_up[rank], NONE).astype(np.int64)
        for rank in grid.topology.ranks
    ]
    return ComponentVector(DistVector.from_parts(grid, parent.n, labels), n_components)


def contig_sizes(components: ComponentVector) -> DistVector:
    """Reads per contig: local histograms summed by reduce_scatter over contig-id blocks."""
    grid = components.labels.grid
    n = components.n_components
    partials = []
    for part in components.labels.parts:
        partials.append(np.bincount(part[part >= 0], minlength=n).astype(np.int64))
    parts = grid.reduce_scatter(partials, vector_bounds(n, grid.topology))
    return DistVector.from_parts(grid, n, parts)
