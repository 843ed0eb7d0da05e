"""Local assembly: walk each linear component of an induced block and join its reads."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.errors import BrokenChain
from ..matrix.payloads import EdgeLabel
from ..sequences.store import ReadStore
from .induced import InducedBlock

logger = logging.getLogger(__name__)

Adjacency = Dict[int, List[Tuple[int, EdgeLabel]]]


@dataclass
class ContigChain:
    """Ordered walk r, c1, ..., r' with read orientations and the label of every step."""

    read_ids: List[int]
    reverse: List[bool]
    labels: List[EdgeLabel]
    circular: bool = False
    rank: int = 0
    sequence: str = ""
    number: Optional[int] = field(default=None, compare=False)

    @property
    def first_read(self) -> int:
        return self.read_ids[0]

    def __len__(self) -> int:
        return len(self.sequence)

    def to_row(self) -> List[str]:
        """contig, rank, reads, orientations, pre/post per step."""
        return [
            str(self.number if self.number is not None else ""),
            str(self.rank),
            ",".join(str(r) for r in self.read_ids),
            "".join("-" if rev else "+" for rev in self.reverse),
            ",".join(f"{label.pre}/{label.post}" for label in self.labels),
        ]


def _adjacency(block: InducedBlock) -> Adjacency:
    """Neighbours of each local vertex, read from its CSC column."""
    matrix = block.matrix
    adjacency: Adjacency = {}
    for col in range(matrix.n_cols):
        rows, values = matrix.column(col)
        for row, record in zip(rows, values):
            # (row, col) holds the label of the step row -> col
            adjacency.setdefault(int(row), []).append((col, EdgeLabel.from_record(record)))
    return adjacency


def _cut_strand_conflicts(adjacency: Adjacency) -> int:
    """Drop one edge at every vertex whose two overlaps leave from the same read end.

    A walk can enter such a read but never leave it on the right strand. The
    edge to the higher neighbour is removed, in both directions, so the
    vertex ends one chain and its other neighbour starts or ends another.
    """
    cut = 0
    for vertex in sorted(adjacency):
        neighbours = adjacency[vertex]
        if len(neighbours) != 2:
            continue
        (_, first), (_, second) = neighbours
        if first.direction.src_reverse != second.direction.src_reverse:
            continue
        dropped = max(n for n, _ in neighbours)
        adjacency[vertex] = [n for n in neighbours if n[0] != dropped]
        adjacency[dropped] = [n for n in adjacency[dropped] if n[0] != vertex]
        cut += 1
    return cut


def _walk(
    adjacency: Adjacency, start: int, first: Tuple[int, EdgeLabel], visited: np.ndarray
) -> Tuple[List[int], List[bool], List[EdgeLabel], bool]:
    """Follow degree-2 vertices from start until a root or back to start."""
    vertices = [start]
    labels: List[EdgeLabel] = []
    reverse = [first[1].direction.src_reverse]
    visited[start] = True
    prev, (cur, label) = start, first

    while True:
        labels.append(label)
        if cur == start:
            return vertices, reverse, labels, True
        if visited[cur]:
            raise BrokenChain(f"walk from {start} revisits vertex {cur}")
        visited[cur] = True
        vertices.append(cur)
        reverse.append(label.direction.dst_reverse)

        neighbours = adjacency[cur]
        if len(neighbours) > 2:
            raise BrokenChain(f"vertex {cur} has degree {len(neighbours)}")
        if len(neighbours) == 1:
            return vertices, reverse, labels, False
        onward = [n for n in neighbours if n[0] != prev]
        if len(onward) != 1:
            raise BrokenChain(f"vertex {cur} has a repeated neighbour")
        prev, (cur, label) = cur, onward[0]


def chain_sequence(
    store: ReadStore,
    read_ids: List[int],
    reverse: List[bool],
    labels: List[EdgeLabel],
    circular: bool,
) -> str:
    """l_r[a:pre(e0)] + l_c1[post(e0):pre(e1)] + ... + l_r'[post(e_last):b].

    a is the first base of r and b the last base of r' in their walking
    orientation. A circular walk stops before re-entering its first read.
    """
    pieces = []
    n_reads = len(read_ids)
    for pos, (read, rev) in enumerate(zip(read_ids, reverse)):
        length = store.length(read)
        if pos == 0:
            begin = length - 1 if rev else 0
        else:
            begin = labels[pos - 1].post
        if pos < n_reads - 1 or circular:
            end = labels[pos].pre
        else:
            end = 0 if rev else length - 1
        pieces.append(store.oriented_slice(read, begin, end, rev))
    return "".join(pieces)


def local_assembly(block: InducedBlock, store: ReadStore) -> List[ContigChain]:
    """Every contig of one rank's induced block.

    Columns are scanned in order for degree-1 roots; each walk marks its far
    root as visited so a chain is emitted once. Components without a root are
    cycles; they are cut at their lowest read id and flagged circular. Reads
    whose two overlaps use the same end are split off first; a read left
    without neighbours is not a contig.
    """
    matrix = block.matrix
    if matrix.nnz == 0:
        return []
    adjacency = _adjacency(block)
    widest = max(len(neighbours) for neighbours in adjacency.values())
    if widest > 2:
        raise BrokenChain(f"rank {block.rank}: local vertex of degree {widest}")
    cut = _cut_strand_conflicts(adjacency)
    if cut:
        logger.info("rank %d: %d strand conflicts split into separate chains", block.rank, cut)
    degrees = np.zeros(matrix.n_cols, dtype=np.int64)
    for vertex, neighbours in adjacency.items():
        degrees[vertex] = len(neighbours)
    visited = np.zeros(matrix.n_cols, dtype=bool)
    ids = block.global_ids

    chains = []
    for root in np.flatnonzero(degrees == 1):
        root = int(root)
        if visited[root]:
            continue
        walk = _walk(adjacency, root, adjacency[root][0], visited)
        chains.append(_chain(block, store, *walk))

    # Local ids follow global order, so the first unvisited vertex is the lowest read id.
    for start in np.flatnonzero((degrees == 2) & ~visited):
        start = int(start)
        if visited[start]:
            continue
        edges = sorted(adjacency[start], key=lambda n: (n[1].direction.src_reverse, n[0]))
        walk = _walk(adjacency, start, edges[0], visited)
        chain = _chain(block, store, *walk)
        logger.warning(
            "circular contig through %d reads cut at read %d", len(chain.read_ids), int(ids[start])
        )
        chains.append(chain)

    logger.debug("rank %d assembled %d contigs", block.rank, len(chains))
    return chains


def _chain(
    block: InducedBlock,
    store: ReadStore,
    vertices: List[int],
    reverse: List[bool],
    labels: List[EdgeLabel],
    circular: bool,
) -> ContigChain:
    read_ids = [int(block.global_ids[v]) for v in vertices]
    return ContigChain(
        read_ids=read_ids,
        reverse=reverse,
        labels=labels,
        circular=circular,
        rank=block.rank,
        sequence=chain_sequence(store, read_ids, reverse, labels, circular),
    )
