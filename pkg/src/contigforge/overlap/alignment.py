"""Exact-overlap scoring of candidate pairs and containment pruning.

A candidate seed fixes a diagonal between read u and read v (or its reverse
complement). The pair is kept when the reads agree over the whole stretch of
that diagonal where both are defined and the stretch is at least t bases long.
The stretch then either reaches one end of each read (a dovetail overlap) or
covers one read completely (a containment).
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..grid.collectives import VirtualGrid
from ..grid.vector import DistVector, scatter_min
from ..matrix.distributed import DistSparseMatrix
from ..matrix.local import LocalSparse
from ..matrix.operations import ewise_positions, prune_rows_cols, transpose
from ..matrix.payloads import LABEL_DTYPE, EdgeLabel, OverlapKind, PayloadKind
from ..sequences.exchange import band_reads
from ..sequences.store import ReadStore, reverse_complement_codes
from .kmers import kmer_codes

logger = logging.getLogger(__name__)

Seed = Tuple[int, int, int]


Kmers = Tuple[np.ndarray, np.ndarray]


def _diagonal(u: np.ndarray, v: np.ndarray, seed: Seed, k: int):
    """Oriented v, the diagonal shift and the stretch [start, end) of u it covers."""
    pos_u, pos_v, strand = seed
    len_v = len(v)
    if strand:
        w = reverse_complement_codes(v)
        pos_w = len_v - k - pos_v
    else:
        w, pos_w = v, pos_v
    shift = pos_u - pos_w
    return w, shift, max(0, shift), min(len(u), shift + len_v)


def score_overlap(
    u: np.ndarray, v: np.ndarray, seed: Seed, k: int, t: int, u_id: int = 0, v_id: int = 1
) -> Optional[EdgeLabel]:
    """Label for the pair (u, v) along the seed's diagonal, or None if it fails.

    The score is the exact overlap length; t is the minimum accepted score.
    """
    strand = seed[2]
    w, shift, start, end = _diagonal(u, v, seed, k)
    len_u, len_v = len(u), len(v)
    length = end - start
    if length < t:
        return None
    if not np.array_equal(u[start:end], w[start - shift : end - shift]):
        return None

    u_covered = start == 0 and end == len_u
    w_covered = start == shift and end == shift + len_v
    if u_covered or w_covered:
        if u_covered and w_covered:
            kind = OverlapKind.DST_CONTAINED if u_id < v_id else OverlapKind.SRC_CONTAINED
        else:
            kind = OverlapKind.SRC_CONTAINED if u_covered else OverlapKind.DST_CONTAINED
        label = EdgeLabel.from_overlap(len_u, len_v, length, False, bool(strand))
        return EdgeLabel(label.direction, len_v - length, 0, 0, length, len_u - length, kind)

    if shift > 0:
        # suffix of u meets prefix of w
        return EdgeLabel.from_overlap(len_u, len_v, length, False, bool(strand))
    # prefix of u meets suffix of w
    return EdgeLabel.from_overlap(len_u, len_v, length, True, not strand)


def shared_seeds(
    u: np.ndarray,
    v: np.ndarray,
    k: int,
    u_kmers: Optional[Kmers] = None,
    v_kmers: Optional[Kmers] = None,
) -> List[Seed]:
    """One seed per distinct diagonal shared by u and v, in (pos_u, pos_v) order.

    Precomputed ``kmer_codes`` of either read may be passed in.
    """
    u_codes, u_strand = u_kmers if u_kmers is not None else kmer_codes(u, k)
    v_codes, v_strand = v_kmers if v_kmers is not None else kmer_codes(v, k)
    order = np.argsort(v_codes, kind="stable")
    sorted_codes = v_codes[order]
    lo = np.searchsorted(sorted_codes, u_codes, side="left")
    hi = np.searchsorted(sorted_codes, u_codes, side="right")

    seeds = []
    for pos_u in np.flatnonzero(hi > lo):
        for pos_v in order[lo[pos_u] : hi[pos_u]]:
            seeds.append((int(pos_u), int(pos_v), int(u_strand[pos_u] ^ v_strand[pos_v])))
    seeds.sort()

    seen = set()
    distinct = []
    len_v = len(v)
    for pos_u, pos_v, strand in seeds:
        diagonal = (strand, pos_u - (len_v - k - pos_v if strand else pos_v))
        if diagonal not in seen:
            seen.add(diagonal)
            distinct.append((pos_u, pos_v, strand))
    return distinct


def align_pair(
    u: np.ndarray,
    v: np.ndarray,
    seed: Seed,
    k: int,
    t: int,
    u_id: int = 0,
    v_id: int = 1,
    kmers: Optional[Callable[[int], Kmers]] = None,
) -> Optional[EdgeLabel]:
    """Try the representative seed, then every other shared diagonal.

    The other diagonals are skipped when the representative one already
    agrees end to end but is shorter than t. ``kmers`` maps a read id to its
    ``kmer_codes`` for callers that score many pairs of the same reads.
    """
    label = score_overlap(u, v, seed, k, t, u_id, v_id)
    if label is not None:
        return label
    w, shift, start, end = _diagonal(u, v, seed, k)
    if end - start < t and np.array_equal(u[start:end], w[start - shift : end - shift]):
        return None
    u_kmers = kmers(u_id) if kmers is not None else None
    v_kmers = kmers(v_id) if kmers is not None else None
    for other in shared_seeds(u, v, k, u_kmers, v_kmers):
        if other == seed:
            continue
        label = score_overlap(u, v, other, k, t, u_id, v_id)
        if label is not None:
            return label
    return None


def _align_block(
    candidates: DistSparseMatrix, rank: int, block: LocalSparse, bands, k: int, t: int
) -> LocalSparse:
    row_store, col_store = bands
    row0, col0 = candidates.offsets(rank)
    rows, cols, seeds = block.triples()
    cache: Dict[int, Kmers] = {}

    def codes_of(read_id: int) -> np.ndarray:
        store = row_store if read_id in row_store else col_store
        return store.codes(read_id)

    def kmers(read_id: int) -> Kmers:
        if read_id not in cache:
            cache[read_id] = kmer_codes(codes_of(read_id), k)
        return cache[read_id]

    keep = np.zeros(len(rows), dtype=bool)
    labels = np.zeros(len(rows), dtype=LABEL_DTYPE)
    for n, (row, col, seed) in enumerate(zip(rows, cols, seeds)):
        u_id, v_id = int(row) + row0, int(col) + col0
        label = align_pair(
            row_store.codes(u_id),
            col_store.codes(v_id),
            (int(seed["pos_u"]), int(seed["pos_v"]), int(seed["strand"])),
            k,
            t,
            u_id,
            v_id,
            kmers,
        )
        if label is not None:
            keep[n] = True
            labels[n] = label.to_record()

    return LocalSparse.from_triples(
        block.n_rows, block.n_cols, rows[keep], cols[keep], labels[keep]
    )


def align_filter(
    candidates: DistSparseMatrix,
    stores: Sequence[ReadStore],
    k: int,
    t: int,
) -> DistSparseMatrix:
    """R: candidates that are exact overlaps of at least t bases, as edge labels.

    Each block fetches the reads of its row and column bands first. Pairs kept
    in only one orientation are dropped so R stays structurally symmetric.
    """
    grid = candidates.grid
    bands = band_reads(grid, stores)
    scored = candidates.map_blocks(
        lambda rank, block, band: _align_block(candidates, rank, block, band, k, t),
        bands,
        kind=PayloadKind.STRING_EDGE,
    )
    mirrored = transpose(scored)
    positions = ewise_positions(scored, mirrored)
    overlaps = scored.map_blocks(lambda rank, block, pos: block.select(pos >= 0), positions)
    logger.info("aligned overlaps: %d of %d candidates", overlaps.nnz, candidates.nnz)
    return overlaps


def contained_reads(overlaps: DistSparseMatrix) -> DistVector:
    """Indicator (1 = contained) of reads lying inside another read."""
    grid: VirtualGrid = overlaps.grid
    updates = []
    for rank in grid.topology.ranks:
        rows, cols, values = overlaps.global_triples(rank)
        kind = values["kind"]
        inside = np.concatenate(
            (rows[kind == OverlapKind.SRC_CONTAINED], cols[kind == OverlapKind.DST_CONTAINED])
        )
        inside = np.unique(inside)
        updates.append((inside, np.zeros(len(inside), dtype=np.int64)))
    keep = scatter_min(DistVector.full(grid, overlaps.n_rows, 1), updates)
    return DistVector.from_parts(grid, keep.n, [1 - part for part in keep.parts])


def prune_contained(
    overlaps: DistSparseMatrix, contained: Optional[DistVector] = None
) -> DistSparseMatrix:
    """Clear the rows and columns of contained reads."""
    if contained is None:
        contained = contained_reads(overlaps)
    return prune_rows_cols(overlaps, contained)
