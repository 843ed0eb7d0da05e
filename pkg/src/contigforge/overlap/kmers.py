"""Canonical k-mer counting and the reads x k-mers matrix A."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..constants import DEFAULT_MAX_KMER_FREQ
from ..core.errors import KTooLarge
from ..grid.codec import pack_arrays, unpack_arrays
from ..grid.collectives import VirtualGrid
from ..matrix.distributed import DistSparseMatrix
from ..matrix.payloads import KMER_DTYPE, PayloadKind
from ..sequences.exchange import distribute_reads
from ..sequences.store import ReadStore, reverse_complement

logger = logging.getLogger(__name__)

MAX_K = 31
CODE = np.dtype(np.uint64)

_BASE_CODE = np.zeros(256, dtype=np.uint64)
for _value, _base in enumerate(b"ACGT"):
    _BASE_CODE[_base] = _value


def kmer_codes(read: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """2-bit codes of the canonical k-mers of a read and their strand (1 = reverse).

    Codes compare like the k-mer strings, so the canonical form is the smaller code.
    """
    values = _BASE_CODE[read]
    if len(values) < k:
        return np.zeros(0, dtype=CODE), np.zeros(0, dtype=np.int8)
    windows = np.lib.stride_tricks.sliding_window_view(values, k)
    forward = np.zeros(len(windows), dtype=CODE)
    reverse = np.zeros(len(windows), dtype=CODE)
    two, three = np.uint64(2), np.uint64(3)
    for t in range(k):
        forward = (forward << two) | windows[:, t]
        reverse = (reverse << two) | (three - windows[:, k - 1 - t])
    strand = (reverse < forward).astype(np.int8)
    return np.minimum(forward, reverse), strand


def encode_kmer(kmer: str) -> int:
    code = 0
    for base in kmer:
        code = (code << 2) | "ACGT".index(base)
    return code


@dataclass(frozen=True)
class KmerIndex:
    """Reliable canonical k-mers and the presence matrix A (reads x k-mers).

    A(u, m) stores the first position of k-mer m in read u, its strand there and
    how often it occurs in the read.
    """

    k: int
    codes: np.ndarray
    frequencies: np.ndarray
    matrix: DistSparseMatrix

    @property
    def n_kmers(self) -> int:
        return len(self.codes)

    def column_of(self, kmer: str) -> Optional[int]:
        """Column id of a k-mer in either orientation, or None if absent or filtered."""
        code = min(encode_kmer(kmer), encode_kmer(reverse_complement(kmer)))
        pos = int(np.searchsorted(self.codes, np.uint64(code)))
        if pos < len(self.codes) and int(self.codes[pos]) == code:
            return pos
        return None


def _read_kmers(store: ReadStore, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per resident read, its distinct canonical k-mers: (rows, codes, payloads)."""
    rows: List[np.ndarray] = []
    codes: List[np.ndarray] = []
    payloads: List[np.ndarray] = []
    for read_id in store.ids:
        read_codes, strands = kmer_codes(store.codes(int(read_id)), k)
        unique, first, counts = np.unique(read_codes, return_index=True, return_counts=True)
        payload = np.empty(len(unique), dtype=KMER_DTYPE)
        payload["pos"] = first
        payload["strand"] = strands[first]
        payload["occurrences"] = counts
        rows.append(np.full(len(unique), read_id, dtype=np.int64))
        codes.append(unique)
        payloads.append(payload)
    if not rows:
        return np.zeros(0, np.int64), np.zeros(0, CODE), np.zeros(0, KMER_DTYPE)
    return np.concatenate(rows), np.concatenate(codes), np.concatenate(payloads)


def kmer_matrix(
    grid: VirtualGrid,
    reads: Union[ReadStore, Sequence[ReadStore]],
    k: int,
    max_kmer_freq: int = DEFAULT_MAX_KMER_FREQ,
) -> KmerIndex:
    """Build A from the reads resident on each rank.

    Per-rank k-mer read counts are gathered on rank 0, which keeps k-mers seen
    in at most max_kmer_freq reads and broadcasts the sorted dictionary; each
    rank then routes its nonzeros to the owning blocks.
    """
    stores = distribute_reads(grid, reads) if isinstance(reads, ReadStore) else list(reads)
    if k > MAX_K:
        raise KTooLarge(f"k={k} exceeds the supported maximum of {MAX_K}")
    if k < 1 or k % 2 == 0:
        raise ValueError(f"k must be a positive odd integer, got {k}")
    for store in stores:
        if len(store) and int(store.lengths.min()) < k:
            short = int(store.ids[int(np.argmin(store.lengths))])
            raise KTooLarge(f"k={k} exceeds the length {store.length(short)} of read {short}")

    n_reads = grid.allreduce_sum([len(store) for store in stores])
    local = grid.map_ranks(lambda store: _read_kmers(store, k), stores)

    summaries = []
    for _, codes, _ in local:
        unique, counts = np.unique(codes, return_counts=True)
        summaries.append(pack_arrays(unique, counts.astype(np.int64)))
    gathered = grid.gather(0, summaries)

    all_codes, all_counts = [], []
    for payload in gathered:
        codes, counts = unpack_arrays(payload, [CODE, np.dtype(np.int64)])
        all_codes.append(codes)
        all_counts.append(counts)
    merged_codes = np.concatenate(all_codes) if all_codes else np.zeros(0, CODE)
    merged_counts = np.concatenate(all_counts) if all_counts else np.zeros(0, np.int64)
    dictionary, inverse = np.unique(merged_codes, return_inverse=True)
    frequencies = np.bincount(inverse, weights=merged_counts, minlength=len(dictionary))
    frequencies = frequencies.astype(np.int64)
    reliable = frequencies <= max_kmer_freq
    dropped = int((~reliable).sum())
    dictionary, frequencies = dictionary[reliable], frequencies[reliable]

    received = grid.broadcast(0, pack_arrays(dictionary))
    per_rank = []
    for rank, (rows, codes, payloads) in enumerate(local):
        (known,) = unpack_arrays(received[rank], [CODE])
        columns = np.searchsorted(known, codes)
        found = columns < len(known)
        found[found] = known[columns[found]] == codes[found]
        per_rank.append((rows[found], columns[found], payloads[found]))

    matrix = DistSparseMatrix.from_rank_triples(
        grid, n_reads, len(dictionary), PayloadKind.KMER, per_rank
    )
    logger.info(
        "k-mer matrix: %d reads x %d k-mers, %d nonzeros (%d repetitive k-mers dropped)",
        n_reads,
        len(dictionary),
        matrix.nnz,
        dropped,
    )
    return KmerIndex(k=k, codes=dictionary, frequencies=frequencies, matrix=matrix)
