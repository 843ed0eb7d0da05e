"""Synthetic genomes and error-free reads with their true layout."""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..constants import NUCLEOTIDES
from ..core.errors import ConfigError
from ..sequences.store import ReadStore, reverse_complement

logger = logging.getLogger(__name__)

_ALPHABET = np.frombuffer(NUCLEOTIDES.encode("ascii"), dtype=np.uint8)


@dataclass(frozen=True)
class ReadPlacement:
    """Where a read was sampled: start on the reference and whether it was reverse-complemented."""

    read_id: int
    start: int
    reverse: bool

    def to_row(self) -> List[str]:
        return [str(self.read_id), str(self.start), "-" if self.reverse else "+"]


def synth_genome(length: int, seed: int) -> str:
    """Uniform random reference of the given length."""
    if length < 1:
        raise ConfigError(f"genome length must be positive, got {length}")
    rng = np.random.default_rng(seed)
    return _ALPHABET[rng.integers(0, 4, size=length)].tobytes().decode("ascii")


def synth_reads(
    reference: str, read_len: int, coverage: float, seed: int
) -> Tuple[ReadStore, List[ReadPlacement]]:
    """Sample round(|reference| x coverage / read_len) reads uniformly with random strand."""
    if read_len < 1 or read_len >= len(reference):
        raise ConfigError(f"read length {read_len} must be in [1, {len(reference)})")
    if coverage < 1:
        raise ConfigError(f"coverage must be at least 1, got {coverage}")

    n_reads = expected_reads(len(reference), read_len, coverage)
    rng = np.random.default_rng(seed + 1)
    starts = rng.integers(0, len(reference) - read_len + 1, size=n_reads)
    strands = rng.integers(0, 2, size=n_reads).astype(bool)

    sequences = []
    layout = []
    for read_id, (start, reverse) in enumerate(zip(starts.tolist(), strands.tolist())):
        piece = reference[start : start + read_len]
        sequences.append(reverse_complement(piece) if reverse else piece)
        layout.append(ReadPlacement(read_id=read_id, start=start, reverse=reverse))

    logger.info(
        "sampled %d reads of %d bases (%.1fx) from a %d-base reference",
        n_reads,
        read_len,
        coverage,
        len(reference),
    )
    return ReadStore.from_sequences(sequences), layout


def coverage_gaps(layout: List[ReadPlacement], read_len: int, min_overlap: int) -> int:
    """Breaks in the read tiling: places no pair of reads overlaps by min_overlap bases.

    Every gap forces a contig boundary, so a run yields at least gaps + 1 contigs
    on the covered span.
    """
    if not layout:
        return 0
    starts = sorted(p.start for p in layout)
    gaps = 0
    reach = starts[0] + read_len
    for start in starts[1:]:
        if reach - start < min_overlap:
            gaps += 1
        reach = max(reach, start + read_len)
    return gaps


def expected_reads(genome_length: int, read_len: int, coverage: float) -> int:
    return max(1, int(round(genome_length * coverage / read_len)))


def layout_tsv(layout: List[ReadPlacement]) -> str:
    lines = ["read\tstart\tstrand"]
    lines.extend("\t".join(placement.to_row()) for placement in layout)
    return "\n".join(lines) + "\n"


def genome_span(layout: List[ReadPlacement], read_len: int) -> int:
    """Reference bases covered by at least one read."""
    if not layout:
        return 0
    covered = 0
    end = -1
    for start in sorted(p.start for p in layout):
        stop = start + read_len
        if stop > end:
            covered += stop - max(start, end)
            end = stop
    return covered
