"""Read sequences: packed storage, FASTA I/O and read redistribution."""

from .exchange import band_reads, distribute_reads, exchange_reads, ship_reads
from .fasta import fasta_read, format_contigs, format_fasta, format_reads
from .store import ReadStore, check_alphabet, reverse_complement

__all__ = [
    "band_reads",
    "distribute_reads",
    "exchange_reads",
    "ship_reads",
    "fasta_read",
    "format_contigs",
    "format_fasta",
    "format_reads",
    "ReadStore",
    "check_alphabet",
    "reverse_complement",
]
