"""FASTA input and output."""

import io
import logging
from pathlib import Path
from typing import Iterable, List, Tuple, Union

from Bio import SeqIO
from Bio.Seq import Seq
from Bio.SeqIO.FastaIO import FastaWriter
from Bio.SeqRecord import SeqRecord

from ..constants import FASTA_LINE_WIDTH
from ..core.errors import ParseError
from .store import ReadStore, check_alphabet

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def fasta_read(path: PathLike) -> ReadStore:
    """Load reads in file order with ids 0..n-1; bases are upper-cased.

    Raises ParseError for a malformed header or an empty record and
    AlphabetError for a record holding non-ACGT symbols.
    """
    path = Path(path)
    if not path.exists():
        raise ParseError(f"FASTA file not found: {path}")

    with open(path, "r") as handle:
        text = handle.read()

    first = next((line for line in text.splitlines() if line.strip()), None)
    if first is None:
        return ReadStore.empty()
    if not first.startswith(">"):
        raise ParseError(f"{path}: expected a '>' header, found {first[:20]!r}")

    sequences: List[str] = []
    names: List[str] = []
    for record in SeqIO.parse(io.StringIO(text), "fasta"):
        if not record.id:
            raise ParseError(f"{path}: record {len(names)} has an empty header")
        sequence = str(record.seq).upper()
        if not sequence:
            raise ParseError(f"{path}: record '{record.id}' is empty")
        check_alphabet(sequence, record.id)
        sequences.append(sequence)
        names.append(record.description)

    logger.info(
        "Loaded %d reads (%d bases) from %s", len(sequences), sum(map(len, sequences)), path
    )
    return ReadStore.from_sequences(sequences, names=names)


def format_fasta(entries: Iterable[Tuple[str, str, str]], wrap: int = FASTA_LINE_WIDTH) -> str:
    """Render (id, description, sequence) entries as FASTA text."""
    records = [
        SeqRecord(Seq(sequence), id=record_id, description=description)
        for record_id, description, sequence in entries
    ]
    handle = io.StringIO()
    FastaWriter(handle, wrap=wrap).write_file(records)
    return handle.getvalue()


def format_contigs(contigs: Iterable[Tuple[int, str, int]]) -> str:
    """FASTA text for (contig number, sequence, read count) triples."""
    return format_fasta(
        (f"contig_{number}", f"len={len(sequence)} reads={reads}", sequence)
        for number, sequence, reads in contigs
    )


def format_reads(store: ReadStore) -> str:
    return format_fasta((f"read_{read_id}", "", sequence) for read_id, sequence in store.items())
