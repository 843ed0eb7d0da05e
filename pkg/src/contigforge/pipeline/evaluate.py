"""Assembly quality against a known reference."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ..sequences.store import reverse_complement

logger = logging.getLogger(__name__)


@dataclass
class QualityReport:
    """Contig metrics plus the run's stage timings and communication summary."""

    completeness: float = 0.0
    longest_contig: int = 0
    contig_count: int = 0
    misassembled: int = 0
    total_length: int = 0
    n50: int = 0
    reference_length: Optional[int] = None
    circular_contigs: int = 0
    masked_reads: int = 0
    contained_reads: int = 0
    singletons: int = 0
    stage_timings: Dict[str, float] = field(default_factory=dict)
    ledger: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self, include_timings: bool = True) -> Dict[str, Any]:
        """Fixed key order for golden-file comparison."""
        data: Dict[str, Any] = {
            "contig_count": self.contig_count,
            "longest_contig": self.longest_contig,
            "total_length": self.total_length,
            "n50": self.n50,
            "completeness": round(self.completeness, 4),
            "misassembled": self.misassembled,
            "reference_length": self.reference_length,
            "circular_contigs": self.circular_contigs,
            "masked_reads": self.masked_reads,
            "contained_reads": self.contained_reads,
            "singletons": self.singletons,
            "ledger": self.ledger,
        }
        if include_timings:
            data["stage_timings"] = {k: round(v, 6) for k, v in self.stage_timings.items()}
        return data


def n50(lengths: Sequence[int]) -> int:
    """Largest L such that contigs of length >= L hold half of the assembly."""
    ordered = sorted((int(x) for x in lengths), reverse=True)
    half = sum(ordered) / 2
    running = 0
    for length in ordered:
        running += length
        if running >= half:
            return length
    return 0


def locate(contig: str, reference: str, reference_rc: str) -> Optional[int]:
    """Forward start of an exact occurrence on either strand, or None."""
    start = reference.find(contig)
    if start >= 0:
        return start
    start = reference_rc.find(contig)
    if start >= 0:
        return len(reference) - start - len(contig)
    return None


def evaluate(contigs: Sequence[str], reference: Optional[str] = None) -> QualityReport:
    """Contig statistics; with a reference also completeness and misassemblies.

    A contig matching no single reference interval on either strand is
    counted misassembled and does not add to completeness.
    """
    lengths = [len(contig) for contig in contigs]
    report = QualityReport(
        longest_contig=max(lengths, default=0),
        contig_count=len(contigs),
        total_length=sum(lengths),
        n50=n50(lengths),
    )
    if reference is None:
        return report

    report.reference_length = len(reference)
    if not reference:
        return report
    reference_rc = reverse_complement(reference)
    # Interval coverage as a difference array
    delta = np.zeros(len(reference) + 1, dtype=np.int64)
    for contig in contigs:
        start = locate(contig, reference, reference_rc) if contig else None
        if start is None:
            report.misassembled += 1
            continue
        delta[start] += 1
        delta[start + len(contig)] -= 1
    covered = int((np.cumsum(delta[:-1]) > 0).sum())
    report.completeness = 100.0 * covered / len(reference)

    logger.info(
        "evaluation: %d contigs, completeness %.2f%%, %d misassembled",
        report.contig_count,
        report.completeness,
        report.misassembled,
    )
    return report
