"""Run artifacts: contig FASTA, JSON and text reports, ledger and chain dumps."""

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence

from ..core.config import PipelineConfig
from ..sequences.fasta import format_contigs
from ..storage import FileManager, dump_matrix
from .evaluate import QualityReport

if TYPE_CHECKING:
    from ..contig import ContigChain
    from .runner import PipelineResult

logger = logging.getLogger(__name__)

CHAIN_COLUMNS = ("contig", "rank", "reads", "orientations", "pre_post")


def format_report_text(report: QualityReport) -> str:
    """Human-readable summary written next to the JSON report."""
    lines = [
        "=== ASSEMBLY REPORT ===",
        f"Contigs:            {report.contig_count}",
        f"Longest contig:     {report.longest_contig}",
        f"Total length:       {report.total_length}",
        f"N50:                {report.n50}",
    ]
    if report.reference_length is not None:
        lines.append(f"Reference length:   {report.reference_length}")
        lines.append(f"Completeness:       {report.completeness:.2f}%")
        lines.append(f"Misassembled:       {report.misassembled}")
    lines.extend(
        [
            f"Circular contigs:   {report.circular_contigs}",
            f"Masked reads:       {report.masked_reads}",
            f"Contained reads:    {report.contained_reads}",
            f"Singletons:         {report.singletons}",
        ]
    )
    if report.ledger:
        lines.append("")
        lines.append("=== COMMUNICATION ===")
        lines.append(f"Messages:           {report.ledger.get('total_msgs', 0)}")
        lines.append(f"Bytes:              {report.ledger.get('total_bytes', 0)}")
        for phase, nbytes in report.ledger.get("bytes_per_phase", {}).items():
            lines.append(f"  {phase:<20}{nbytes}")
    if report.stage_timings:
        lines.append("")
        lines.append("=== STAGE TIMINGS (s) ===")
        for stage, seconds in report.stage_timings.items():
            lines.append(f"  {stage:<20}{seconds:.3f}")
    return "\n".join(lines) + "\n"


def chains_tsv(chains: Sequence["ContigChain"]) -> str:
    """contig, rank, ordered read ids, orientations, pre/post per step."""
    lines = ["\t".join(CHAIN_COLUMNS)]
    lines.extend("\t".join(chain.to_row()) for chain in chains)
    return "\n".join(lines) + "\n"


def write_outputs(
    result: "PipelineResult", config: PipelineConfig, files: Optional[FileManager] = None
) -> Dict[str, Path]:
    """Write every artifact whose path is configured; returns what was written."""
    files = files or FileManager()
    written: Dict[str, Path] = {}

    if config.output_path is not None:
        written["contigs"] = files.write_text(config.output_path, format_contigs(result.contigs()))
    if config.report_path is not None:
        report_path = Path(config.report_path)
        written["report"] = files.write_json(report_path, result.report.to_dict())
        written["report_text"] = files.write_text(
            report_path.with_suffix(".txt"), format_report_text(result.report)
        )
    if config.ledger_path is not None:
        written["ledger"] = files.write_text(config.ledger_path, result.ledger.to_tsv())
    if config.chains_path is not None:
        written["chains"] = files.write_text(config.chains_path, chains_tsv(result.chains))
    if config.dump_dir is not None:
        for name, matrix in result.matrices.items():
            written[name] = dump_matrix(matrix, Path(config.dump_dir) / f"{name}.mtx", files)

    for name, path in written.items():
        logger.info("wrote %s to %s", name, path)
    return written


def summary_lines(result: "PipelineResult") -> List[str]:
    """Short console summary for the CLI."""
    report = result.report
    lines = [
        f"Contigs: {report.contig_count} (longest {report.longest_contig} bases)",
        f"Communication: {report.ledger.get('total_msgs', 0)} messages, "
        f"{report.ledger.get('total_bytes', 0)} bytes",
    ]
    if report.reference_length is not None:
        lines.append(
            f"Completeness: {report.completeness:.2f}%, misassembled: {report.misassembled}"
        )
    return lines
