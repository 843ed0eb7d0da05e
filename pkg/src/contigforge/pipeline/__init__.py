"""Pipeline driver, synthetic data, evaluation and reporting."""

from .evaluate import QualityReport, evaluate, locate, n50
from .report import chains_tsv, format_report_text, summary_lines, write_outputs
from .runner import STAGES, PipelineResult, PipelineRunner, run_pipeline
from .synth import (
    ReadPlacement,
    coverage_gaps,
    expected_reads,
    genome_span,
    layout_tsv,
    synth_genome,
    synth_reads,
)

__all__ = [
    "QualityReport",
    "evaluate",
    "locate",
    "n50",
    "chains_tsv",
    "format_report_text",
    "summary_lines",
    "write_outputs",
    "STAGES",
    "PipelineResult",
    "PipelineRunner",
    "run_pipeline",
    "ReadPlacement",
    "coverage_gaps",
    "expected_reads",
    "genome_span",
    "layout_tsv",
    "synth_genome",
    "synth_reads",
]
