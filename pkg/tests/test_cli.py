"""Tests for the command line interface and its exit codes."""

import json
import tempfile
from pathlib import Path

import pytest

from contigforge.cli import build_parser, main
from contigforge.constants import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_STAGE_FAILURE
from contigforge.sequences import fasta_read

FIXTURE_READS = ">r0\nAGAACT\n>r1\nAACTGAAG\n>r2\nTGAAGAA\n"
FIXTURE_GRAPH = "0\t1\t0\t4\t1\t0\n1\t2\t0\t3\t4\t2\n"


def exit_code(argv) -> int:
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    return excinfo.value.code


def test_parser_defaults():
    args = build_parser().parse_args([])
    assert args.command == "run"
    assert args.emit_singletons is None
    assert args.min_overlap is None


def test_run_requires_input(capsys):
    assert exit_code(["run"]) == EXIT_CONFIG_ERROR
    assert "--input is required" in capsys.readouterr().out


def test_invalid_grid_is_a_config_error():
    with tempfile.TemporaryDirectory() as temp_dir:
        reads = Path(temp_dir) / "reads.fa"
        reads.write_text(FIXTURE_READS)
        assert exit_code(["run", "--input", str(reads), "--grid", "12"]) == EXIT_CONFIG_ERROR
        assert exit_code(["run", "--input", str(reads), "-k", "4"]) == EXIT_CONFIG_ERROR


def test_missing_config_file():
    assert exit_code(["run", "--config", "/nonexistent/config.yaml"]) == EXIT_CONFIG_ERROR


def test_run_string_graph():
    with tempfile.TemporaryDirectory() as temp_dir:
        base = Path(temp_dir)
        (base / "reads.fa").write_text(FIXTURE_READS)
        (base / "graph.tsv").write_text(FIXTURE_GRAPH)
        argv = [
            "run",
            "--input", str(base / "reads.fa"),
            "--string-graph", str(base / "graph.tsv"),
            "--grid", "4",
            "-k", "3",
            "-t", "3",
            "--out", str(base / "contigs.fa"),
            "--report", str(base / "report.json"),
        ]  # fmt: skip
        assert exit_code(argv) == EXIT_OK
        contigs = fasta_read(base / "contigs.fa")
        assert [seq for _, seq in contigs.items()] == ["AGAACTGAAGAA"]
        assert json.loads((base / "report.json").read_text())["contig_count"] == 1


def test_bad_reads_fail_the_run(capsys):
    with tempfile.TemporaryDirectory() as temp_dir:
        reads = Path(temp_dir) / "reads.fa"
        reads.write_text(">r0\nACGTNNACGT\n")
        argv = ["run", "--input", str(reads), "-k", "3", "-t", "3"]
        assert exit_code(argv) == EXIT_STAGE_FAILURE
    assert "Run failed" in capsys.readouterr().out


def test_synth_then_eval():
    with tempfile.TemporaryDirectory() as temp_dir:
        out_dir = Path(temp_dir) / "synth"
        argv = [
            "synth",
            "--genome-length", "300",
            "--read-length", "50",
            "--coverage", "4",
            "--seed", "2",
            "--out-dir", str(out_dir),
        ]  # fmt: skip
        assert exit_code(argv) == EXIT_OK
        assert len(fasta_read(out_dir / "reads.fa")) == 24
        assert (out_dir / "layout.tsv").read_text().startswith("read\tstart\tstrand")

        reference = fasta_read(out_dir / "reference.fa").sequence(0)
        contigs = Path(temp_dir) / "contigs.fa"
        contigs.write_text(f">contig_0\n{reference[:150]}\n")
        report = Path(temp_dir) / "eval.json"
        argv = [
            "eval",
            "--input", str(contigs),
            "--reference", str(out_dir / "reference.fa"),
            "--report", str(report),
        ]  # fmt: skip
        assert exit_code(argv) == EXIT_OK
        assert json.loads(report.read_text())["completeness"] == 50.0


def test_eval_requires_reference():
    with tempfile.TemporaryDirectory() as temp_dir:
        contigs = Path(temp_dir) / "contigs.fa"
        contigs.write_text(">c\nACGT\n")
        assert exit_code(["eval", "--input", str(contigs)]) == EXIT_CONFIG_ERROR


def test_init_config():
    with tempfile.TemporaryDirectory() as temp_dir:
        path = Path(temp_dir) / "config.yaml"
        assert exit_code(["init-config", "--config", str(path)]) == EXIT_OK
        assert path.exists()


def test_unwritable_output_fails_the_run(capsys):
    with tempfile.TemporaryDirectory() as temp_dir:
        base = Path(temp_dir)
        (base / "reads.fa").write_text(FIXTURE_READS)
        (base / "graph.tsv").write_text(FIXTURE_GRAPH)
        argv = [
            "run",
            "--input", str(base / "reads.fa"),
            "--string-graph", str(base / "graph.tsv"),
            "-k", "3",
            "-t", "3",
            "--out", str(base / "reads.fa" / "contigs.fa"),
        ]  # fmt: skip
        assert exit_code(argv) == EXIT_STAGE_FAILURE
    output = capsys.readouterr().out
    assert "Run failed" in output
    assert "Traceback" not in output
