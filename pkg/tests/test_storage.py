"""Tests for the storage module."""

import json
import tempfile
from pathlib import Path

import numpy as np

from contigforge.grid import VirtualGrid
from contigforge.matrix import DistSparseMatrix, EdgeLabel, PayloadKind
from contigforge.matrix.payloads import BOOL_DTYPE, LABEL_DTYPE
from contigforge.storage import FileManager, dump_matrix, format_matrix_market


def test_write_text_creates_parents():
    """Test that artifacts land in missing directories without temp files left behind."""
    with tempfile.TemporaryDirectory() as temp_dir:
        files = FileManager(Path(temp_dir))
        path = files.write_text(Path("out/nested/contigs.fa"), ">contig_0\nACGT\n")

        assert path == Path(temp_dir) / "out" / "nested" / "contigs.fa"
        assert path.read_text() == ">contig_0\nACGT\n"
        assert not path.with_name("contigs.fa.tmp").exists()


def test_write_json_keeps_backup():
    """Test that rewriting a report keeps the previous version as .bak."""
    with tempfile.TemporaryDirectory() as temp_dir:
        files = FileManager()
        path = Path(temp_dir) / "report.json"

        files.write_json(path, {"contig_count": 1})
        assert not path.with_name("report.json.bak").exists()

        files.write_json(path, {"contig_count": 2})
        assert json.loads(path.read_text()) == {"contig_count": 2}
        assert json.loads(path.with_name("report.json.bak").read_text()) == {"contig_count": 1}


def test_matrix_market_boolean():
    grid = VirtualGrid(4)
    values = np.zeros(2, dtype=BOOL_DTYPE)
    values["count"] = [3, 1]
    matrix = DistSparseMatrix.from_triples(
        grid, 3, 4, PayloadKind.BOOLEAN, [2, 0], [3, 1], values
    )
    lines = format_matrix_market(matrix).splitlines()
    assert lines[0] == "%%MatrixMarket matrix coordinate integer general"
    assert lines[1] == "% payload: boolean (count)"
    assert lines[2] == "3 4 2"
    assert lines[3:] == ["1 2 1", "3 4 3"]


def test_matrix_market_labels_to_file():
    grid = VirtualGrid(1)
    label = EdgeLabel.from_overlap(6, 8, 4, False, False)
    values = np.array([label.to_record()], dtype=LABEL_DTYPE)
    matrix = DistSparseMatrix.from_triples(grid, 2, 2, PayloadKind.STRING_EDGE, [0], [1], values)

    with tempfile.TemporaryDirectory() as temp_dir:
        path = dump_matrix(matrix, Path(temp_dir) / "dump" / "string_graph.mtx")
        lines = path.read_text().splitlines()

    assert lines[1].startswith("% payload: string-edge (direction overhang pre post")
    assert lines[3] == "1 2 0 4 1 0 4 2 0"
