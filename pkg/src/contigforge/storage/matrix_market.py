"""Matrix Market coordinate dumps of distributed matrices."""

from pathlib import Path
from typing import Optional

from ..matrix.distributed import DistSparseMatrix
from .file_manager import FileManager


def format_matrix_market(matrix: DistSparseMatrix) -> str:
    """1-based coordinate listing; every payload field becomes one value column."""
    rows, cols, values = matrix.triples()
    fields = values.dtype.names or ()
    lines = [
        "%%MatrixMarket matrix coordinate integer general",
        f"% payload: {matrix.kind.value} ({' '.join(fields)})",
        f"{matrix.n_rows} {matrix.n_cols} {len(rows)}",
    ]
    for row, col, value in zip(rows, cols, values):
        columns = []
        for name in fields:
            item = value[name]
            columns.extend(str(int(x)) for x in (item.ravel() if item.ndim else [item]))
        lines.append(" ".join([str(int(row) + 1), str(int(col) + 1), *columns]))
    return "\n".join(lines) + "\n"


def dump_matrix(
    matrix: DistSparseMatrix, path: Path, files: Optional[FileManager] = None
) -> Path:
    return (files or FileManager()).write_text(path, format_matrix_market(matrix))
