"""Local and block-distributed sparse matrices with semiring products."""

from .distributed import DistSparseMatrix
from .local import DcscBlock, LocalSparse, local_spgemm
from .operations import (
    drop_diagonal,
    ewise_positions,
    mask_out,
    prune_rows_cols,
    row_degree,
    spgemm,
    transpose,
)
from .payloads import Direction, EdgeLabel, OverlapKind, PayloadKind
from .semiring import CANDIDATE, COUNTING, WALK, Semiring

__all__ = [
    "DistSparseMatrix",
    "DcscBlock",
    "LocalSparse",
    "local_spgemm",
    "drop_diagonal",
    "ewise_positions",
    "mask_out",
    "prune_rows_cols",
    "row_degree",
    "spgemm",
    "transpose",
    "Direction",
    "EdgeLabel",
    "OverlapKind",
    "PayloadKind",
    "CANDIDATE",
    "COUNTING",
    "WALK",
    "Semiring",
]
