"""Rank-local sparse blocks in CSC and doubly compressed (DCSC) form."""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from ..core.errors import DimensionMismatch, MatrixError
from ..grid.codec import pack_arrays, unpack_arrays
from .semiring import Semiring

INDEX = np.dtype(np.int64)


@dataclass(frozen=True)
class LocalSparse:
    """CSC block: col_ptr (JC), row_idx (IR) and values (VAL)."""

    n_rows: int
    n_cols: int
    col_ptr: np.ndarray
    row_idx: np.ndarray
    values: np.ndarray

    @property
    def nnz(self) -> int:
        return len(self.row_idx)

    @property
    def dtype(self) -> np.dtype:
        return self.values.dtype

    @classmethod
    def empty(cls, n_rows: int, n_cols: int, dtype: np.dtype) -> "LocalSparse":
        return cls(
            n_rows=n_rows,
            n_cols=n_cols,
            col_ptr=np.zeros(n_cols + 1, dtype=INDEX),
            row_idx=np.zeros(0, dtype=INDEX),
            values=np.zeros(0, dtype=dtype),
        )

    @classmethod
    def from_triples(
        cls,
        n_rows: int,
        n_cols: int,
        rows: np.ndarray,
        cols: np.ndarray,
        values: np.ndarray,
        semiring: Optional[Semiring] = None,
    ) -> "LocalSparse":
        """Canonical block from coordinates; duplicates are reduced with the semiring's add."""
        rows = np.asarray(rows, dtype=INDEX)
        cols = np.asarray(cols, dtype=INDEX)
        if len(rows) and (rows.min() < 0 or rows.max() >= n_rows):
            raise MatrixError("row index out of range")
        if len(cols) and (cols.min() < 0 or cols.max() >= n_cols):
            raise MatrixError("column index out of range")
        return combine(n_rows, n_cols, rows, cols, values, semiring)

    def col_indices(self) -> np.ndarray:
        """Column of every stored nonzero."""
        return np.repeat(np.arange(self.n_cols, dtype=INDEX), np.diff(self.col_ptr))

    def triples(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.row_idx.copy(), self.col_indices(), self.values.copy()

    def degrees(self) -> np.ndarray:
        """Nonzeros per column (JC[c + 1] - JC[c])."""
        return np.diff(self.col_ptr)

    def column(self, col: int) -> Tuple[np.ndarray, np.ndarray]:
        lo, hi = self.col_ptr[col], self.col_ptr[col + 1]
        return self.row_idx[lo:hi], self.values[lo:hi]

    def lookup(self, row: int, col: int) -> int:
        """Position of nonzero (row, col) in row_idx/values, or -1."""
        lo, hi = int(self.col_ptr[col]), int(self.col_ptr[col + 1])
        pos = lo + int(np.searchsorted(self.row_idx[lo:hi], row))
        if pos < hi and self.row_idx[pos] == row:
            return pos
        return -1

    def select(self, keep: np.ndarray) -> "LocalSparse":
        """Block holding only the nonzeros where keep is True."""
        keep = np.asarray(keep, dtype=bool)
        counts = np.bincount(self.col_indices()[keep], minlength=self.n_cols)
        col_ptr = np.concatenate(([0], np.cumsum(counts))).astype(INDEX)
        return LocalSparse(
            n_rows=self.n_rows,
            n_cols=self.n_cols,
            col_ptr=col_ptr,
            row_idx=self.row_idx[keep],
            values=self.values[keep],
        )

    def transposed(self, mirror) -> "LocalSparse":
        """Local transpose; mirror maps each payload to its (v, u) view."""
        rows, cols, values = self.triples()
        return combine(self.n_cols, self.n_rows, cols, rows, mirror(values), None)

    def validate(self) -> None:
        """Raise MatrixError unless the block is in canonical CSC form."""
        if len(self.col_ptr) != self.n_cols + 1 or self.col_ptr[0] != 0:
            raise MatrixError("col_ptr must have n_cols + 1 entries starting at 0")
        if self.col_ptr[-1] != self.nnz or len(self.values) != self.nnz:
            raise MatrixError("col_ptr[n_cols] must equal nnz")
        if np.any(np.diff(self.col_ptr) < 0):
            raise MatrixError("col_ptr must be non-decreasing")
        if self.nnz:
            if self.row_idx.min() < 0 or self.row_idx.max() >= self.n_rows:
                raise MatrixError("row index out of range")
            step = np.diff(self.row_idx)
            same_col = np.diff(self.col_indices()) == 0
            if np.any(step[same_col] <= 0):
                raise MatrixError("row indices must be strictly increasing within a column")

    def to_dcsc(self) -> "DcscBlock":
        counts = np.diff(self.col_ptr)
        occupied = np.flatnonzero(counts).astype(INDEX)
        col_ptr = np.concatenate(([0], np.cumsum(counts[occupied]))).astype(INDEX)
        return DcscBlock(
            n_rows=self.n_rows,
            n_cols=self.n_cols,
            col_ids=occupied,
            col_ptr=col_ptr,
            row_idx=self.row_idx.copy(),
            values=self.values.copy(),
        )


@dataclass(frozen=True)
class DcscBlock:
    """Doubly compressed block: only occupied columns carry a pointer."""

    n_rows: int
    n_cols: int
    col_ids: np.ndarray
    col_ptr: np.ndarray
    row_idx: np.ndarray
    values: np.ndarray

    @property
    def nnz(self) -> int:
        return len(self.row_idx)

    def to_csc(self) -> LocalSparse:
        counts = np.zeros(self.n_cols, dtype=INDEX)
        counts[self.col_ids] = np.diff(self.col_ptr)
        col_ptr = np.concatenate(([0], np.cumsum(counts))).astype(INDEX)
        return LocalSparse(
            self.n_rows, self.n_cols, col_ptr, self.row_idx.copy(), self.values.copy()
        )


Block = Union[LocalSparse, DcscBlock]


def pack_block(block: LocalSparse) -> Block:
    """Store hypersparse blocks (fewer than half the columns occupied) as DCSC."""
    occupied = int(np.count_nonzero(np.diff(block.col_ptr)))
    if block.n_cols and occupied * 2 < block.n_cols:
        return block.to_dcsc()
    return block


def as_csc(block: Block) -> LocalSparse:
    return block.to_csc() if isinstance(block, DcscBlock) else block


_CSC, _DCSC = 0, 1


def encode_block(block: Block) -> bytes:
    """Wire form of a block; hypersparse blocks travel without empty column pointers."""
    if isinstance(block, DcscBlock):
        header = np.array([_DCSC, block.n_rows, block.n_cols], dtype=INDEX)
        return pack_arrays(header, block.col_ids, block.col_ptr, block.row_idx, block.values)
    header = np.array([_CSC, block.n_rows, block.n_cols], dtype=INDEX)
    return pack_arrays(header, block.col_ptr, block.row_idx, block.values)


def decode_block(payload: bytes, dtype: np.dtype) -> LocalSparse:
    (header,) = unpack_arrays(payload, [INDEX])
    fmt, n_rows, n_cols = (int(x) for x in header)
    if fmt == _DCSC:
        _, col_ids, col_ptr, row_idx, values = unpack_arrays(
            payload, [INDEX, INDEX, INDEX, INDEX, dtype]
        )
        return DcscBlock(n_rows, n_cols, col_ids, col_ptr, row_idx, values).to_csc()
    _, col_ptr, row_idx, values = unpack_arrays(payload, [INDEX, INDEX, INDEX, dtype])
    return LocalSparse(n_rows, n_cols, col_ptr, row_idx, values)


def combine(
    n_rows: int,
    n_cols: int,
    rows: np.ndarray,
    cols: np.ndarray,
    values: np.ndarray,
    semiring: Optional[Semiring],
) -> LocalSparse:
    """Sort coordinates column-major and reduce duplicates with the semiring's add."""
    rows = np.asarray(rows, dtype=INDEX)
    cols = np.asarray(cols, dtype=INDEX)
    if len(rows) == 0:
        dtype = semiring.out_dtype if semiring is not None else values.dtype
        return LocalSparse.empty(n_rows, n_cols, dtype)

    tiebreak = [values[name] for name in reversed(semiring.sort_fields)] if semiring else []
    order = np.lexsort(tiebreak + [rows, cols])
    rows, cols, values = rows[order], cols[order], values[order]

    boundary = np.ones(len(rows), dtype=bool)
    boundary[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
    starts = np.flatnonzero(boundary)
    if len(starts) != len(rows):
        if semiring is None:
            raise MatrixError("duplicate coordinates without a reduction")
        values = semiring.add(values, starts)
        rows, cols = rows[starts], cols[starts]

    counts = np.bincount(cols, minlength=n_cols)
    col_ptr = np.concatenate(([0], np.cumsum(counts))).astype(INDEX)
    return LocalSparse(n_rows, n_cols, col_ptr, rows, values)


def local_spgemm(a: LocalSparse, b: LocalSparse, semiring: Semiring) -> LocalSparse:
    """Gustavson-style product: every B(k, j) meets every nonzero of A's column k."""
    if a.n_cols != b.n_rows:
        raise DimensionMismatch(f"inner dimensions differ: {a.n_cols} vs {b.n_rows}")

    per_b = np.diff(a.col_ptr)[b.row_idx]
    total = int(per_b.sum())
    if total == 0:
        return LocalSparse.empty(a.n_rows, b.n_cols, semiring.out_dtype)

    b_index = np.repeat(np.arange(b.nnz, dtype=INDEX), per_b)
    first = np.repeat(np.cumsum(per_b) - per_b, per_b)
    a_index = np.repeat(a.col_ptr[b.row_idx], per_b) + (np.arange(total, dtype=INDEX) - first)

    rows = a.row_idx[a_index]
    cols = b.col_indices()[b_index]
    a_vals = a.values[a_index]
    b_vals = b.values[b_index]

    if semiring.filter is not None:
        keep = semiring.filter(a_vals, b_vals)
        rows, cols, a_vals, b_vals = rows[keep], cols[keep], a_vals[keep], b_vals[keep]

    return combine(a.n_rows, b.n_cols, rows, cols, semiring.multiply(a_vals, b_vals), semiring)
