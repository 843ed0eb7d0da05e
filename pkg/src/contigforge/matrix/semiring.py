"""Semirings for sparse products: multiply, add and an optional product filter.

multiply and filter act element-wise on the payload arrays of the two operands.
add reduces runs of equal coordinates: it receives the values sorted by
(col, row, *sort_fields) and the start offset of each run.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .payloads import (
    BOOL_DTYPE,
    NO_WALK,
    OVERLAP_DTYPE,
    PAYLOAD_DTYPES,
    WALK_DTYPE,
    OverlapKind,
    PayloadKind,
)

Multiply = Callable[[np.ndarray, np.ndarray], np.ndarray]
Add = Callable[[np.ndarray, np.ndarray], np.ndarray]
Filter = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Semiring:
    name: str
    kind: PayloadKind
    multiply: Multiply
    add: Add
    filter: Optional[Filter] = None
    sort_fields: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def out_dtype(self) -> np.dtype:
        return PAYLOAD_DTYPES[self.kind]


def _sum_counts(values: np.ndarray, starts: np.ndarray) -> np.ndarray:
    out = values[starts].copy()
    out["count"] = np.add.reduceat(values["count"], starts)
    return out


def _count_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.empty(len(a), dtype=BOOL_DTYPE)
    out["count"] = a["count"] * b["count"]
    return out


COUNTING = Semiring(
    name="counting",
    kind=PayloadKind.BOOLEAN,
    multiply=_count_multiply,
    add=_sum_counts,
)


def _seed_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """One shared k-mer: a holds the k-mer in read u, b the same k-mer in read v."""
    out = np.empty(len(a), dtype=OVERLAP_DTYPE)
    out["count"] = 1
    out["pos_u"] = a["pos"]
    out["pos_v"] = b["pos"]
    out["strand"] = a["strand"] ^ b["strand"]
    return out


# Shared k-mer count; the representative seed is the smallest (pos_u, pos_v).
CANDIDATE = Semiring(
    name="candidate",
    kind=PayloadKind.OVERLAP,
    multiply=_seed_multiply,
    add=_sum_counts,
    sort_fields=("pos_u", "pos_v"),
)


def _walk_filter(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """i -> j -> k is valid when j is traversed in one orientation by both edges."""
    enter_rev = a["direction"] & 1
    leave_rev = b["direction"] >> 1
    dovetail = (a["kind"] == OverlapKind.DOVETAIL) & (b["kind"] == OverlapKind.DOVETAIL)
    return (enter_rev == leave_rev) & dovetail


def _walk_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.empty(len(a), dtype=WALK_DTYPE)
    out["best"] = NO_WALK
    direction = ((a["direction"] >> 1).astype(np.int64) << 1) | (b["direction"] & 1)
    total = a["overhang"].astype(np.int64) + b["overhang"].astype(np.int64)
    out["best"][np.arange(len(a)), direction] = total
    return out


def _walk_add(values: np.ndarray, starts: np.ndarray) -> np.ndarray:
    out = np.empty(len(starts), dtype=WALK_DTYPE)
    out["best"] = np.minimum.reduceat(values["best"], starts, axis=0)
    return out


# Shortest two-hop walk i -> j -> k per resulting direction code.
WALK = Semiring(
    name="walk",
    kind=PayloadKind.WALK,
    multiply=_walk_multiply,
    add=_walk_add,
    filter=_walk_filter,
)

