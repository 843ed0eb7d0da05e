"""Nonzero payload types and their mirror maps.

A payload mirror is how a nonzero stored at (u, v) reads when viewed from (v, u).
Transposition applies it so string-edge matrices stay strand-consistent.
"""

from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np


class PayloadKind(str, Enum):
    """The payload carried by a distributed matrix."""

    BOOLEAN = "boolean"
    KMER = "kmer"
    OVERLAP = "overlap"
    STRING_EDGE = "string-edge"
    WALK = "walk"


class Direction(IntEnum):
    """Bidirected arrow pair of an edge u -> v, encoded as (u reversed, v reversed).

    FORWARD   suffix of u overlaps prefix of v
    BOTH_IN   suffix of u overlaps suffix of v (v read reverse-complemented)
    BOTH_OUT  prefix of u overlaps prefix of v (u read reverse-complemented)
    BACKWARD  prefix of u overlaps suffix of v (both reverse-complemented)
    """

    FORWARD = 0b00
    BOTH_IN = 0b01
    BOTH_OUT = 0b10
    BACKWARD = 0b11

    @classmethod
    def from_strands(cls, src_reverse: bool, dst_reverse: bool) -> "Direction":
        return cls((int(src_reverse) << 1) | int(dst_reverse))

    @property
    def src_reverse(self) -> bool:
        return bool(self.value >> 1)

    @property
    def dst_reverse(self) -> bool:
        return bool(self.value & 1)


class OverlapKind(IntEnum):
    """Whether an aligned pair is a dovetail overlap or a containment."""

    DOVETAIL = 0
    DST_CONTAINED = 1
    SRC_CONTAINED = 2


BOOL_DTYPE = np.dtype([("count", np.int64)])

KMER_DTYPE = np.dtype([("pos", np.int32), ("strand", np.int8), ("occurrences", np.int32)])

OVERLAP_DTYPE = np.dtype(
    [("count", np.int64), ("pos_u", np.int32), ("pos_v", np.int32), ("strand", np.int8)]
)

LABEL_DTYPE = np.dtype(
    [
        ("direction", np.uint8),
        ("overhang", np.int32),
        ("pre", np.int32),
        ("post", np.int32),
        ("overlap", np.int32),
        ("src_overhang", np.int32),
        ("kind", np.int8),
    ]
)

# Minimum summed overhang of two-hop walks, one slot per resulting Direction.
WALK_DTYPE = np.dtype([("best", np.int64, (4,))])
NO_WALK = np.iinfo(np.int64).max

PAYLOAD_DTYPES = {
    PayloadKind.BOOLEAN: BOOL_DTYPE,
    PayloadKind.KMER: KMER_DTYPE,
    PayloadKind.OVERLAP: OVERLAP_DTYPE,
    PayloadKind.STRING_EDGE: LABEL_DTYPE,
    PayloadKind.WALK: WALK_DTYPE,
}


@dataclass(frozen=True)
class EdgeLabel:
    """Payload of one string-graph nonzero (u, v).

    overhang is the part of v beyond the overlap; src_overhang the part of u
    before it. pre is the last index of u preceding the overlap and post the
    first index of v inside it, both in u's and v's walking orientation.
    """

    direction: Direction
    overhang: int
    pre: int
    post: int
    overlap: int
    src_overhang: int
    kind: OverlapKind = OverlapKind.DOVETAIL

    @classmethod
    def from_overlap(
        cls, src_len: int, dst_len: int, overlap: int, src_reverse: bool, dst_reverse: bool
    ) -> "EdgeLabel":
        """Label for: suffix of oriented u equals prefix of oriented v, `overlap` bases long."""
        pre = overlap if src_reverse else src_len - overlap - 1
        post = dst_len - 1 if dst_reverse else 0
        return cls(
            direction=Direction.from_strands(src_reverse, dst_reverse),
            overhang=dst_len - overlap,
            pre=pre,
            post=post,
            overlap=overlap,
            src_overhang=src_len - overlap,
        )

    @classmethod
    def from_record(cls, record: np.void) -> "EdgeLabel":
        return cls(
            direction=Direction(int(record["direction"])),
            overhang=int(record["overhang"]),
            pre=int(record["pre"]),
            post=int(record["post"]),
            overlap=int(record["overlap"]),
            src_overhang=int(record["src_overhang"]),
            kind=OverlapKind(int(record["kind"])),
        )

    def to_record(self) -> tuple:
        return (
            int(self.direction),
            self.overhang,
            self.pre,
            self.post,
            self.overlap,
            self.src_overhang,
            int(self.kind),
        )

    @property
    def src_len(self) -> int:
        return self.overlap + self.src_overhang

    @property
    def dst_len(self) -> int:
        return self.overlap + self.overhang

    def mirror(self) -> "EdgeLabel":
        """The same overlap seen from v: directions flip and swap, overhangs swap."""
        mirrored = mirror_labels(np.array([self.to_record()], dtype=LABEL_DTYPE))
        return EdgeLabel.from_record(mirrored[0])

    def is_valid(self) -> bool:
        """Index invariants of a dovetail label."""
        return 0 <= self.pre < self.src_len and 0 <= self.post < self.dst_len


def mirror_labels(values: np.ndarray) -> np.ndarray:
    """Vectorised EdgeLabel.mirror."""
    src_rev = (values["direction"] >> 1).astype(np.int32)
    dst_rev = (values["direction"] & 1).astype(np.int32)
    overlap = values["overlap"].astype(np.int32)

    out = np.empty(len(values), dtype=LABEL_DTYPE)
    out["direction"] = ((1 - dst_rev) << 1) | (1 - src_rev)
    out["overhang"] = values["src_overhang"]
    out["src_overhang"] = values["overhang"]
    out["overlap"] = overlap
    # The new source is v walked in the opposite strand.
    out["pre"] = np.where(dst_rev == 1, values["overhang"] - 1, overlap)
    out["post"] = np.where(src_rev == 1, 0, values["src_overhang"] + overlap - 1)
    kind = values["kind"]
    out["kind"] = np.where(kind == 1, 2, np.where(kind == 2, 1, kind))
    return out


def mirror_overlaps(values: np.ndarray) -> np.ndarray:
    out = values.copy()
    out["pos_u"], out["pos_v"] = values["pos_v"], values["pos_u"]
    return out


def mirror_payload(kind: PayloadKind, values: np.ndarray) -> np.ndarray:
    """Apply the mirror map of the payload kind."""
    if kind == PayloadKind.STRING_EDGE:
        return mirror_labels(values)
    if kind == PayloadKind.OVERLAP:
        return mirror_overlaps(values)
    return values.copy()
