"""Packed read storage with inclusive forward and reverse-complement slicing."""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from Bio.Seq import Seq

from ..constants import NUCLEOTIDES
from ..core.errors import AlphabetError, OutOfBounds, SequenceError
from ..grid.codec import pack_arrays, unpack_arrays

COMPLEMENT = np.zeros(256, dtype=np.uint8)
for _base, _pair in zip(b"ACGT", b"TGCA"):
    COMPLEMENT[_base] = _pair


def check_alphabet(sequence: str, record: Optional[str] = None) -> None:
    """Raise AlphabetError if the sequence holds anything but A, C, G, T."""
    bad = set(sequence) - set(NUCLEOTIDES)
    if bad:
        where = f" in record '{record}'" if record is not None else ""
        raise AlphabetError(f"non-ACGT symbols {sorted(bad)}{where}", record=record)


def reverse_complement(sequence: str) -> str:
    """Reverse the sequence and swap A<->T, C<->G."""
    check_alphabet(sequence)
    return str(Seq(sequence).reverse_complement())


def reverse_complement_codes(codes: np.ndarray) -> np.ndarray:
    return COMPLEMENT[codes[::-1]]


@dataclass(frozen=True)
class ReadStore:
    """Reads packed into one byte buffer, addressed by global read id.

    ids are kept in ascending order; offsets and lengths locate each read in
    the buffer.
    """

    buffer: np.ndarray
    offsets: np.ndarray
    lengths: np.ndarray
    ids: np.ndarray
    names: Tuple[str, ...]

    @classmethod
    def empty(cls) -> "ReadStore":
        return cls.from_sequences([])

    @classmethod
    def from_sequences(
        cls,
        sequences: Sequence[str],
        ids: Optional[Iterable[int]] = None,
        names: Optional[Sequence[str]] = None,
    ) -> "ReadStore":
        """Pack sequences; ids default to 0..n-1, names to the ids."""
        ids_array = (
            np.arange(len(sequences), dtype=np.int64)
            if ids is None
            else np.fromiter(ids, dtype=np.int64, count=len(sequences))
        )
        if names is None:
            names = [str(read_id) for read_id in ids_array]
        for sequence, name in zip(sequences, names):
            check_alphabet(sequence, name)

        lengths = np.fromiter((len(s) for s in sequences), dtype=np.int64, count=len(sequences))
        offsets = np.concatenate(([0], np.cumsum(lengths)[:-1])).astype(np.int64)
        buffer = np.frombuffer("".join(sequences).encode("ascii"), dtype=np.uint8).copy()
        store = cls(buffer, offsets[: len(sequences)], lengths, ids_array, tuple(names))
        return store.sorted()

    def sorted(self) -> "ReadStore":
        """Same reads ordered by id."""
        if len(self.ids) < 2 or np.all(np.diff(self.ids) > 0):
            return self
        order = np.argsort(self.ids, kind="stable")
        return self.take(order)

    def take(self, positions: np.ndarray) -> "ReadStore":
        """Store of the reads at the given local positions, in that order."""
        positions = np.asarray(positions, dtype=np.int64)
        pieces = [
            self.buffer[self.offsets[p] : self.offsets[p] + self.lengths[p]] for p in positions
        ]
        lengths = self.lengths[positions]
        offsets = np.concatenate(([0], np.cumsum(lengths)[:-1])).astype(np.int64)
        buffer = np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.uint8)
        return ReadStore(
            buffer=buffer,
            offsets=offsets[: len(positions)],
            lengths=lengths,
            ids=self.ids[positions],
            names=tuple(self.names[p] for p in positions),
        )

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, read_id: int) -> bool:
        pos = int(np.searchsorted(self.ids, read_id))
        return pos < len(self.ids) and self.ids[pos] == read_id

    @property
    def total_bases(self) -> int:
        return int(self.lengths.sum())

    def position(self, read_id: int) -> int:
        """Local position of a resident read."""
        pos = int(np.searchsorted(self.ids, read_id))
        if pos >= len(self.ids) or self.ids[pos] != read_id:
            raise SequenceError(f"read {read_id} is not resident")
        return pos

    def length(self, read_id: int) -> int:
        return int(self.lengths[self.position(read_id)])

    def name(self, read_id: int) -> str:
        return self.names[self.position(read_id)]

    def codes(self, read_id: int) -> np.ndarray:
        """Read-only view of a read's bytes inside the buffer."""
        pos = self.position(read_id)
        start = int(self.offsets[pos])
        return self.buffer[start : start + int(self.lengths[pos])]

    def sequence(self, read_id: int) -> str:
        return self.codes(read_id).tobytes().decode("ascii")

    def slice(self, read_id: int, i: int, j: int) -> str:
        """Inclusive l[i:j]; when i > j the reverse complement read from i down to j."""
        codes = self.codes(read_id)
        n = len(codes)
        if not (0 <= i < n and 0 <= j < n):
            raise OutOfBounds(f"slice [{i}:{j}] outside read {read_id} of length {n}")
        if i <= j:
            return codes[i : j + 1].tobytes().decode("ascii")
        return reverse_complement_codes(codes[j : i + 1]).tobytes().decode("ascii")

    def oriented_slice(self, read_id: int, i: int, j: int, reverse: bool) -> str:
        """Slice walked in a fixed orientation; a range running against it is empty."""
        if (j < i) != reverse and i != j:
            return ""
        if i == j and reverse:
            return self.slice(read_id, i, i).translate(str.maketrans("ACGT", "TGCA"))
        return self.slice(read_id, i, j)

    def items(self) -> List[Tuple[int, str]]:
        """(id, sequence) pairs in id order."""
        return [(int(read_id), self.sequence(int(read_id))) for read_id in self.ids]

    def to_bytes(self) -> bytes:
        names = "\n".join(self.names).encode("utf-8")
        name_codes = np.frombuffer(names, dtype=np.uint8)
        return pack_arrays(self.ids, self.lengths, self.buffer, name_codes)

    @classmethod
    def from_bytes(cls, payload: bytes) -> "ReadStore":
        if not payload:
            return cls.empty()
        ids, lengths, buffer, names = unpack_arrays(
            payload,
            [np.dtype(np.int64), np.dtype(np.int64), np.dtype(np.uint8), np.dtype(np.uint8)],
        )
        offsets = np.concatenate(([0], np.cumsum(lengths)[:-1])).astype(np.int64)
        decoded = names.tobytes().decode("utf-8").split("\n") if len(ids) else []
        return cls(buffer, offsets[: len(ids)], lengths, ids, tuple(decoded))

    @classmethod
    def concat(cls, stores: Sequence["ReadStore"]) -> "ReadStore":
        """Union of disjoint stores, ordered by id."""
        stores = [store for store in stores if len(store)]
        if not stores:
            return cls.empty()
        lengths = np.concatenate([s.lengths for s in stores])
        offsets = np.concatenate(([0], np.cumsum(lengths)[:-1])).astype(np.int64)
        merged = cls(
            buffer=np.concatenate([s.buffer for s in stores]),
            offsets=offsets,
            lengths=lengths,
            ids=np.concatenate([s.ids for s in stores]),
            names=tuple(name for s in stores for name in s.names),
        )
        return merged.sorted()
