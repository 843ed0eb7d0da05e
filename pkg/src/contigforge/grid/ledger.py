"""Per-pair message and byte accounting for the virtual grid."""

from collections import defaultdict
from contextlib import contextmanager
from typing import Dict, Iterator, List, Optional, Tuple

LedgerKey = Tuple[str, str, int, int]


class CommLedger:
    """Counts messages and bytes sent and delivered between ranks.

    Every entry is tagged with the pipeline phase active at send time and the
    collective that produced it. Counters only grow.
    """

    def __init__(self) -> None:
        self._msgs: Dict[LedgerKey, int] = defaultdict(int)
        self._bytes_sent: Dict[LedgerKey, int] = defaultdict(int)
        self._bytes_delivered: Dict[LedgerKey, int] = defaultdict(int)
        self._phase = "default"

    @property
    def current_phase(self) -> str:
        return self._phase

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        """Tag all traffic inside the block with the given phase name."""
        previous, self._phase = self._phase, name
        try:
            yield
        finally:
            self._phase = previous

    def record_send(self, kind: str, src: int, dst: int, nbytes: int, chunks: int) -> None:
        key = (self._phase, kind, src, dst)
        self._msgs[key] += chunks
        self._bytes_sent[key] += nbytes

    def record_delivery(self, kind: str, src: int, dst: int, nbytes: int) -> None:
        self._bytes_delivered[(self._phase, kind, src, dst)] += nbytes

    def _select(
        self, counter: Dict[LedgerKey, int], phase: Optional[str], kind: Optional[str]
    ) -> Dict[Tuple[int, int], int]:
        result: Dict[Tuple[int, int], int] = defaultdict(int)
        for (entry_phase, entry_kind, src, dst), value in counter.items():
            if phase is not None and entry_phase != phase:
                continue
            if kind is not None and entry_kind != kind:
                continue
            result[(src, dst)] += value
        return dict(result)

    def msgs_sent(
        self, phase: Optional[str] = None, kind: Optional[str] = None
    ) -> Dict[Tuple[int, int], int]:
        """Messages per (src, dst), optionally restricted to a phase and collective."""
        return self._select(self._msgs, phase, kind)

    def bytes_sent(
        self, phase: Optional[str] = None, kind: Optional[str] = None
    ) -> Dict[Tuple[int, int], int]:
        """Bytes per (src, dst), optionally restricted to a phase and collective."""
        return self._select(self._bytes_sent, phase, kind)

    def bytes_delivered(
        self, phase: Optional[str] = None, kind: Optional[str] = None
    ) -> Dict[Tuple[int, int], int]:
        return self._select(self._bytes_delivered, phase, kind)

    def total_msgs(self, phase: Optional[str] = None, kind: Optional[str] = None) -> int:
        return sum(self.msgs_sent(phase, kind).values())

    def total_bytes(self, phase: Optional[str] = None, kind: Optional[str] = None) -> int:
        return sum(self.bytes_sent(phase, kind).values())

    def is_conserved(self) -> bool:
        """Total bytes sent equals total bytes delivered."""
        return sum(self._bytes_sent.values()) == sum(self._bytes_delivered.values())

    def phases(self) -> List[str]:
        return sorted({key[0] for key in self._msgs})

    def phase_bytes(self) -> Dict[str, int]:
        """Bytes sent per phase, in phase-name order."""
        return {phase: self.total_bytes(phase=phase) for phase in self.phases()}

    def snapshot(self) -> List[Tuple[LedgerKey, int, int]]:
        """Sorted (key, msgs, bytes) triples; equal for equal runs."""
        return [(key, self._msgs[key], self._bytes_sent[key]) for key in sorted(self._msgs)]

    def to_tsv(self) -> str:
        """Ledger dump aggregated per pair: src, dst, msgs, bytes."""
        msgs = self.msgs_sent()
        sent = self.bytes_sent()
        lines = ["src\tdst\tmsgs\tbytes"]
        for src, dst in sorted(msgs):
            lines.append(f"{src}\t{dst}\t{msgs[(src, dst)]}\t{sent[(src, dst)]}")
        return "\n".join(lines) + "\n"

    def summary(self) -> Dict:
        """Totals for the run report."""
        return {
            "total_msgs": self.total_msgs(),
            "total_bytes": self.total_bytes(),
            "conserved": self.is_conserved(),
            "bytes_per_phase": self.phase_bytes(),
        }
