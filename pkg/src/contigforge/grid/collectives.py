"""Deterministic virtual grid with ledger-accounted collectives.

Each collective is one barrier-aligned superstep: every rank's contribution is
supplied up front, messages are exchanged in a fixed order, and results for all
ranks are returned together. Cross-rank data is only visible through these calls.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Mapping, Sequence, TypeVar

import numpy as np

from ..constants import DEFAULT_MAX_MSG_BYTES
from ..core.errors import GridError, LengthMismatch
from .ledger import CommLedger
from .topology import GridTopology, grid_create

logger = logging.getLogger(__name__)

T = TypeVar("T")


class VirtualGrid:
    """P virtual ranks on a sqrt(P) x sqrt(P) grid sharing one communication ledger."""

    def __init__(self, p_total: int, max_msg_bytes: int = DEFAULT_MAX_MSG_BYTES, workers: int = 1):
        if max_msg_bytes < 1:
            raise GridError(f"max_msg_bytes must be >= 1, got {max_msg_bytes}")
        self.topology: GridTopology = grid_create(p_total)
        self.ledger = CommLedger()
        self.max_msg_bytes = max_msg_bytes
        self.workers = workers
        self.superstep = 0

    @property
    def p_total(self) -> int:
        return self.topology.p_total

    @property
    def side(self) -> int:
        return self.topology.side

    def phase(self, name: str):
        """Context manager tagging ledger traffic with a pipeline phase."""
        return self.ledger.phase(name)

    def map_ranks(self, fn: Callable[..., T], *per_rank_args: Sequence) -> List[T]:
        """Run rank-local work for every rank; results are returned in rank order."""
        columns = list(zip(*per_rank_args)) if per_rank_args else [() for _ in self.topology.ranks]
        if self.workers <= 1:
            return [fn(*args) for args in columns]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(lambda args: fn(*args), columns))

    def _begin(self, kind: str) -> None:
        self.superstep += 1
        logger.debug("superstep %d: %s (%s)", self.superstep, kind, self.ledger.current_phase)

    def _transfer(self, kind: str, src: int, dst: int, payload: bytes) -> bytes:
        """Move one message, split into max_msg_bytes chunks; local copies are free."""
        if src == dst:
            return payload

        size = self.max_msg_bytes
        chunks = [payload[i : i + size] for i in range(0, len(payload), size)] or [b""]
        self.ledger.record_send(kind, src, dst, len(payload), len(chunks))

        received = b"".join(chunks)
        self.ledger.record_delivery(kind, src, dst, len(received))
        return received

    def _check_per_rank(self, values: Sequence, what: str) -> None:
        if len(values) != self.p_total:
            raise GridError(f"{what}: expected {self.p_total} per-rank entries, got {len(values)}")

    # Row / column collectives

    def row_allgather(self, row: int, contributions: Sequence[bytes]) -> List[bytes]:
        """Ring allgather across one grid row; returns the contributions ordered by column.

        Every rank of the row ends up holding the same list. The ring sends
        side * (side - 1) messages for the row.
        """
        side = self.side
        if len(contributions) != side:
            raise GridError(
                f"row_allgather: expected {side} contributions, got {len(contributions)}"
            )
        self._begin("row_allgather")

        ranks = self.topology.row_ranks(row)
        holdings: List[Dict[int, bytes]] = [{col: contributions[col]} for col in range(side)]
        for step in range(side - 1):
            for col in range(side):
                origin = (col - step) % side
                dst_col = (col + 1) % side
                data = self._transfer(
                    "row_allgather", ranks[col], ranks[dst_col], holdings[col][origin]
                )
                holdings[dst_col][origin] = data

        gathered = [holdings[0][col] for col in range(side)]
        for col in range(1, side):
            if [holdings[col][origin] for origin in range(side)] != gathered:
                raise GridError(f"row_allgather: row {row} ranks disagree")
        return gathered

    def allgather_rows(self, payloads: Sequence[bytes]) -> List[List[bytes]]:
        """Row allgather on every grid row at once; entry r is what rank r observes."""
        self._check_per_rank(payloads, "allgather_rows")
        observed: List[List[bytes]] = [[] for _ in self.topology.ranks]
        for row in range(self.side):
            ranks = self.topology.row_ranks(row)
            gathered = self.row_allgather(row, [payloads[rank] for rank in ranks])
            for rank in ranks:
                observed[rank] = list(gathered)
        return observed

    def transpose_exchange(self, payloads: Sequence[bytes]) -> List[bytes]:
        """Rank (i, j) receives the payload of rank (j, i); diagonal ranks keep their own."""
        self._check_per_rank(payloads, "transpose_exchange")
        self._begin("transpose")
        received: List[bytes] = [b""] * self.p_total
        for rank in self.topology.ranks:
            partner = self.topology.transpose_rank(rank)
            received[partner] = self._transfer("transpose", rank, partner, payloads[rank])
        return received

    def row_broadcast(self, row: int, root_col: int, payload: bytes) -> List[bytes]:
        """Broadcast from (row, root_col) to the row; result ordered by column."""
        self._begin("row_broadcast")
        ranks = self.topology.row_ranks(row)
        root = ranks[root_col]
        return [self._transfer("row_broadcast", root, rank, payload) for rank in ranks]

    def col_broadcast(self, col: int, root_row: int, payload: bytes) -> List[bytes]:
        """Broadcast from (root_row, col) to the column; result ordered by row."""
        self._begin("col_broadcast")
        ranks = self.topology.col_ranks(col)
        root = ranks[root_row]
        return [self._transfer("col_broadcast", root, rank, payload) for rank in ranks]

    # Whole-grid collectives

    def alltoall(self, outboxes: Sequence[Mapping[int, bytes]]) -> List[Dict[int, bytes]]:
        """Personalized all-to-all. Inbox q maps each sending rank p to its message.

        Empty or missing outbox entries are not sent.
        """
        self._check_per_rank(outboxes, "alltoall")
        self._begin("alltoall")
        inboxes: List[Dict[int, bytes]] = [{} for _ in self.topology.ranks]
        for src in self.topology.ranks:
            for dst in sorted(outboxes[src]):
                if not 0 <= dst < self.p_total:
                    raise GridError(f"alltoall: rank {src} addressed invalid rank {dst}")
                payload = outboxes[src][dst]
                if not payload:
                    continue
                inboxes[dst][src] = self._transfer("alltoall", src, dst, payload)
        return inboxes

    def reduce_scatter(
        self, partials: Sequence[np.ndarray], bounds: np.ndarray
    ) -> List[np.ndarray]:
        """Element-wise sum of per-rank vectors; rank r keeps [bounds[r], bounds[r+1]).

        All-zero slices carry no contribution and are not sent.
        """
        self._check_per_rank(partials, "reduce_scatter")
        lengths = {len(partial) for partial in partials}
        if len(lengths) > 1:
            raise LengthMismatch(
                f"reduce_scatter: partial vectors differ in length {sorted(lengths)}"
            )
        n = lengths.pop() if lengths else 0
        if int(bounds[-1]) != n:
            raise LengthMismatch(f"reduce_scatter: ownership covers {bounds[-1]} of {n} entries")
        self._begin("reduce_scatter")

        dtype = np.result_type(*[np.asarray(partial).dtype for partial in partials])
        owned: List[np.ndarray] = []
        for dst in self.topology.ranks:
            lo, hi = int(bounds[dst]), int(bounds[dst + 1])
            total = np.zeros(hi - lo, dtype=dtype)
            for src in self.topology.ranks:
                piece = np.ascontiguousarray(np.asarray(partials[src], dtype=dtype)[lo:hi])
                if src != dst and not piece.any():
                    continue
                data = self._transfer("reduce_scatter", src, dst, piece.tobytes())
                total += np.frombuffer(data, dtype=dtype)
            owned.append(total)
        return owned

    def broadcast(self, root: int, payload: bytes) -> List[bytes]:
        """Root sends the payload to every rank."""
        self._begin("broadcast")
        return [self._transfer("broadcast", root, rank, payload) for rank in self.topology.ranks]

    def gather(self, root: int, payloads: Sequence[bytes]) -> List[bytes]:
        """Root collects one payload per rank, in rank order."""
        self._check_per_rank(payloads, "gather")
        self._begin("gather")
        return [
            self._transfer("gather", rank, root, payloads[rank]) for rank in self.topology.ranks
        ]

    def allreduce_sum(self, values: Sequence[int]) -> int:
        """Sum of one integer per rank, made known to every rank."""
        gathered = self.gather(0, [np.int64(value).tobytes() for value in values])
        total = int(sum(int(np.frombuffer(item, dtype=np.int64)[0]) for item in gathered))
        self.broadcast(0, np.int64(total).tobytes())
        return total
