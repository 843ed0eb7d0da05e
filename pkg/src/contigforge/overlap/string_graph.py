"""Precomputed string graphs: the TSV edge-list bypass."""

import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from ..core.errors import ParseError
from ..grid.collectives import VirtualGrid
from ..matrix.distributed import DistSparseMatrix
from ..matrix.payloads import LABEL_DTYPE, Direction, EdgeLabel, PayloadKind
from ..sequences.store import ReadStore

logger = logging.getLogger(__name__)

TSV_COLUMNS = ("u", "v", "direction", "overhang", "pre", "post")

_DIRECTION_NAMES = {
    "forward": Direction.FORWARD,
    "both-in": Direction.BOTH_IN,
    "both-out": Direction.BOTH_OUT,
    "backward": Direction.BACKWARD,
}


def parse_direction(token: str) -> Direction:
    """A direction code given as 0-3 or by name."""
    token = token.strip().lower()
    if token in _DIRECTION_NAMES:
        return _DIRECTION_NAMES[token]
    try:
        return Direction(int(token))
    except ValueError as e:
        raise ParseError(f"unknown direction {token!r}") from e


def read_edge_list(path: Union[str, Path], store: ReadStore) -> Dict[Tuple[int, int], EdgeLabel]:
    """Parse u, v, direction, overhang, pre, post rows; a header row is optional."""
    edges: Dict[Tuple[int, int], EdgeLabel] = {}
    with open(path, "r") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t") if "\t" in line else line.split()
            if fields[0].lower() == "u":
                continue
            if len(fields) != len(TSV_COLUMNS):
                raise ParseError(f"{path}:{line_no}: expected {len(TSV_COLUMNS)} columns")
            try:
                u, v = int(fields[0]), int(fields[1])
                overhang, pre, post = (int(x) for x in fields[3:6])
            except ValueError as e:
                raise ParseError(f"{path}:{line_no}: {e}") from e
            if u not in store or v not in store or u == v:
                raise ParseError(f"{path}:{line_no}: edge ({u}, {v}) does not join two reads")

            overlap = store.length(v) - overhang
            label = EdgeLabel(
                direction=parse_direction(fields[2]),
                overhang=overhang,
                pre=pre,
                post=post,
                overlap=overlap,
                src_overhang=store.length(u) - overlap,
            )
            if not label.is_valid() or overlap <= 0:
                raise ParseError(f"{path}:{line_no}: label out of range for reads {u}, {v}")
            edges[(u, v)] = label
    return edges


def load_string_graph(
    path: Union[str, Path], grid: VirtualGrid, store: ReadStore
) -> DistSparseMatrix:
    """String matrix S from an edge list; missing reverse edges are mirrored."""
    edges = read_edge_list(path, store)
    for (u, v), label in list(edges.items()):
        if (v, u) not in edges:
            edges[(v, u)] = label.mirror()

    keys: List[Tuple[int, int]] = sorted(edges)
    rows = np.array([u for u, _ in keys], dtype=np.int64)
    cols = np.array([v for _, v in keys], dtype=np.int64)
    values = np.array([edges[key].to_record() for key in keys], dtype=LABEL_DTYPE)
    logger.info("Loaded string graph with %d edges from %s", len(keys), path)
    return DistSparseMatrix.from_triples(
        grid, len(store), len(store), PayloadKind.STRING_EDGE, rows, cols, values
    )
