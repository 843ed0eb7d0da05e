"""Branch removal: mask vertices of degree three or more."""

import logging
from typing import Optional

import numpy as np

from ..grid.vector import DistVector
from ..matrix.distributed import DistSparseMatrix
from ..matrix.operations import prune_rows_cols, row_degree

logger = logging.getLogger(__name__)

BRANCH_DEGREE = 3


def branching_vertices(string_graph: DistSparseMatrix) -> DistVector:
    """Indicator (1 = branching) of vertices with at least three neighbours."""
    degrees = row_degree(string_graph)
    parts = [(part >= BRANCH_DEGREE).astype(np.int8) for part in degrees.parts]
    return DistVector.from_parts(string_graph.grid, degrees.n, parts)


def branch_removal(
    string_graph: DistSparseMatrix, branching: Optional[DistVector] = None
) -> DistSparseMatrix:
    """L: the string matrix with the rows and columns of branching vertices cleared."""
    if branching is None:
        branching = branching_vertices(string_graph)
    linear = prune_rows_cols(string_graph, branching)
    logger.info(
        "branch removal: %d branching vertices masked, %d -> %d edges",
        int(sum(int(part.sum()) for part in branching.parts)),
        string_graph.nnz,
        linear.nnz,
    )
    return linear
