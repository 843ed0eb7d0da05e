"""Candidate overlaps: pairs of reads that share at least one reliable k-mer."""

import logging

from ..matrix.distributed import DistSparseMatrix
from ..matrix.operations import drop_diagonal, spgemm, transpose
from ..matrix.semiring import CANDIDATE
from .kmers import KmerIndex

logger = logging.getLogger(__name__)


def candidate_overlaps(index: KmerIndex) -> DistSparseMatrix:
    """C = A . A^T with the seed semiring, diagonal removed.

    C(u, v) counts the k-mers shared by u and v and keeps the seed with the
    smallest (pos_u, pos_v) together with the strand relation of the two reads.
    """
    a = index.matrix
    candidates = drop_diagonal(spgemm(a, transpose(a), CANDIDATE))
    logger.info("candidate overlaps: %d", candidates.nnz)
    return candidates
