"""String graph construction: k-mers, candidates, alignment, containment and reduction."""

from .alignment import align_filter, align_pair, contained_reads, prune_contained, score_overlap
from .candidates import candidate_overlaps
from .kmers import KmerIndex, kmer_codes, kmer_matrix
from .reduction import mark_transitive, transitive_reduction
from .string_graph import load_string_graph, read_edge_list

__all__ = [
    "align_filter",
    "align_pair",
    "contained_reads",
    "prune_contained",
    "score_overlap",
    "candidate_overlaps",
    "KmerIndex",
    "kmer_codes",
    "kmer_matrix",
    "mark_transitive",
    "transitive_reduction",
    "load_string_graph",
    "read_edge_list",
]
