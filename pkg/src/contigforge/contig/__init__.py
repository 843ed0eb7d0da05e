"""Contig generation: branch masking, components, LPT placement and local walks."""

from .assembly import ContigChain, chain_sequence, local_assembly
from .branches import BRANCH_DEGREE, branch_removal, branching_vertices
from .components import NONE, ComponentVector, connected_components, contig_sizes
from .induced import InducedBlock, destination_vector, induced_subgraph
from .partition import AssignmentVector, greedy_partitioning, lpt_partition, partition_loads

__all__ = [
    "ContigChain",
    "chain_sequence",
    "local_assembly",
    "BRANCH_DEGREE",
    "branch_removal",
    "branching_vertices",
    "NONE",
    "ComponentVector",
    "connected_components",
    "contig_sizes",
    "InducedBlock",
    "destination_vector",
    "induced_subgraph",
    "AssignmentVector",
    "greedy_partitioning",
    "lpt_partition",
    "partition_loads",
]
