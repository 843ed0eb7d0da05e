"""contigforge - contig generation from long reads over a virtual processor grid."""

__version__ = "0.1.0"
__author__ = "Yonatan Lourie"
