"""Deterministic virtual processor grid with communication accounting."""

from .collectives import VirtualGrid
from .ledger import CommLedger
from .topology import GridTopology, band_bounds, grid_create, owner_of, vector_bounds
from .vector import DistVector, fetch, scatter_min

__all__ = [
    "VirtualGrid",
    "CommLedger",
    "GridTopology",
    "band_bounds",
    "grid_create",
    "owner_of",
    "vector_bounds",
    "DistVector",
    "fetch",
    "scatter_min",
]
