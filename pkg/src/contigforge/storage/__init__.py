"""Artifact persistence."""

from .file_manager import FileManager
from .matrix_market import dump_matrix, format_matrix_market

__all__ = ["FileManager", "dump_matrix", "format_matrix_market"]
