"""Exception hierarchy for contigforge."""

from typing import Optional


class ContigForgeError(Exception):
    """Base class for every error raised by the library."""


class ConfigError(ContigForgeError):
    """Invalid pipeline configuration."""


# Virtual grid


class GridError(ContigForgeError):
    """Errors raised by the virtual processor grid."""


class NonSquareGrid(GridError):
    """Rank count is not a perfect square."""

    def __init__(self, p_total: int):
        super().__init__(f"Grid size {p_total} is not a perfect square")
        self.p_total = p_total


class LengthMismatch(GridError):
    """Per-rank vectors passed to a collective differ in length."""


# Sparse matrices


class MatrixError(ContigForgeError):
    """Errors raised by sparse matrix operations."""


class DimensionMismatch(MatrixError):
    """Operand shapes are incompatible."""


# Read sequences


class SequenceError(ContigForgeError):
    """Errors raised while loading or slicing reads."""


class ParseError(SequenceError):
    """Malformed FASTA input."""


class AlphabetError(SequenceError):
    """A sequence holds a symbol outside A, C, G, T."""

    def __init__(self, message: str, record: Optional[str] = None):
        super().__init__(message)
        self.record = record


class OutOfBounds(SequenceError):
    """Slice index outside the read."""


class UnassignedRead(SequenceError):
    """A read needed by a contig has no destination rank."""


# Overlap detection


class OverlapError(ContigForgeError):
    """Errors raised while building the string graph."""


class KTooLarge(OverlapError):
    """k exceeds the length of a read."""


class NonConvergence(OverlapError):
    """Transitive reduction did not reach a fixpoint within the iteration cap."""


# Contig generation


class ContigError(ContigForgeError):
    """Errors raised during contig generation."""


class InconsistentAssignment(ContigError):
    """The two endpoints of an edge were assigned to different ranks."""


class BrokenChain(ContigError):
    """A linear walk revisited a vertex or took an invalid bidirected step."""


class StageError(ContigForgeError):
    """A pipeline stage failed; wraps the original error with the stage name."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"Stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
