"""Application constants and configuration paths."""

from pathlib import Path

# Configuration paths
APP_CONFIG_PATH = Path("config/app/config.yaml")
CONFIG_PATH_ENV = "CONTIGFORGE_CONFIG"

# Pipeline defaults
DEFAULT_K = 31
DEFAULT_MIN_OVERLAP = 100
DEFAULT_FUZZ = 10
DEFAULT_MAX_MSG_BYTES = 64 * 1024
DEFAULT_MAX_KMER_FREQ = 64
DEFAULT_MAX_ITERATIONS = 32
DEFAULT_SEED = 7

# Output formatting
FASTA_LINE_WIDTH = 80
NUCLEOTIDES = "ACGT"

# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_STAGE_FAILURE = 3
