"""Main CLI entry point."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, NoReturn, Optional

from dotenv import load_dotenv

from ..constants import EXIT_OK
from .commands import CommandHandler


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contigforge", description="Contig generation over a virtual processor grid"
    )
    parser.add_argument(
        "command",
        nargs="?",
        default="run",
        choices=["run", "synth", "eval", "init-config"],
        help="Command to execute (default: run)",
    )
    parser.add_argument("--config", type=Path, help="YAML configuration file")
    parser.add_argument("--input", type=Path, help="Reads FASTA (run) or contigs FASTA (eval)")
    parser.add_argument("--grid", type=int, help="Number of virtual ranks (a perfect square)")
    parser.add_argument("-k", type=int, help="k-mer length (odd, at most 31)")
    parser.add_argument("-t", type=int, dest="min_overlap", help="Minimum overlap length")
    parser.add_argument("--fuzz", type=int, help="Transitive reduction slack in bases")
    parser.add_argument("--seed", type=int, help="Random seed")
    parser.add_argument("--out", type=Path, help="Contig FASTA output")
    parser.add_argument("--report", type=Path, help="JSON report output (text report beside it)")
    parser.add_argument("--ledger", type=Path, help="Communication ledger TSV output")
    parser.add_argument("--chains", type=Path, help="Contig chain TSV output")
    parser.add_argument("--dump-dir", type=Path, help="Directory for Matrix Market dumps")
    parser.add_argument("--string-graph", type=Path, help="Precomputed string graph edge list")
    parser.add_argument("--reference", type=Path, help="Reference FASTA for evaluation")
    parser.add_argument("--max-msg-bytes", type=int, help="Message chunk size in bytes")
    parser.add_argument("--max-kmer-freq", type=int, help="Drop k-mers seen in more reads")
    parser.add_argument("--workers", type=int, help="Threads for rank-local work")
    parser.add_argument(
        "--emit-singletons",
        action="store_true",
        default=None,
        help="Also write reads that belong to no contig",
    )
    parser.add_argument("--genome-length", type=int, help="Synthetic genome length (synth)")
    parser.add_argument("--read-length", type=int, help="Synthetic read length (synth)")
    parser.add_argument("--coverage", type=float, help="Synthetic read coverage (synth)")
    parser.add_argument(
        "--out-dir", type=Path, default=Path("synth"), help="Output directory (synth)"
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level",
    )
    return parser


def main(argv: Optional[List[str]] = None) -> NoReturn:
    """Main entry point for contigforge."""
    # Load environment variables from .env file
    load_dotenv()

    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    print("contigforge v0.1.0")

    handler = CommandHandler(args)
    command_map = {
        "run": handler.handle_run,
        "synth": handler.handle_synth,
        "eval": handler.handle_eval,
        "init-config": handler.handle_init_config,
    }
    command_map[args.command]()
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
