"""Command handlers for the contigforge CLI."""

import sys
from pathlib import Path

from ..constants import EXIT_CONFIG_ERROR, EXIT_STAGE_FAILURE
from ..core import (
    ConfigError,
    ContigForgeError,
    PipelineConfig,
    create_sample_config,
    load_config,
    override_config,
)
from ..pipeline import (
    evaluate,
    format_report_text,
    layout_tsv,
    run_pipeline,
    summary_lines,
    synth_genome,
    synth_reads,
)
from ..sequences import fasta_read, format_fasta, format_reads
from ..storage import FileManager


class CommandHandler:
    """Handles execution of the CLI commands."""

    def __init__(self, args):
        """Initialize command handler with parsed arguments."""
        self.args = args
        self.files = FileManager()

    def _config(self) -> PipelineConfig:
        """File configuration overridden by command-line flags; exits 2 when invalid."""
        args = self.args
        try:
            config = load_config(args.config, required=args.config is not None)
            synth = config.synth.model_dump()
            synth.update(
                {
                    key: value
                    for key, value in (
                        ("genome_length", args.genome_length),
                        ("read_length", args.read_length),
                        ("coverage", args.coverage),
                    )
                    if value is not None
                }
            )
            return override_config(
                config,
                input_path=args.input,
                grid=args.grid,
                k=args.k,
                min_overlap=args.min_overlap,
                fuzz=args.fuzz,
                seed=args.seed,
                output_path=args.out,
                report_path=args.report,
                ledger_path=args.ledger,
                chains_path=args.chains,
                dump_dir=args.dump_dir,
                string_graph_path=args.string_graph,
                reference_path=args.reference,
                max_msg_bytes=args.max_msg_bytes,
                max_kmer_freq=args.max_kmer_freq,
                workers=args.workers,
                emit_singletons=args.emit_singletons,
                synth=synth,
            )
        except ConfigError as e:
            print(f"Configuration error: {e}")
            sys.exit(EXIT_CONFIG_ERROR)

    def handle_run(self) -> None:
        """Assemble contigs from a reads FASTA or a precomputed string graph."""
        print("\n=== RUN MODE ===")
        config = self._config()
        if config.input_path is None:
            print("Configuration error: --input is required for run")
            sys.exit(EXIT_CONFIG_ERROR)
        print(f"Grid: {config.grid} ranks, k={config.k}, t={config.min_overlap}")
        try:
            result = run_pipeline(config)
        except (ContigForgeError, OSError) as e:
            print(f"Run failed: {e}")
            sys.exit(EXIT_STAGE_FAILURE)

        print("\n=== SUMMARY ===")
        for line in summary_lines(result):
            print(line)
        if config.output_path is not None:
            print(f"Contigs written to: {config.output_path}")

    def handle_synth(self) -> None:
        """Write a synthetic reference, its reads and the true read layout."""
        print("\n=== SYNTH MODE ===")
        config = self._config()
        out_dir = Path(self.args.out_dir)
        try:
            reference = synth_genome(config.synth.genome_length, config.seed)
            store, layout = synth_reads(
                reference, config.synth.read_length, config.synth.coverage, config.seed
            )
        except ConfigError as e:
            print(f"Configuration error: {e}")
            sys.exit(EXIT_CONFIG_ERROR)

        reference_fasta = format_fasta([("reference", "", reference)])
        try:
            self.files.write_text(out_dir / "reference.fa", reference_fasta)
            self.files.write_text(out_dir / "reads.fa", format_reads(store))
            self.files.write_text(out_dir / "layout.tsv", layout_tsv(layout))
        except OSError as e:
            print(f"Synth failed: {e}")
            sys.exit(EXIT_STAGE_FAILURE)
        print(f"Generated {len(store)} reads from a {len(reference)}-base genome in {out_dir}")

    def handle_eval(self) -> None:
        """Score a contig FASTA against a reference FASTA."""
        print("\n=== EVALUATION MODE ===")
        config = self._config()
        if config.input_path is None or config.reference_path is None:
            print("Configuration error: --input and --reference are required for eval")
            sys.exit(EXIT_CONFIG_ERROR)
        try:
            contigs = fasta_read(config.input_path)
            references = fasta_read(config.reference_path)
        except ContigForgeError as e:
            print(f"Evaluation failed: {e}")
            sys.exit(EXIT_STAGE_FAILURE)

        reference = references.sequence(int(references.ids[0])) if len(references) else ""
        report = evaluate([sequence for _, sequence in contigs.items()], reference)
        print(format_report_text(report), end="")
        if config.report_path is not None:
            try:
                self.files.write_json(config.report_path, report.to_dict())
            except OSError as e:
                print(f"Evaluation failed: {e}")
                sys.exit(EXIT_STAGE_FAILURE)

    def handle_init_config(self) -> None:
        """Write a sample configuration file."""
        print("\n=== INIT CONFIG ===")
        create_sample_config(self.args.config)
