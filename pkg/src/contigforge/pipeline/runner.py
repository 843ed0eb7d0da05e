"""End-to-end pipeline over the virtual grid."""

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from ..contig import (
    ContigChain,
    branch_removal,
    branching_vertices,
    connected_components,
    contig_sizes,
    destination_vector,
    greedy_partitioning,
    induced_subgraph,
    local_assembly,
)
from ..core.config import PipelineConfig
from ..core.errors import StageError
from ..grid.collectives import VirtualGrid
from ..grid.ledger import CommLedger
from ..matrix.distributed import DistSparseMatrix
from ..overlap import (
    align_filter,
    candidate_overlaps,
    contained_reads,
    kmer_matrix,
    load_string_graph,
    prune_contained,
    transitive_reduction,
)
from ..sequences import ReadStore, distribute_reads, fasta_read, ship_reads
from .evaluate import QualityReport, evaluate
from .report import write_outputs

logger = logging.getLogger(__name__)

STAGES = (
    "read",
    "kmers",
    "candidates",
    "alignment",
    "containment",
    "transitive-reduction",
    "string-graph",
    "branch-removal",
    "components",
    "partition",
    "induced-subgraph",
    "read-exchange",
    "assembly",
    "evaluate",
)


@dataclass
class PipelineResult:
    """Numbered contigs, optional singleton reads and the run report."""

    chains: List[ContigChain]
    singletons: List[Tuple[int, str]]
    report: QualityReport
    ledger: CommLedger
    matrices: Dict[str, DistSparseMatrix] = field(default_factory=dict)

    def contigs(self) -> List[Tuple[int, str, int]]:
        """(number, sequence, read count) for every emitted contig, singletons last."""
        entries = [(chain.number, chain.sequence, len(chain.read_ids)) for chain in self.chains]
        offset = len(self.chains)
        entries.extend((offset + n, seq, 1) for n, (_, seq) in enumerate(self.singletons))
        return entries

    def sequences(self) -> List[str]:
        return [sequence for _, sequence, _ in self.contigs()]


class PipelineRunner:
    """Runs the stages in order, timing each and tagging its ledger traffic."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.grid = VirtualGrid(config.grid, config.max_msg_bytes, config.workers)
        self.timings: Dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        logger.info("stage %s", name)
        start = time.perf_counter()
        with self.grid.phase(name):
            try:
                yield
            except StageError:
                raise
            except Exception as e:
                raise StageError(name, e) from e
        self.timings[name] = self.timings.get(name, 0.0) + time.perf_counter() - start

    def run(
        self, store: Optional[ReadStore] = None, reference: Optional[str] = None
    ) -> PipelineResult:
        config = self.config
        with self.stage("read"):
            if store is None:
                if config.input_path is None:
                    raise ValueError("no input reads given")
                store = fasta_read(config.input_path)
            if reference is None and config.reference_path is not None:
                references = fasta_read(config.reference_path)
                reference = references.sequence(int(references.ids[0])) if len(references) else ""
        if len(store) == 0:
            logger.warning("no reads: nothing to assemble")
            return self._finish([], [], reference, {})

        logger.info("%d reads, %d bases", len(store), store.total_bases)
        stores = distribute_reads(self.grid, store)
        counts: Dict[str, int] = {}
        matrices: Dict[str, DistSparseMatrix] = {}

        if config.string_graph_path is not None:
            with self.stage("string-graph"):
                string_graph = load_string_graph(config.string_graph_path, self.grid, store)
        else:
            string_graph = self._overlap_graph(stores, counts)
        matrices["string_graph"] = string_graph

        with self.stage("branch-removal"):
            branching = branching_vertices(string_graph)
            linear = branch_removal(string_graph, branching)
            counts["masked_reads"] = int(sum(int(part.sum()) for part in branching.parts))
        matrices["linear"] = linear

        with self.stage("components"):
            components = connected_components(linear)
            sizes = contig_sizes(components)
        with self.stage("partition"):
            assignment = greedy_partitioning(sizes)
        with self.stage("induced-subgraph"):
            blocks = induced_subgraph(linear, components, assignment)
        with self.stage("read-exchange"):
            dest = destination_vector(components, assignment)
            needed = [part >= 0 for part in components.labels.parts]
            local_stores = ship_reads(self.grid, stores, dest.parts, needed)
        with self.stage("assembly"):
            per_rank = self.grid.map_ranks(local_assembly, blocks, local_stores)

        chains = [chain for chains in per_rank for chain in chains]
        chains.sort(key=lambda chain: chain.first_read)
        for number, chain in enumerate(chains):
            chain.number = number

        singletons: List[Tuple[int, str]] = []
        if config.emit_singletons:
            in_chain = {read for chain in chains for read in chain.read_ids}
            singletons = [
                (int(r), store.sequence(int(r))) for r in store.ids if int(r) not in in_chain
            ]
        counts["singletons"] = len(singletons)
        counts["circular_contigs"] = sum(1 for chain in chains if chain.circular)
        return self._finish(chains, singletons, reference, counts, matrices)

    def _overlap_graph(self, stores: List[ReadStore], counts: Dict[str, int]) -> DistSparseMatrix:
        """A, C = A.A^T, alignment, containment pruning and transitive reduction."""
        config = self.config
        with self.stage("kmers"):
            index = kmer_matrix(self.grid, stores, config.k, config.max_kmer_freq)
        with self.stage("candidates"):
            candidates = candidate_overlaps(index)
        with self.stage("alignment"):
            overlaps = align_filter(candidates, stores, config.k, config.min_overlap)
        with self.stage("containment"):
            contained = contained_reads(overlaps)
            overlaps = prune_contained(overlaps, contained)
            counts["contained_reads"] = int(sum(int(part.sum()) for part in contained.parts))
        with self.stage("transitive-reduction"):
            return transitive_reduction(overlaps, config.fuzz, config.max_iterations)

    def _finish(
        self,
        chains: List[ContigChain],
        singletons: List[Tuple[int, str]],
        reference: Optional[str],
        counts: Dict[str, int],
        matrices: Optional[Dict[str, DistSparseMatrix]] = None,
    ) -> PipelineResult:
        result = PipelineResult(
            chains=chains,
            singletons=singletons,
            report=QualityReport(),
            ledger=self.grid.ledger,
            matrices=matrices or {},
        )
        with self.stage("evaluate"):
            report = evaluate(result.sequences(), reference)
        for key, value in counts.items():
            setattr(report, key, value)
        report.stage_timings = dict(self.timings)
        report.ledger = self.grid.ledger.summary()
        result.report = report
        logger.info(
            "assembled %d contigs (longest %d bases)", report.contig_count, report.longest_contig
        )
        return result


def run_pipeline(
    config: PipelineConfig, store: Optional[ReadStore] = None, reference: Optional[str] = None
) -> PipelineResult:
    """Run every stage and write the configured artifacts."""
    result = PipelineRunner(config).run(store, reference)
    write_outputs(result, config)
    return result
