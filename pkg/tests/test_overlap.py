"""Tests for k-mer counting, overlap detection and transitive reduction."""

import tempfile
from itertools import product
from pathlib import Path

import numpy as np
import pytest

from contigforge.core.errors import KTooLarge, ParseError
from contigforge.grid import VirtualGrid
from contigforge.matrix import DistSparseMatrix, Direction, EdgeLabel, OverlapKind, PayloadKind
from contigforge.matrix.payloads import LABEL_DTYPE
from contigforge.overlap import (
    align_filter,
    align_pair,
    alignment,
    candidate_overlaps,
    contained_reads,
    kmer_codes,
    kmer_matrix,
    load_string_graph,
    prune_contained,
    score_overlap,
    transitive_reduction,
)
from contigforge.pipeline import synth_genome, synth_reads
from contigforge.sequences import ReadStore, distribute_reads


def codes(sequence: str) -> np.ndarray:
    return np.frombuffer(sequence.encode("ascii"), dtype=np.uint8)


def labels_of(matrix: DistSparseMatrix):
    rows, cols, values = matrix.triples()
    return {
        (int(u), int(v)): EdgeLabel.from_record(record)
        for u, v, record in zip(rows, cols, values)
    }


def label_graph(grid: VirtualGrid, n: int, labelled) -> DistSparseMatrix:
    edges = dict(labelled)
    for (u, v), label in list(edges.items()):
        edges.setdefault((v, u), label.mirror())
    keys = sorted(edges)
    values = np.array([edges[key].to_record() for key in keys], dtype=LABEL_DTYPE)
    return DistSparseMatrix.from_triples(
        grid, n, n, PayloadKind.STRING_EDGE, [u for u, _ in keys], [v for _, v in keys], values
    )


def reduce_oracle(edges, fuzz: int):
    """Sequential transitive reduction over {(u, v): EdgeLabel}."""
    edges = dict(edges)
    while True:
        out = {}
        for (u, v), label in edges.items():
            out.setdefault(u, []).append((v, label))
        marked = set()
        for (i, j), first in edges.items():
            for k, second in out.get(j, []):
                if k == i or (i, k) not in edges:
                    continue
                if (first.direction & 1) != (second.direction >> 1):
                    continue
                direction = ((first.direction >> 1) << 1) | (second.direction & 1)
                target = edges[(i, k)]
                if target.direction != direction:
                    continue
                if first.overhang + second.overhang <= target.overhang + fuzz:
                    marked.add((i, k))
        if not marked:
            return edges
        for i, k in marked:
            edges.pop((i, k), None)
            edges.pop((k, i), None)


class TestKmers:
    """Canonical k-mers and the reads x k-mers matrix."""

    def test_canonical_codes(self):
        forward, strand = kmer_codes(codes("AAC"), 3)
        reverse, rc_strand = kmer_codes(codes("GTT"), 3)
        assert forward.tolist() == reverse.tolist()
        assert strand.tolist() == [0]
        assert rc_strand.tolist() == [1]

    def test_short_read_has_no_kmers(self):
        values, _ = kmer_codes(codes("AC"), 3)
        assert len(values) == 0

    def test_kmer_matrix_columns(self):
        grid = VirtualGrid(4)
        store = ReadStore.from_sequences(["AAACG", "CGTTT"])
        index = kmer_matrix(grid, store, 3)
        # AAA/TTT, AAC/GTT, ACG/CGT are shared by both reads
        assert index.n_kmers == 3
        assert index.frequencies.tolist() == [2, 2, 2]
        assert index.matrix.nnz == 6
        assert index.column_of("TTT") == index.column_of("AAA")
        assert index.column_of("GGG") is None

    def test_repetitive_kmers_are_dropped(self):
        grid = VirtualGrid(1)
        store = ReadStore.from_sequences(["AAAAC", "AAAAG", "AAAAT"])
        index = kmer_matrix(grid, store, 3, max_kmer_freq=2)
        assert index.column_of("AAA") is None
        assert index.column_of("AAC") is not None

    def test_k_too_large(self):
        grid = VirtualGrid(1)
        with pytest.raises(KTooLarge):
            kmer_matrix(grid, ReadStore.from_sequences(["ACGTACGT"]), 33)
        with pytest.raises(KTooLarge):
            kmer_matrix(grid, ReadStore.from_sequences(["ACGT"]), 5)

    @pytest.mark.parametrize("k", [0, 4, 30])
    def test_even_k_rejected(self, k):
        with pytest.raises(ValueError, match="odd"):
            kmer_matrix(VirtualGrid(1), ReadStore.from_sequences(["ACGT" * 8]), k)

    def test_candidates_have_no_diagonal(self):
        grid = VirtualGrid(4)
        store = ReadStore.from_sequences(["AGAACT", "AACTGAAG", "CCCCCC"])
        candidates = candidate_overlaps(kmer_matrix(grid, store, 3))
        assert candidates.edge_set() == {(0, 1), (1, 0)}


class TestScoring:
    """Exact overlap scoring along a seed diagonal."""

    def test_dovetail(self):
        label = score_overlap(codes("AGAACT"), codes("AACTGAAG"), (2, 0, 0), 3, 3)
        assert label == EdgeLabel.from_overlap(6, 8, 4, False, False)
        assert label.kind == OverlapKind.DOVETAIL

    def test_reverse_complement_dovetail(self):
        label = score_overlap(codes("AGAACT"), codes("CTTCAGTT"), (2, 5, 1), 3, 3)
        assert label.direction == Direction.BOTH_IN
        assert (label.pre, label.post, label.overlap) == (1, 7, 4)

    def test_prefix_overlap(self):
        label = score_overlap(codes("AACTGAAG"), codes("AGAACT"), (0, 2, 0), 3, 3)
        assert label.direction == Direction.BACKWARD
        assert label.overlap == 4

    def test_mismatch_rejected(self):
        assert score_overlap(codes("AGAACT"), codes("AACGGAAG"), (2, 0, 0), 3, 3) is None

    def test_short_overlap_rejected(self):
        assert score_overlap(codes("AGAACT"), codes("AACTGAAG"), (2, 0, 0), 3, 5) is None

    def test_containment(self):
        label = score_overlap(codes("ACGTAC"), codes("GTA"), (2, 0, 0), 3, 3)
        assert label.kind == OverlapKind.DST_CONTAINED
        assert label.overlap == 3

    def test_other_diagonals_tried_after_a_mismatch(self):
        u, v = codes("AGAACT"), codes("AACTGAAG")
        expected = EdgeLabel.from_overlap(6, 8, 4, False, False)
        assert align_pair(u, v, (0, 5, 0), 3, 4) == expected

        requested = []

        def kmers(read_id):
            requested.append(read_id)
            return kmer_codes(u if read_id == 0 else v, 3)

        assert align_pair(u, v, (0, 5, 0), 3, 4, 0, 1, kmers) == expected
        assert requested == [0, 1]

    def test_short_exact_diagonal_is_final(self, monkeypatch):
        def no_search(*args, **kwargs):
            raise AssertionError("other diagonals searched")

        monkeypatch.setattr(alignment, "shared_seeds", no_search)
        assert align_pair(codes("AGAACT"), codes("AACTGAAG"), (2, 0, 0), 3, 5) is None


class TestAlignment:
    """Overlaps found on reads sampled from a known reference."""

    def test_overlaps_agree_with_layout(self):
        read_len, k, t = 60, 15, 25
        reference = synth_genome(1500, seed=4)
        store, layout = synth_reads(reference, read_len, 8, seed=4)
        grid = VirtualGrid(4)
        stores = distribute_reads(grid, store)
        candidates = candidate_overlaps(kmer_matrix(grid, stores, k))
        overlaps = align_filter(candidates, stores, k, t)

        assert overlaps.is_structurally_symmetric()
        starts = {p.read_id: p.start for p in layout}
        found = labels_of(overlaps)
        for (u, v), label in found.items():
            assert label.overlap == read_len - abs(starts[u] - starts[v])

        for u, v in product(range(len(store)), repeat=2):
            if u != v and read_len - abs(starts[u] - starts[v]) >= t + k:
                assert (u, v) in found

    def test_contained_reads(self):
        grid = VirtualGrid(4)
        store = ReadStore.from_sequences(["ACGTACGGTCA", "GTACGG", "CGGTCATTGA"])
        stores = distribute_reads(grid, store)
        overlaps = align_filter(candidate_overlaps(kmer_matrix(grid, stores, 3)), stores, 3, 4)
        assert contained_reads(overlaps).to_numpy().tolist() == [0, 1, 0]
        assert prune_contained(overlaps).edge_set() == {(0, 2), (2, 0)}

    @pytest.mark.parametrize("p_total", [1, 4])
    def test_labels_follow_maximal_exact_overlap(self, p_total):
        grid = VirtualGrid(p_total)
        store = ReadStore.from_sequences(["AGAACT", "AACTGAAG", "TGAAGAA"])
        stores = distribute_reads(grid, store)
        overlaps = align_filter(candidate_overlaps(kmer_matrix(grid, stores, 3)), stores, 3, 4)
        found = labels_of(overlaps)
        # AACT and TGAAG are shared in full, so both edges start at the head of v
        assert (found[(0, 1)].pre, found[(0, 1)].post, found[(0, 1)].overlap) == (1, 0, 4)
        assert (found[(1, 2)].pre, found[(1, 2)].post, found[(1, 2)].overlap) == (2, 0, 5)
        assert found[(1, 2)].direction == Direction.FORWARD


class TestTransitiveReduction:
    """Reduction against a sequential reference."""

    def test_chain_of_three(self):
        grid = VirtualGrid(4)
        step = EdgeLabel.from_overlap(10, 10, 7, False, False)
        skip = EdgeLabel.from_overlap(10, 10, 4, False, False)
        graph = label_graph(grid, 3, {(0, 1): step, (1, 2): step, (0, 2): skip})
        reduced = transitive_reduction(graph, fuzz=0)
        assert reduced.edge_set() == {(0, 1), (1, 0), (1, 2), (2, 1)}

    def test_fuzz_is_needed_for_inexact_walks(self):
        grid = VirtualGrid(1)
        step = EdgeLabel.from_overlap(10, 10, 7, False, False)
        skip = EdgeLabel.from_overlap(10, 10, 5, False, False)
        graph = label_graph(grid, 3, {(0, 1): step, (1, 2): step, (0, 2): skip})
        assert transitive_reduction(graph, fuzz=0).nnz == 6
        assert transitive_reduction(graph, fuzz=1).nnz == 4

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_sequential_reduction(self, seed):
        reference = synth_genome(900, seed=seed)
        store, _ = synth_reads(reference, 50, 10, seed=seed)
        grid = VirtualGrid([1, 4, 9][seed % 3])
        stores = distribute_reads(grid, store)
        overlaps = align_filter(candidate_overlaps(kmer_matrix(grid, stores, 11)), stores, 11, 20)
        overlaps = prune_contained(overlaps)

        reduced = transitive_reduction(overlaps, fuzz=5)
        expected = reduce_oracle(labels_of(overlaps), fuzz=5)
        assert reduced.edge_set() == set(expected)
        assert reduced.is_structurally_symmetric()
        assert transitive_reduction(reduced, fuzz=5).edges() == reduced.edges()


class TestStringGraphFile:
    """The precomputed edge-list input."""

    def _write(self, temp_dir: str, text: str) -> Path:
        path = Path(temp_dir) / "graph.tsv"
        path.write_text(text)
        return path

    def test_load_mirrors_missing_edges(self):
        store = ReadStore.from_sequences(["AGAACT", "AACTGAAG"])
        grid = VirtualGrid(4)
        with tempfile.TemporaryDirectory() as temp_dir:
            path = self._write(temp_dir, "u\tv\tdirection\toverhang\tpre\tpost\n0\t1\t0\t4\t1\t0\n")
            graph = load_string_graph(path, grid, store)
        labels = labels_of(graph)
        assert labels[(0, 1)] == EdgeLabel.from_overlap(6, 8, 4, False, False)
        assert labels[(1, 0)] == labels[(0, 1)].mirror()

    def test_direction_names(self):
        store = ReadStore.from_sequences(["AGAACT", "CTTCAGTT"])
        with tempfile.TemporaryDirectory() as temp_dir:
            path = self._write(temp_dir, "0 1 both-in 4 1 7\n")
            graph = load_string_graph(path, VirtualGrid(1), store)
        assert labels_of(graph)[(0, 1)].direction == Direction.BOTH_IN

    @pytest.mark.parametrize(
        "row",
        ["0\t1\t0\t4\t1", "0\t5\t0\t4\t1\t0", "0\t1\tsideways\t4\t1\t0", "0\t1\t0\t9\t1\t0"],
    )
    def test_malformed_rows(self, row):
        store = ReadStore.from_sequences(["AGAACT", "AACTGAAG"])
        with tempfile.TemporaryDirectory() as temp_dir:
            path = self._write(temp_dir, row + "\n")
            with pytest.raises(ParseError):
                load_string_graph(path, VirtualGrid(1), store)
