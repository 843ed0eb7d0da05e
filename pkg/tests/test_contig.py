"""Tests for branch removal, components, partitioning, induced subgraphs and local assembly."""

from itertools import product

import numpy as np
import pytest

from contigforge.contig import (
    NONE,
    AssignmentVector,
    ComponentVector,
    InducedBlock,
    branch_removal,
    branching_vertices,
    chain_sequence,
    connected_components,
    contig_sizes,
    destination_vector,
    greedy_partitioning,
    induced_subgraph,
    local_assembly,
    lpt_partition,
    partition_loads,
)
from contigforge.core.errors import BrokenChain, InconsistentAssignment
from contigforge.grid import DistVector, VirtualGrid
from contigforge.matrix import DistSparseMatrix, EdgeLabel, LocalSparse, PayloadKind
from contigforge.matrix.payloads import BOOL_DTYPE, LABEL_DTYPE
from contigforge.sequences import ReadStore

# v1..v8 from a branching string graph, as 0-based ids
BRANCHED = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6), (6, 7)]


def symmetric_graph(grid: VirtualGrid, n: int, edges) -> DistSparseMatrix:
    pairs = sorted({(u, v) for a, b in edges for u, v in ((a, b), (b, a))})
    values = np.zeros(len(pairs), dtype=BOOL_DTYPE)
    values["count"] = [u * n + v for u, v in pairs]
    return DistSparseMatrix.from_triples(
        grid,
        n,
        n,
        PayloadKind.BOOLEAN,
        [u for u, _ in pairs],
        [v for _, v in pairs],
        values,
    )


def mirrored(labelled):
    edges = dict(labelled)
    for (u, v), label in list(edges.items()):
        edges.setdefault((v, u), label.mirror())
    return edges


def induced_block(labelled, global_ids) -> InducedBlock:
    """Single-rank block over the given reads, edges keyed by local ids."""
    edges = mirrored(labelled)
    keys = sorted(edges)
    values = np.array([edges[key].to_record() for key in keys], dtype=LABEL_DTYPE)
    n = len(global_ids)
    matrix = LocalSparse.from_triples(
        n, n, [u for u, _ in keys], [v for _, v in keys], values
    )
    return InducedBlock(rank=0, matrix=matrix, global_ids=np.asarray(global_ids, dtype=np.int64))


def union_find(n: int, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    return [find(x) for x in range(n)]


def component_oracle(n: int, edges):
    """Dense labels by smallest member, NONE for untouched vertices."""
    roots = union_find(n, edges)
    touched = {v for edge in edges for v in edge}
    dense = {root: k for k, root in enumerate(sorted({roots[v] for v in touched}))}
    return [dense[roots[v]] if v in touched else NONE for v in range(n)]


def random_path_forest(rng, n: int, n_paths: int):
    order = rng.permutation(n)
    cuts = np.sort(rng.choice(np.arange(1, n), n_paths - 1, replace=False))
    edges = []
    for path in np.split(order, cuts):
        edges.extend(zip(path[:-1].tolist(), path[1:].tolist()))
    return edges


def optimal_makespan(sizes, n_parts: int) -> int:
    """Exhaustive search with symmetric placements skipped."""
    ordered = sorted(sizes, reverse=True)
    if not ordered:
        return 0
    lower = max(ordered[0], -(-sum(ordered) // n_parts))
    best = sum(ordered)
    loads = [0] * n_parts

    def place(k: int) -> None:
        nonlocal best
        if best == lower:
            return
        if k == len(ordered):
            best = max(loads)
            return
        seen = set()
        for part in range(n_parts):
            if loads[part] in seen or loads[part] + ordered[k] >= best:
                continue
            seen.add(loads[part])
            loads[part] += ordered[k]
            place(k + 1)
            loads[part] -= ordered[k]

    place(0)
    return best


class TestBranchRemoval:
    """Masking vertices of degree three or more."""

    def test_branching_example(self):
        grid = VirtualGrid(4)
        graph = symmetric_graph(grid, 8, BRANCHED)
        assert branching_vertices(graph).to_numpy().tolist() == [0, 0, 1, 0, 0, 0, 0, 0]
        linear = branch_removal(graph)
        assert linear.edge_set() == {
            (u, v) for a, b in [(0, 1), (3, 4), (4, 5), (6, 7)] for u, v in ((a, b), (b, a))
        }

    def test_complete_graph_is_emptied(self):
        grid = VirtualGrid(4)
        k4 = symmetric_graph(grid, 4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
        assert branch_removal(k4).nnz == 0

    def test_path_is_kept(self):
        grid = VirtualGrid(9)
        path = symmetric_graph(grid, 10, [(k, k + 1) for k in range(9)])
        assert branch_removal(path).edge_set() == path.edge_set()

    def test_linear_degrees_at_most_two(self):
        rng = np.random.default_rng(12)
        n = 50
        edges = {tuple(sorted(rng.choice(n, 2, replace=False).tolist())) for _ in range(70)}
        grid = VirtualGrid(4)
        linear = branch_removal(symmetric_graph(grid, n, edges))
        rows, _, _ = linear.triples()
        assert np.bincount(rows, minlength=n).max() <= 2
        assert linear.is_structurally_symmetric()

    def test_matches_degree_oracle(self):
        rng = np.random.default_rng(13)
        for trial in range(1000):
            n = int(rng.integers(3, 41))
            m = int(rng.integers(0, 2 * n))
            edges = {tuple(sorted(rng.choice(n, 2, replace=False).tolist())) for _ in range(m)}
            graph = symmetric_graph(VirtualGrid([1, 4, 9][trial % 3]), n, edges)

            ends = np.array([v for edge in edges for v in edge], dtype=np.int64)
            degree = np.bincount(ends, minlength=n)
            masked = degree >= 3
            assert branching_vertices(graph).to_numpy().tolist() == masked.astype(int).tolist()

            linear = branch_removal(graph)
            assert linear.edge_set() == {
                (u, v)
                for a, b in edges
                if not (masked[a] or masked[b])
                for u, v in ((a, b), (b, a))
            }
            rows, _, _ = linear.triples()
            assert np.bincount(rows, minlength=n).max(initial=0) <= 2


class TestConnectedComponents:
    """Hook-and-shortcut labelling."""

    def test_branching_example(self):
        grid = VirtualGrid(4)
        linear = branch_removal(symmetric_graph(grid, 8, BRANCHED))
        components = connected_components(linear)
        assert components.n_components == 3
        assert components.to_numpy().tolist() == [0, 0, NONE, 1, 1, 1, 2, 2]
        assert contig_sizes(components).to_numpy().tolist() == [2, 3, 2]

    def test_empty_graph(self):
        grid = VirtualGrid(4)
        components = connected_components(symmetric_graph(grid, 5, []))
        assert components.n_components == 0
        assert components.to_numpy().tolist() == [NONE] * 5
        assert contig_sizes(components).to_numpy().tolist() == []

    @pytest.mark.parametrize("p_total", [1, 4, 9])
    def test_matches_union_find(self, p_total):
        rng = np.random.default_rng(p_total)
        n = 60
        edges = {tuple(sorted(rng.choice(n, 2, replace=False).tolist())) for _ in range(45)}
        grid = VirtualGrid(p_total)
        labels = connected_components(symmetric_graph(grid, n, edges)).to_numpy()
        assert labels.tolist() == component_oracle(n, edges)

    def test_matches_union_find_on_path_forests(self):
        rng = np.random.default_rng(31)
        for trial in range(1000):
            n = int(rng.integers(3, 61))
            edges = random_path_forest(rng, n, int(rng.integers(1, n)))
            grid = VirtualGrid([1, 4, 9][trial % 3])
            components = connected_components(symmetric_graph(grid, n, edges))
            expected = component_oracle(n, edges)
            assert components.to_numpy().tolist() == expected
            assert components.n_components == max(expected, default=NONE) + 1

    def test_long_path_converges(self):
        grid = VirtualGrid(4)
        n = 200
        order = np.random.default_rng(1).permutation(n).tolist()
        path = symmetric_graph(grid, n, list(zip(order[:-1], order[1:])))
        components = connected_components(path)
        assert components.n_components == 1
        assert set(components.to_numpy().tolist()) == {0}


class TestPartitioning:
    """Longest Processing Time assignment."""

    def test_lpt_example(self):
        assignment = lpt_partition([4, 3, 3, 2, 2], 2)
        assert assignment.tolist() == [0, 1, 1, 0, 0]
        assert partition_loads([4, 3, 3, 2, 2], assignment, 2).tolist() == [8, 6]

    def test_more_ranks_than_contigs(self):
        assignment = lpt_partition([5], 4)
        assert assignment.tolist() == [0]
        assert partition_loads([5], assignment, 4).tolist() == [5, 0, 0, 0]

    def test_no_contigs(self):
        assert lpt_partition([], 3).tolist() == []

    def test_invalid_rank_count(self):
        with pytest.raises(ValueError):
            lpt_partition([1, 2], 0)

    def test_search_matches_brute_force(self):
        sizes = [7, 5, 4, 4, 3, 2]
        brute = min(
            partition_loads(sizes, np.array(choice), 3).max()
            for choice in product(range(3), repeat=len(sizes))
        )
        assert optimal_makespan(sizes, 3) == brute == 9

    def test_within_bound_of_optimum(self):
        rng = np.random.default_rng(41)
        for trial in range(1000):
            n_parts = 2 + trial % 3
            sizes = rng.integers(1, 51, size=int(rng.integers(1, 13))).tolist()
            lpt = int(partition_loads(sizes, lpt_partition(sizes, n_parts), n_parts).max())
            best = optimal_makespan(sizes, n_parts)
            assert lpt * 3 * n_parts <= best * (4 * n_parts - 1)
            assert lpt * n_parts <= sum(sizes) + n_parts * max(sizes)

    def test_greedy_partitioning_is_replicated(self):
        grid = VirtualGrid(4)
        sizes = DistVector.from_global(grid, np.array([4, 3, 3, 2, 2], dtype=np.int64))
        with grid.phase("partition"):
            assignment = greedy_partitioning(sizes)
        assert assignment.par.tolist() == lpt_partition([4, 3, 3, 2, 2], 4).tolist()
        assert assignment.loads([4, 3, 3, 2, 2]).tolist() == [4, 3, 3, 4]
        assert grid.ledger.total_msgs(phase="partition") > 0


class TestInducedSubgraph:
    """Every contig ends up whole on one rank."""

    def test_matches_filter_oracle(self):
        rng = np.random.default_rng(20)
        for trial in range(500):
            p_total = [1, 4, 9][trial % 3]
            n = int(rng.integers(3, 46))
            edges = random_path_forest(rng, n, int(rng.integers(1, n)))
            grid = VirtualGrid(p_total)
            linear = symmetric_graph(grid, n, edges)
            components = connected_components(linear)
            par = rng.integers(0, p_total, size=components.n_components)
            assignment = AssignmentVector(par=par, n_parts=p_total)

            blocks = induced_subgraph(linear, components, assignment)
            dest = destination_vector(components, assignment).to_numpy()
            everything = linear.edges()
            for block in blocks:
                block.matrix.validate()
                expected = {e: val for e, val in everything.items() if dest[e[0]] == block.rank}
                assert block.edges() == expected

    def test_traffic_follows_rows_and_transposes(self):
        rng = np.random.default_rng(3)
        grid = VirtualGrid(16)
        n = 64
        linear = symmetric_graph(grid, n, random_path_forest(rng, n, 5))
        components = connected_components(linear)
        par = rng.integers(0, 16, size=components.n_components)
        with grid.phase("induced-subgraph"):
            induced_subgraph(linear, components, AssignmentVector(par=par, n_parts=16))

        ledger = grid.ledger
        kinds = {key[1] for key, _, _ in ledger.snapshot() if key[0] == "induced-subgraph"}
        assert kinds == {"row_allgather", "transpose", "alltoall"}
        gathers = ledger.msgs_sent(phase="induced-subgraph", kind="row_allgather")
        assert all(src // 4 == dst // 4 for src, dst in gathers)
        transposes = ledger.msgs_sent(phase="induced-subgraph", kind="transpose")
        assert transposes
        assert all(divmod(dst, 4) == divmod(src, 4)[::-1] for src, dst in transposes)
        assert ledger.is_conserved()

    def test_local_ids_follow_global_order(self):
        grid = VirtualGrid(4)
        linear = symmetric_graph(grid, 9, [(8, 2), (2, 5)])
        components = connected_components(linear)
        blocks = induced_subgraph(linear, components, AssignmentVector(np.array([3]), 4))
        assert blocks[3].global_ids.tolist() == [2, 5, 8]
        assert all(block.n_vertices == 0 for block in blocks[:3])

    def test_split_contig_is_rejected(self):
        grid = VirtualGrid(4)
        linear = symmetric_graph(grid, 2, [(0, 1)])
        components = ComponentVector(
            labels=DistVector.from_global(grid, np.array([0, 1], dtype=np.int64)), n_components=2
        )
        with pytest.raises(InconsistentAssignment):
            induced_subgraph(linear, components, AssignmentVector(np.array([0, 1]), 4))


class TestLocalAssembly:
    """Walking chains and joining read slices."""

    def test_three_read_chain(self):
        store = ReadStore.from_sequences(["AGAACT", "AACTGAAG", "TGAAGAA"])
        first = EdgeLabel.from_overlap(6, 8, 4, False, False)
        second = EdgeLabel(first.direction, 3, 4, 2, 4, 4)
        block = induced_block({(0, 1): first, (1, 2): second}, [0, 1, 2])
        (chain,) = local_assembly(block, store)
        assert chain.read_ids == [0, 1, 2]
        assert chain.reverse == [False, False, False]
        assert chain.sequence == "AGAACTGAAGAA"
        assert not chain.circular

    def test_maximal_and_partial_overlap_labels_agree(self):
        store = ReadStore.from_sequences(["AGAACT", "AACTGAAG", "TGAAGAA"])
        first = EdgeLabel.from_overlap(6, 8, 4, False, False)
        maximal = EdgeLabel.from_overlap(8, 7, 5, False, False)
        partial = EdgeLabel(maximal.direction, 3, 4, 2, 4, 4)
        assert (maximal.pre, maximal.post) == (2, 0)
        reads, forward = [0, 1, 2], [False, False, False]
        for second in (maximal, partial):
            assert chain_sequence(store, reads, forward, [first, second], False) == "AGAACTGAAGAA"

    def test_overlaps_on_one_read_end_split_the_chain(self):
        # reads 0 and 2 both overlap the head of read 1
        store = ReadStore.from_sequences(["GGGAACT", "AACTGAAG", "CCCAACT"])
        label = EdgeLabel.from_overlap(7, 8, 4, False, False)
        block = induced_block({(0, 1): label, (2, 1): label}, [0, 1, 2])
        (chain,) = local_assembly(block, store)
        assert chain.read_ids == [0, 1]
        assert chain.sequence == "GGGAACTGAAG"
        assert not chain.circular

    def test_reverse_complement_read(self):
        store = ReadStore.from_sequences(["AGAACT", "CTTCAGTT"])
        label = EdgeLabel.from_overlap(6, 8, 4, False, True)
        (chain,) = local_assembly(induced_block({(0, 1): label}, [0, 1]), store)
        assert chain.reverse == [False, True]
        assert chain.sequence == "AGAACTGAAG"

    def test_chain_is_emitted_once_from_lowest_root(self):
        store = ReadStore.from_sequences(["AGAACT", "AACTGAAG"], ids=[4, 9])
        label = EdgeLabel.from_overlap(8, 6, 4, True, True)
        chains = local_assembly(induced_block({(1, 0): label}, [4, 9]), store)
        assert len(chains) == 1
        assert chains[0].read_ids == [4, 9]
        assert chains[0].reverse == [False, False]
        assert chains[0].sequence == "AGAACTGAAG"

    def test_cycle_is_cut_at_lowest_read(self):
        # ACGGATCCT read as a circle by three reads overlapping by three bases
        store = ReadStore.from_sequences(["ACGGAT", "GATCCT", "CCTACG"])
        step = EdgeLabel.from_overlap(6, 6, 3, False, False)
        block = induced_block({(0, 1): step, (1, 2): step, (2, 0): step}, [0, 1, 2])
        (chain,) = local_assembly(block, store)
        assert chain.circular
        assert chain.read_ids == [0, 1, 2]
        assert chain.sequence == "ACGGATCCT"

    def test_branching_block_is_rejected(self):
        store = ReadStore.from_sequences(["ACGTAC"] * 4)
        step = EdgeLabel.from_overlap(6, 6, 3, False, False)
        block = induced_block({(0, 1): step, (0, 2): step, (0, 3): step}, [0, 1, 2, 3])
        with pytest.raises(BrokenChain):
            local_assembly(block, store)

    def test_empty_block(self):
        block = InducedBlock(0, LocalSparse.empty(0, 0, LABEL_DTYPE), np.zeros(0, np.int64))
        assert local_assembly(block, ReadStore.empty()) == []

    def test_chain_sequence_single_step(self):
        store = ReadStore.from_sequences(["AGAACT", "AACTGAAG"])
        label = EdgeLabel.from_overlap(6, 8, 4, False, False)
        assert chain_sequence(store, [0, 1], [False, False], [label], False) == "AGAACTGAAG"
