import itertools
from fractions import Fraction

import pytest

from rainbowmatch._rng import SplitMix64
from rainbowmatch.adapters import adapter_from_parallel_pairs
from rainbowmatch.errors import InternalInvariantError, PreconditionError
from rainbowmatch.extend import (
    PartitionState,
    _fold_residual,
    _handle_recursion_violation,
    _HypothesisViolation,
    bipartite_extend,
    extend_dispatch,
    find_rainbow_matching,
    general_extend,
    rainbow_matching,
    rainbow_matching_bipartite,
    size_bound,
)
from rainbowmatch.genlab import GenSpec, generate, sweep_specs
from rainbowmatch.graphs import EdgeColouredGraph, Matching, is_rainbow_matching
from rainbowmatch.oracle import max_rainbow_matching_exact


def all_extension_pairs(graph, k):
    """Independent oracle: every (rainbow (k-1)-matching, disjoint edge) pair."""
    out = []
    edges = sorted(graph.edges)
    for combo in itertools.combinations(edges, k - 1):
        try:
            m = Matching(combo)
        except ValueError:
            continue
        if not m.is_rainbow:
            continue
        for e in edges:
            if not ({e[0], e[1]} & m.vertices):
                out.append((m, e))
    return out


def rainbow_complete(n):
    edges = []
    c = 0
    for u, v in itertools.combinations(range(n), 2):
        edges.append((u, v, c))
        c += 1
    return EdgeColouredGraph(n, edges)


class TestBipartiteExtend:
    def test_unique_disjoint_edge(self):
        # sides {0,1} and {2,3}; the only edge disjoint from the matching is (1,3)
        g = EdgeColouredGraph(4, [(0, 2, 1), (1, 2, 1), (1, 3, 2)])
        m = Matching([(0, 2, 1)])
        result = bipartite_extend(g, m, 2)
        expected = all_extension_pairs(g, 2)
        assert [(result.matching, result.edge)] == [
            p for p in expected if p[0] == m
        ]
        assert result.edge == (1, 3, 2)

    def test_k1_returns_any_edge(self):
        g = EdgeColouredGraph(2, [(0, 1, 4)])
        result = bipartite_extend(g, Matching(), 1)
        assert result.matching == Matching() and result.edge == (0, 1, 4)

    def test_too_few_vertices(self):
        g = EdgeColouredGraph(2, [(0, 1, 0)])
        with pytest.raises(PreconditionError, match="2k"):
            bipartite_extend(g, Matching([(0, 1, 0)]), 2)

    def test_not_bipartite(self):
        g = EdgeColouredGraph(3, [(0, 1, 0), (1, 2, 1), (0, 2, 2)])
        with pytest.raises(PreconditionError, match="bipartite"):
            bipartite_extend(g, Matching([(0, 1, 0)]), 2)

    def test_dead_end_names_the_deficient_vertex(self):
        # vertex 1 is uncovered, colour degree 0 < 2
        g = EdgeColouredGraph(4, [(0, 2, 1)])
        with pytest.raises(PreconditionError, match="vertex 1"):
            bipartite_extend(g, Matching([(0, 2, 1)]), 2)

    def test_sweep_against_enumeration(self):
        rng = SplitMix64(42)
        cases = 0
        while cases < 150:
            n = 4 + rng.below(4)
            left = -(-n // 2)
            edges = {}
            for a in range(left):
                for b in range(left, n):
                    if rng.below(10) < 6:
                        edges[(a, b)] = rng.below(4)
            g = EdgeColouredGraph(n, [(a, b, c) for (a, b), c in edges.items()])
            k = 2
            pairs = all_extension_pairs(g, k)
            for m, _ in pairs:
                if any(
                    g.colour_degree(z) < k for z in g.vertices - m.vertices
                ):
                    continue
                result = bipartite_extend(g, m, k)
                assert (result.matching, result.edge) in pairs
                cases += 1


class TestGeneralExtend:
    def test_edge_inside_uncovered_set(self):
        g = EdgeColouredGraph(4, [(0, 1, 1), (2, 3, 1)])
        result = general_extend(g, Matching([(0, 1, 1)]), 2)
        assert result.matching == Matching([(0, 1, 1)])
        assert result.edge == (2, 3, 1)

    def test_chain_example(self):
        # x1=0, y1=1, z1=2, w=3
        g = EdgeColouredGraph(4, [(0, 1, 1), (1, 2, 2), (0, 2, 4), (0, 3, 3), (1, 3, 4)])
        m = Matching([(0, 1, 1)])
        result = general_extend(g, m, 2)
        assert (result.matching, result.edge) in all_extension_pairs(g, 2)

    def test_too_few_vertices(self):
        g = EdgeColouredGraph(3, [(0, 1, 0), (1, 2, 1), (0, 2, 2)])
        with pytest.raises(PreconditionError, match="3\\(k-1\\)\\+1"):
            general_extend(g, Matching([(0, 1, 0)]), 2)

    def test_rejects_non_rainbow_input(self):
        g = EdgeColouredGraph(7, [(0, 1, 1), (2, 3, 1), (4, 5, 2)])
        with pytest.raises(PreconditionError, match="rainbow"):
            general_extend(g, Matching([(0, 1, 1), (2, 3, 1)]), 3)

    def test_sweep_against_enumeration(self):
        rng = SplitMix64(4242)
        cases = 0
        while cases < 150:
            n = 4 + rng.below(4)
            edges = {}
            for u, v in itertools.combinations(range(n), 2):
                if rng.below(10) < 6:
                    edges[(u, v)] = rng.below(4)
            g = EdgeColouredGraph(n, [(u, v, c) for (u, v), c in edges.items()])
            k = 2
            if g.order < 3 * (k - 1) + 1:
                continue
            pairs = all_extension_pairs(g, k)
            for m, _ in pairs:
                if any(g.colour_degree(z) < k for z in g.vertices - m.vertices):
                    continue
                result = general_extend(g, m, k)
                assert (result.matching, result.edge) in pairs
                cases += 1

    def test_chain_heavy_sweep(self):
        # dense few-coloured instances force the walk (uncovered set is
        # independent) and larger k exercises the re-orientation
        rng = SplitMix64(9999)
        cases = 0
        while cases < 80:
            k = 3 + rng.below(2)
            n = 3 * (k - 1) + 1 + rng.below(3)
            edges = {}
            for u, v in itertools.combinations(range(n), 2):
                if rng.below(10) < 8:
                    edges[(u, v)] = rng.below(k + 1)
            g = EdgeColouredGraph(n, [(u, v, c) for (u, v), c in edges.items()])
            best, witness = max_rainbow_matching_exact(g)
            if best < k - 1:
                continue
            m = Matching(witness.edges[: k - 1])
            if any(g.colour_degree(z) < k for z in g.vertices - m.vertices):
                continue
            result = general_extend(g, m, k)
            assert is_rainbow_matching(g, result.matching)
            assert len(result.matching) == k - 1
            u, v, c = result.edge
            assert g.edge_colour(u, v) == c
            assert not ({u, v} & result.matching.vertices)
            cases += 1


class TestDispatch:
    def test_bipartite_threshold_beats_general(self):
        # 4 vertices suffice for bipartite k=2 where general needs 4 too;
        # with k=3 bipartite needs 6 < 7 general
        g = EdgeColouredGraph(
            6,
            [(0, 3, 1), (0, 4, 2), (1, 3, 3), (1, 4, 4), (2, 4, 5), (2, 5, 6), (0, 5, 7), (1, 5, 8), (2, 3, 9)],
        )
        m = Matching([(0, 3, 1), (1, 4, 4)])
        result = extend_dispatch(g, m, 3, "bipartite")
        assert not ({result.edge[0], result.edge[1]} & result.matching.vertices)
        with pytest.raises(PreconditionError, match="3\\(k-1\\)\\+1"):
            extend_dispatch(g, m, 3, "general")

    def test_bipartite_family_rejects_triangle(self):
        g = EdgeColouredGraph(4, [(0, 1, 0), (1, 2, 1), (0, 2, 2)])
        with pytest.raises(PreconditionError, match="bipartite"):
            extend_dispatch(g, Matching([(0, 1, 0)]), 2, "bipartite")

    def test_general_family_accepts_bipartite_graphs(self):
        g = EdgeColouredGraph(4, [(0, 2, 1), (1, 3, 2)])
        result = extend_dispatch(g, Matching([(0, 2, 1)]), 2, "general")
        assert result.edge == (1, 3, 2)

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="family"):
            extend_dispatch(EdgeColouredGraph(4), Matching(), 1, "planar")


class TestFindRainbowMatching:
    def test_k1_any_edge(self):
        g = EdgeColouredGraph(6, [(0, 1, 3), (2, 4, 1), (3, 5, 2)])
        m = find_rainbow_matching(g, 1, 3, "general")
        assert len(m) == 1

    def test_rainbow_k9(self):
        m = find_rainbow_matching(rainbow_complete(9), 2, 3, "general")
        assert len(m) == 2 and m.is_rainbow

    def test_random_instance_vs_oracle(self):
        g = generate(GenSpec("min_colour_degree", n=13, k=3, seed=11))
        m = find_rainbow_matching(g, 3, 3, "general")
        assert is_rainbow_matching(g, m) and len(m) == 3
        best, _ = max_rainbow_matching_exact(g)
        assert best >= 3

    def test_gamma_must_be_exact(self):
        with pytest.raises(TypeError, match="float"):
            find_rainbow_matching(rainbow_complete(9), 2, 3.0, "general")

    def test_general_family_needs_gamma_three(self):
        with pytest.raises(PreconditionError, match="gamma"):
            find_rainbow_matching(rainbow_complete(12), 2, Fraction(5, 2), "general")

    def test_size_bound_enforced(self):
        with pytest.raises(PreconditionError, match="vertices"):
            find_rainbow_matching(rainbow_complete(8), 2, 3, "general")

    def test_colour_degree_enforced(self):
        g = EdgeColouredGraph(9, [(0, 1, 0)])
        with pytest.raises(PreconditionError, match="colour degree"):
            find_rainbow_matching(g, 2, 3, "general")


class TestTheoremWrappers:
    def test_general_k2_on_rainbow_k9(self):
        m = rainbow_matching(rainbow_complete(9), 2)
        assert len(m) == 2

    def test_general_threshold_error_names_inequality(self):
        with pytest.raises(PreconditionError, match="16 < 18"):
            rainbow_matching(rainbow_complete(8), 2)

    def test_bipartite_threshold_eps_half(self):
        # full bipartite rainbow graph on 11 >= 3.5*2+4 vertices
        edges = []
        c = 0
        for a in range(6):
            for b in range(6, 11):
                edges.append((a, b, c))
                c += 1
        g = EdgeColouredGraph(11, edges)
        m = rainbow_matching_bipartite(g, 2, Fraction(1, 2))
        assert len(m) == 2

    def test_bipartite_threshold_error(self):
        edges = [(a, 5 + b, a * 5 + b) for a in range(5) for b in range(5)]
        g = EdgeColouredGraph(10, edges)
        with pytest.raises(PreconditionError, match="eps"):
            rainbow_matching_bipartite(g, 2, Fraction(1, 2))

    def test_bipartite_rejects_non_bipartite(self):
        with pytest.raises(PreconditionError, match="bipartite"):
            rainbow_matching_bipartite(rainbow_complete(12), 2)

    def test_eps_range(self):
        g = rainbow_complete(12)
        with pytest.raises(PreconditionError, match="eps"):
            rainbow_matching_bipartite(g, 2, Fraction(2, 3))

    def test_mini_sweeps_verified(self):
        for theorem, spec in sweep_specs("T1", 30, 500):
            g = generate(spec)
            m = rainbow_matching(g, spec.k)
            assert is_rainbow_matching(g, m) and len(m) == spec.k
        done = 0
        for theorem, spec in sweep_specs("T2", 60, 700):
            g = generate(spec)
            if g.size == 0 or g.min_colour_degree() < spec.k:
                continue
            m = rainbow_matching_bipartite(g, spec.k, Fraction(spec.epsilon))
            assert is_rainbow_matching(g, m) and len(m) == spec.k
            done += 1
        assert done >= 20


class TestDriverTrace:
    def test_params_strictly_increase_and_budget_holds(self):
        for theorem, spec in sweep_specs("T1", 40, 81000):
            g = generate(spec)
            records = []
            rainbow_matching(g, spec.k, trace=records.append)
            by_driver = {}
            for r in records:
                by_driver.setdefault(r["driver"], []).append(r)
            for recs in by_driver.values():
                params_seen = [
                    tuple(r["params"])
                    for r in recs
                    if r["action"] in ("switch", "extend", "absorb")
                ]
                assert all(a < b for a, b in zip(params_seen, params_seen[1:]))
                ks = {r["k"] for r in recs}
                assert len(ks) == 1
                k = ks.pop()
                assert max(r["iteration"] for r in recs) <= k * k + 3 * k

    def test_terminal_actions(self):
        g = generate(GenSpec("min_colour_degree", n=13, k=3, seed=5))
        records = []
        rainbow_matching(g, 3, trace=records.append)
        last_by_driver = {}
        for r in records:
            last_by_driver[r["driver"]] = r["action"]
        assert set(last_by_driver.values()) <= {"done", "recurse"}


# ---------------------------------------------------------------------------
# synthetic states for the driver moves that random desk-scale sweeps cannot
# reach (the size bound excludes them below roughly k = 10)


def three_part_state():
    """k=5 state: three single-colour parts, tight residual, uncovered z=14."""
    edges = [
        # parts: pair, relay-hub
        (0, 1, 0), (2, 3, 0),
        (4, 5, 1), (6, 7, 1),
        (8, 9, 2), (10, 11, 2),
        # residual matching
        (12, 13, 9),
        # z = 14 touches both matched endpoints plus one relay per colour
        (12, 14, 3), (13, 14, 4),
        (1, 14, 0), (5, 14, 1), (9, 14, 2),
    ]
    g = EdgeColouredGraph(15, edges)
    parts = [
        adapter_from_parallel_pairs(g, [(0, 1)], [2], 3),
        adapter_from_parallel_pairs(g, [(4, 5)], [6], 7),
        adapter_from_parallel_pairs(g, [(8, 9)], [10], 11),
    ]
    state = PartitionState(g, 5, parts, Matching([(12, 13, 9)]))
    state.validate()
    return g, state


class TestFoldResidual:
    def test_averaging_builds_one_large_part(self):
        g, state = three_part_state()
        outcome = _fold_residual(g, state, k=5, l0=1, l1=1)
        assert outcome == "absorb"
        state.validate()
        assert state.params == (2,)
        assert state.matching == Matching([(12, 13, 9), (10, 11, 2)])
        assert 14 in state.parts[0].vertices

    def test_fresh_colour_completes(self):
        # an extra unparked, unmatched colour at z completes immediately
        g, state = three_part_state()
        extra = EdgeColouredGraph(15, [e for e in g.edges] + [(0, 14, 8)])
        parts = [
            adapter_from_parallel_pairs(extra, [(0, 1)], [2], 3),
            adapter_from_parallel_pairs(extra, [(4, 5)], [6], 7),
            adapter_from_parallel_pairs(extra, [(8, 9)], [10], 11),
        ]
        state = PartitionState(extra, 5, parts, Matching([(12, 13, 9)]))
        outcome = _fold_residual(extra, state, k=5, l0=1, l1=1)
        assert isinstance(outcome, Matching)
        assert len(outcome) == 5
        assert is_rainbow_matching(extra, outcome)
        assert (0, 14, 8) in outcome.edges

    def test_matched_colour_into_part_switches(self):
        # rep colour equals the residual matching's colour, endpoint in a
        # part: absorb that part around the pair (needs one spare vertex)
        edges = [
            (0, 1, 0), (2, 3, 0),
            (4, 5, 1), (6, 7, 1),
            (8, 9, 2), (10, 11, 2),
            (12, 13, 9),
            (12, 14, 3), (13, 14, 4),         # covered endpoints: not reps
            (4, 14, 9),                       # the violating rep
            (1, 14, 0), (9, 14, 2), (14, 15, 10),
        ]
        g = EdgeColouredGraph(16, edges)
        parts = [
            adapter_from_parallel_pairs(g, [(0, 1)], [2], 3),
            adapter_from_parallel_pairs(g, [(4, 5)], [6], 7),
            adapter_from_parallel_pairs(g, [(8, 9)], [10], 11),
        ]
        state = PartitionState(g, 5, parts, Matching([(12, 13, 9)]))
        state.validate()
        outcome = _fold_residual(g, state, k=5, l0=1, l1=1)
        assert outcome == "switch"
        state.validate()
        assert state.params == (2, 1, 1)
        grown = state.parts[0]
        assert grown.colours == frozenset({1, 9})
        assert {12, 13, 14} <= grown.vertices
        assert len(state.matching) == 0

    def test_matched_colour_to_free_vertex_builds_pair_part(self):
        edges = [
            (0, 1, 0), (2, 3, 0),
            (4, 5, 1), (6, 7, 1),
            (8, 9, 2), (10, 11, 2),
            (12, 13, 9),
            (12, 14, 3), (13, 14, 4),         # covered endpoints: not reps
            (14, 15, 9),                      # rep into the free residual
            (1, 14, 0), (5, 14, 1), (9, 14, 2),
        ]
        g = EdgeColouredGraph(17, edges)
        parts = [
            adapter_from_parallel_pairs(g, [(0, 1)], [2], 3),
            adapter_from_parallel_pairs(g, [(4, 5)], [6], 7),
            adapter_from_parallel_pairs(g, [(8, 9)], [10], 11),
        ]
        state = PartitionState(g, 5, parts, Matching([(12, 13, 9)]))
        state.validate()
        outcome = _fold_residual(g, state, k=5, l0=1, l1=1)
        assert outcome == "switch"
        state.validate()
        assert state.params == (1, 1, 1, 1)
        assert len(state.matching) == 0
        new_part = [p for p in state.parts if 14 in p.vertices][0]
        assert new_part.vertices == frozenset({12, 13, 14, 15})
        assert new_part.colours == frozenset({9})


class TestRecursionViolationHandling:
    def lead_setup(self):
        edges = [
            # level-2 lead part: pairs (0,1):0 and (2,3):1, relays 4, 5, hub 6
            (0, 1, 0), (4, 6, 0), (2, 3, 1), (5, 6, 1),
            # inner matching living outside the part
            (7, 8, 2), (9, 10, 3),
        ]
        return edges

    def test_fresh_colour_completes(self):
        edges = self.lead_setup() + [
            (6, 11, 4),
            (11, 12, 5), (11, 13, 6), (11, 14, 7), (11, 15, 8),
        ]
        g = EdgeColouredGraph(16, edges)
        lead = adapter_from_parallel_pairs(g, [(0, 1), (2, 3)], [4, 5], 6)
        state = PartitionState(g, 5, [lead], Matching([(7, 8, 2), (9, 10, 3)]))
        violation = _HypothesisViolation(11, Matching([(7, 8, 2), (9, 10, 3)]))
        finished = _handle_recursion_violation(g, state, lead, violation, k=5)
        assert finished is not None
        assert len(finished) == 5 and is_rainbow_matching(g, finished)
        assert (6, 11, 4) in finished.edges

    def test_matched_colour_absorbs_into_lead(self):
        edges = self.lead_setup() + [
            (6, 11, 2),
            (11, 12, 5), (11, 13, 6), (11, 14, 7), (11, 15, 8),
        ]
        g = EdgeColouredGraph(16, edges)
        lead = adapter_from_parallel_pairs(g, [(0, 1), (2, 3)], [4, 5], 6)
        state = PartitionState(g, 5, [lead], Matching([(7, 8, 2), (9, 10, 3)]))
        violation = _HypothesisViolation(11, Matching([(7, 8, 2), (9, 10, 3)]))
        finished = _handle_recursion_violation(g, state, lead, violation, k=5)
        assert finished is None
        state.validate()
        assert state.params == (3,)
        assert state.parts[0].colours == frozenset({0, 1, 2})
        assert {7, 8, 11} <= state.parts[0].vertices
        assert state.matching == Matching([(9, 10, 3)])

    def test_deficit_propagates_upward(self):
        g = EdgeColouredGraph(16, self.lead_setup())
        lead = adapter_from_parallel_pairs(g, [(0, 1), (2, 3)], [4, 5], 6)
        state = PartitionState(g, 5, [lead], Matching([(7, 8, 2), (9, 10, 3)]))
        inner = Matching([(7, 8, 2), (9, 10, 3)])
        with pytest.raises(_HypothesisViolation) as info:
            _handle_recursion_violation(g, state, lead, _HypothesisViolation(11, inner), k=5)
        assert info.value.vertex == 11
        # the propagated witness grows by the lead part's witness
        assert len(info.value.matching) == len(inner) + 2
