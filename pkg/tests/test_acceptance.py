"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s`.  Every tolerance is exact;
the only sampling is over pinned seeds, so reruns are bit-identical.
"""

import itertools
import json
import os
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from rainbowmatch._rng import SplitMix64
from rainbowmatch.adapters import (
    adapter_absorb,
    adapter_from_parallel_pairs,
    adapter_union,
    check_adapter,
)
from rainbowmatch.decompose import cover_lower_bound, decompose, sharpness_instance, verify_decomposition
from rainbowmatch.genlab import GenSpec, exhaustive_check, generate, sweep_specs
from rainbowmatch.graphs import EdgeColouredGraph, Matching, is_rainbow_matching
from rainbowmatch.extend import rainbow_matching, rainbow_matching_bipartite
from rainbowmatch.oracle import BipartiteAssignment, max_bipartite_matching, max_rainbow_matching_exact

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def report(criterion, text):
    print(f"ACCEPTANCE {criterion}: {text} PASS")


def test_criterion_1_decomposition_sweep():
    start = time.perf_counter()
    specs = sweep_specs("T3", 500, 20260810)
    for _, spec in specs:
        assert 5 <= spec.n <= 40 and spec.t in (11, 12, 13)
        graph = generate(spec)
        result = decompose(graph, spec.t)
        assert verify_decomposition(graph, result), spec
        assert len(result.parts) == (spec.t * graph.order) // 2, spec
    elapsed = time.perf_counter() - start
    report(1, f"500/500 decompositions verified, exact part counts, {elapsed:.1f}s")


def test_criterion_2_sharpness_tight():
    graph = sharpness_instance(11, 12)
    result = decompose(graph, 11)
    bound = cover_lower_bound(graph)
    assert verify_decomposition(graph, result)
    assert result.nonempty_count == 66 == (11 * 12) // 2 == bound
    report(2, "monochromatic K_12: 66 nonempty parts = floor(tn/2) = lower bound,")


@pytest.fixture(scope="module")
def t1_sweep():
    runs = []
    start = time.perf_counter()
    for _, spec in sweep_specs("T1", 500, 31415926):
        graph = generate(spec)
        records = []
        found = rainbow_matching(graph, spec.k, trace=records.append)
        runs.append((spec, graph, found, records))
    return runs, time.perf_counter() - start


def test_criterion_3_general_sweep(t1_sweep):
    runs, elapsed = t1_sweep
    assert len(runs) == 500
    oracle_checked = 0
    oracle_start = time.perf_counter()
    for spec, graph, found, _ in runs:
        assert 2 * spec.n >= 7 * spec.k + 4
        assert is_rainbow_matching(graph, found) and len(found) == spec.k, spec
        if graph.order <= 14:
            best, _ = max_rainbow_matching_exact(graph)
            assert best >= spec.k, spec
            oracle_checked += 1
    oracle_elapsed = time.perf_counter() - oracle_start
    assert oracle_checked > 50
    report(
        3,
        f"500/500 verified (k in 2..4), oracle agreed on {oracle_checked} small "
        f"instances, {elapsed:.1f}s + {oracle_elapsed:.1f}s oracle,",
    )


def test_criterion_4_bipartite_sweep():
    start = time.perf_counter()
    eps = Fraction(1, 2)
    verified = 0
    seed = 0
    attempts = 0
    while verified < 300:
        attempts += 1
        assert attempts < 3000, "hypothesis-meeting instances too rare"
        k = (2, 3)[seed % 2]
        shape = SplitMix64(seed ^ 0x5DEECE66D)
        floor_n = (3 + eps) * k + 1 / (eps * eps)
        n = -((-floor_n.numerator) // floor_n.denominator) + shape.below(10)
        spec = GenSpec(
            "bipartite", n=n, k=k, seed=seed, epsilon="1/2",
            edge_probability="3/4", colours=2 * k,
        )
        seed += 1
        graph = generate(spec)
        assert Fraction(graph.order) >= floor_n  # exact-rational threshold
        if graph.size == 0 or graph.min_colour_degree() < k:
            continue
        found = rainbow_matching_bipartite(graph, k, eps)
        assert is_rainbow_matching(graph, found) and len(found) == k, spec
        verified += 1
    elapsed = time.perf_counter() - start
    report(4, f"300/300 hypothesis-meeting instances verified ({attempts} drawn), {elapsed:.1f}s,")


def test_criterion_5_extension_lemmas_exhaustive():
    start = time.perf_counter()
    bipartite = exhaustive_check("P_bipartite_small")  # n <= 6, k = 2, <= 3 colours
    assert bipartite.outcome == "verified", bipartite.detail
    general = exhaustive_check("L_general_small")  # n <= 4, k = 2
    assert general.outcome == "verified", general.detail
    elapsed = time.perf_counter() - start
    report(
        5,
        f"exhaustive: bipartite {bipartite.cases['cases']} cases / "
        f"{bipartite.cases['instances']} graphs, general {general.cases['cases']} "
        f"cases / {general.cases['instances']} graphs, zero counterexamples, "
        f"{elapsed:.1f}s,",
    )


def test_criterion_6_adapter_algebra():
    exhaustive = exhaustive_check("adapter_props")
    assert exhaustive.outcome == "verified", exhaustive.detail

    rng = SplitMix64(0xADA9)
    randomized = 0
    while randomized < 1000:
        ell_a = 1 + rng.below(3)
        ell_b = 1 + rng.below(2)
        base = 3 * (ell_a + ell_b) + 2
        n = base + 3
        edges = {}
        # first gadget on [0, 3*ell_a], colours 0..ell_a-1
        first_ids = list(range(3 * ell_a + 1))
        second_ids = list(range(3 * ell_a + 1, base))
        for i in range(ell_a):
            edges[(first_ids[2 * i], first_ids[2 * i + 1])] = i
            edges[(first_ids[2 * ell_a + i], first_ids[3 * ell_a])] = i
        for i in range(ell_b):
            x, y = second_ids[2 * i], second_ids[2 * i + 1]
            edges[(min(x, y), max(x, y))] = ell_a + i
            z, hub = second_ids[2 * ell_b + i], second_ids[3 * ell_b]
            edges[(min(z, hub), max(z, hub))] = ell_a + i
        # absorb material: pair (base, base+1) and link (base+2, w)
        fresh = ell_a + ell_b
        w = first_ids[rng.below(len(first_ids))]
        edges[(base, base + 1)] = fresh
        edges[(min(base + 2, w), max(base + 2, w))] = fresh
        graph = EdgeColouredGraph(n, [(u, v, c) for (u, v), c in edges.items()])

        first = adapter_from_parallel_pairs(
            graph,
            [(first_ids[2 * i], first_ids[2 * i + 1]) for i in range(ell_a)],
            [first_ids[2 * ell_a + i] for i in range(ell_a)],
            first_ids[3 * ell_a],
        )
        second = adapter_from_parallel_pairs(
            graph,
            [(second_ids[2 * i], second_ids[2 * i + 1]) for i in range(ell_b)],
            [second_ids[2 * ell_b + i] for i in range(ell_b)],
            second_ids[3 * ell_b],
        )
        union = adapter_union([first, second])
        grown = adapter_absorb(graph, first, base, base + 1, base + 2, w)
        assert check_adapter(graph, first) and check_adapter(graph, second)
        assert check_adapter(graph, union) and check_adapter(graph, grown)
        assert len(first.vertices) == 3 * len(first.colours) + 1
        assert len(second.vertices) == 3 * len(second.colours) + 1
        assert union.level == max(first.level, second.level)
        assert len(grown.vertices) == len(first.vertices) + 3
        assert len(grown.colours) == len(first.colours) + 1
        assert grown.level == first.level + 1
        randomized += 3  # three constructions checked per round
    report(
        6,
        f"{exhaustive.cases['constructions']} exhaustive + {randomized} randomized "
        f"constructions verified with exact size identities,",
    )


def test_criterion_7_oracle_cross_validation():
    def brute_force(adjacency, n_items):
        best = 0

        def rec(i, used):
            nonlocal best
            if i == n_items:
                best = max(best, len(used))
                return
            rec(i + 1, used)
            for s in adjacency.get(i, ()):
                if s not in used:
                    used.add(s)
                    rec(i + 1, used)
                    used.discard(s)

        rec(0, set())
        return best

    rng = SplitMix64(0x0AC1E)
    for _ in range(200):
        n_items = 1 + rng.below(10)
        n_slots = 1 + rng.below(12)
        adjacency = {
            i: [s for s in range(n_slots) if rng.below(10) < 4] for i in range(n_items)
        }
        assignment = BipartiteAssignment(
            list(range(n_items)), list(range(n_slots)), adjacency
        )
        max_bipartite_matching(assignment)
        assert len(assignment.assignment) == brute_force(adjacency, n_items)

    k4 = EdgeColouredGraph(
        4, [(0, 1, 1), (2, 3, 1), (0, 2, 2), (1, 3, 2), (0, 3, 3), (1, 2, 3)]
    )
    assert max_rainbow_matching_exact(k4)[0] == 1
    c4 = EdgeColouredGraph(4, [(0, 1, 1), (1, 2, 2), (2, 3, 3), (0, 3, 4)])
    assert max_rainbow_matching_exact(c4)[0] == 2
    report(7, "200/200 matcher = brute force; K_4 proper -> 1, rainbow C_4 -> 2,")


def test_criterion_8_byte_identical_outputs(tmp_path):
    env = dict(os.environ)
    env["PYTHONPATH"] = os.path.join(ROOT, "src") + os.pathsep + env.get("PYTHONPATH", "")

    def run(args):
        return subprocess.run(
            [sys.executable, "-m", "rainbowmatch", *args],
            capture_output=True,
            env=env,
            cwd=str(tmp_path),
            check=False,
        )

    outputs = []
    for round_id in ("a", "b"):
        graph_path = tmp_path / f"g_{round_id}.ecg"
        gen = run(
            ["gen", "--model", "min_colour_degree", "--n", "13", "--k", "3",
             "--seed", "7", "--out", str(graph_path)]
        )
        assert gen.returncode == 0, gen.stderr
        solve = run(["solve", "--input", str(graph_path), "--k", "3"])
        assert solve.returncode == 0, solve.stderr
        dec_graph = tmp_path / f"m_{round_id}.ecg"
        gen2 = run(
            ["gen", "--model", "mono_budget", "--n", "20", "--t", "11",
             "--seed", "9", "--out", str(dec_graph)]
        )
        assert gen2.returncode == 0, gen2.stderr
        dec_out = tmp_path / f"d_{round_id}.json"
        dec = run(["decompose", "--input", str(dec_graph), "--t", "11", "--out", str(dec_out)])
        assert dec.returncode == 0, dec.stderr
        outputs.append(
            (
                graph_path.read_bytes(),
                solve.stdout,
                dec_graph.read_bytes(),
                dec_out.read_bytes(),
            )
        )
    assert outputs[0] == outputs[1]
    report(8, "gen/solve/decompose byte-identical across consecutive runs,")


def test_criterion_9_driver_sanity(t1_sweep):
    runs, _ = t1_sweep
    invocations = 0
    for spec, _, _, records in runs:
        by_driver = {}
        for record in records:
            by_driver.setdefault(record["driver"], []).append(record)
        for driver_records in by_driver.values():
            invocations += 1
            k = driver_records[0]["k"]
            assert all(r["k"] == k for r in driver_records)
            moves = [
                tuple(r["params"])
                for r in driver_records
                if r["action"] in ("switch", "extend", "absorb")
            ]
            assert all(a < b for a, b in zip(moves, moves[1:])), spec
            assert max(r["iteration"] for r in driver_records) <= k * k + 3 * k, spec
    report(
        9,
        f"{invocations} driver invocations: parameter strings strictly increase, "
        f"iteration budget respected,",
    )
