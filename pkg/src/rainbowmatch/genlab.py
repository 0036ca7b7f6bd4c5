"""Seeded instance generators and the verification harness.

`generate` is a pure function of its GenSpec: all randomness comes from the
pinned splitmix64 stream, so a spec reproduces its graph bit-for-bit across
platforms.  `run_trial` checks a statement's hypotheses on a generated
instance, runs the constructive routine, and independently re-verifies the
witness; `exhaustive_check` replaces sampling with full enumeration at tiny
scale.  Colourings are enumerated up to colour renaming (restricted-growth
sequences); vertex relabellings are not deduplicated, which only costs time.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from ._rng import SplitMix64
from .adapters import (
    adapter_absorb,
    adapter_from_parallel_pairs,
    adapter_union,
    check_adapter,
)
from .decompose import decompose, sharpness_instance, verify_decomposition
from .errors import (
    HallViolation,
    InternalInvariantError,
    PreconditionError,
    UnsatisfiableSpec,
)
from .extend import (
    bipartite_extend,
    general_extend,
    rainbow_matching,
    rainbow_matching_bipartite,
)
from .graphs import EdgeColouredGraph, Matching, format_ecg, is_rainbow_matching
from .oracle import max_rainbow_matching_exact

MODELS = ("uniform", "min_colour_degree", "proper", "bipartite", "sharpness", "mono_budget")
THEOREMS = ("T1", "T2", "T3", "L_general", "P_bipartite")
STATEMENTS = ("adapter_props", "L_general_small", "P_bipartite_small")


# ---------------------------------------------------------------------------
# generation


@dataclass(frozen=True)
class GenSpec:
    """Everything needed to regenerate an instance; JSON round-trippable.

    `edge_probability` and `epsilon` are exact fractions written as text
    ("1/2") so serialization never loses precision.
    """

    model: str
    n: int
    seed: int = 0
    k: Optional[int] = None
    t: Optional[int] = None
    epsilon: Optional[str] = None
    edge_probability: str = "1/2"
    colours: Optional[int] = None

    def to_json_dict(self) -> dict:
        out: dict = {"model": self.model, "n": self.n, "seed": self.seed}
        for key in ("k", "t", "epsilon", "colours"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        out["edge_probability"] = self.edge_probability
        return out

    @staticmethod
    def from_json_dict(data: dict) -> "GenSpec":
        return GenSpec(
            model=data["model"],
            n=int(data["n"]),
            seed=int(data.get("seed", 0)),
            k=None if data.get("k") is None else int(data["k"]),
            t=None if data.get("t") is None else int(data["t"]),
            epsilon=data.get("epsilon"),
            edge_probability=str(data.get("edge_probability", "1/2")),
            colours=None if data.get("colours") is None else int(data["colours"]),
        )


def _probability(spec: GenSpec) -> Fraction:
    p = Fraction(spec.edge_probability)
    if not 0 <= p <= 1:
        raise UnsatisfiableSpec(f"edge probability {p} outside [0, 1]")
    return p


def _colour_count(spec: GenSpec) -> int:
    if spec.colours is not None:
        if spec.colours < 1:
            raise UnsatisfiableSpec("colour count must be positive")
        return spec.colours
    if spec.model == "min_colour_degree":
        return max(spec.k or 1, 1)
    return 3


def generate(spec: GenSpec) -> EdgeColouredGraph:
    """Deterministic instance for the spec; raises UnsatisfiableSpec when the
    requested parameters cannot be realized."""
    if spec.model not in MODELS:
        raise UnsatisfiableSpec(f"unknown model {spec.model!r}")
    if spec.n < 0:
        raise UnsatisfiableSpec("n must be non-negative")
    rng = SplitMix64(spec.seed)
    if spec.model == "uniform":
        pairs = itertools.combinations(range(spec.n), 2)
        edges = _coin_edges(pairs, _probability(spec), _colour_count(spec), rng)
        return EdgeColouredGraph(spec.n, edges)
    if spec.model == "bipartite":
        left = -(-spec.n // 2)
        pairs = ((a, b) for a in range(left) for b in range(left, spec.n))
        edges = _coin_edges(pairs, _probability(spec), _colour_count(spec), rng)
        return EdgeColouredGraph(spec.n, edges)
    if spec.model == "min_colour_degree":
        return _min_colour_degree_model(spec, rng)
    if spec.model == "proper":
        return _proper_model(spec, rng)
    if spec.model == "sharpness":
        if spec.t is None:
            raise UnsatisfiableSpec("sharpness model needs t")
        try:
            return sharpness_instance(spec.t, spec.n)
        except ValueError as exc:
            raise UnsatisfiableSpec(str(exc)) from exc
    if spec.model == "mono_budget":
        if spec.t is None or spec.t < 1:
            raise UnsatisfiableSpec("mono_budget model needs t >= 1")
        return _mono_budget_model(spec, rng)
    raise AssertionError  # pragma: no cover


def _coin_edges(pairs, p: Fraction, colours: int, rng: SplitMix64) -> list:
    edges = []
    for u, v in pairs:
        if rng.chance(p):
            edges.append((u, v, rng.below(colours)))
    return edges


def _min_colour_degree_model(spec: GenSpec, rng: SplitMix64) -> EdgeColouredGraph:
    k = spec.k
    if k is None or k < 1:
        raise UnsatisfiableSpec("min_colour_degree model needs k >= 1")
    if spec.n <= k:
        raise UnsatisfiableSpec(f"no graph on n = {spec.n} vertices has colour degree {k}")
    adj: dict[int, dict[int, int]] = {v: {} for v in range(spec.n)}
    base = _coin_edges(
        itertools.combinations(range(spec.n), 2), _probability(spec), _colour_count(spec), rng
    )
    for u, v, c in base:
        adj[u][v] = c
        adj[v][u] = c
    # repair: a fresh colour raises the deficient endpoint's colour degree by
    # exactly one, so this terminates after at most k*n additions
    next_colour = max((c for nb in adj.values() for c in nb.values()), default=-1) + 1
    while True:
        deficient = next((v for v in range(spec.n) if len(set(adj[v].values())) < k), None)
        if deficient is None:
            break
        options = [u for u in range(spec.n) if u != deficient and u not in adj[deficient]]
        if not options:
            raise UnsatisfiableSpec(
                f"vertex {deficient} is saturated but below colour degree {k}"
            )
        u = options[rng.below(len(options))]
        adj[deficient][u] = next_colour
        adj[u][deficient] = next_colour
        next_colour += 1
    edges = [(u, v, c) for u, nb in adj.items() for v, c in nb.items() if u < v]
    return EdgeColouredGraph(spec.n, edges)


def _mono_budget_model(spec: GenSpec, rng: SplitMix64) -> EdgeColouredGraph:
    t = spec.t
    adj: dict[int, dict[int, int]] = {v: {} for v in range(spec.n)}
    for u, v, c in _coin_edges(
        itertools.combinations(range(spec.n), 2), _probability(spec), _colour_count(spec), rng
    ):
        adj[u][v] = c
        adj[v][u] = c
    # trim: lowest offending vertex, its highest offending colour, dropping
    # edges towards the highest-index neighbours first
    while True:
        offender = None
        for v in range(spec.n):
            counts: dict[int, int] = {}
            for c in adj[v].values():
                counts[c] = counts.get(c, 0) + 1
            over = sorted((c for c, cnt in counts.items() if cnt > t), reverse=True)
            if over:
                offender = (v, over[0], counts[over[0]])
                break
        if offender is None:
            break
        v, colour, count = offender
        victims = sorted((u for u, c in adj[v].items() if c == colour), reverse=True)
        for u in victims[: count - t]:
            del adj[v][u]
            del adj[u][v]
    edges = [(u, v, c) for u, nb in adj.items() for v, c in nb.items() if u < v]
    return EdgeColouredGraph(spec.n, edges)


def _proper_model(spec: GenSpec, rng: SplitMix64) -> EdgeColouredGraph:
    pairs = [
        (u, v)
        for u, v in itertools.combinations(range(spec.n), 2)
        if rng.chance(_probability(spec))
    ]
    colouring = _misra_gries(spec.n, pairs)
    return EdgeColouredGraph(spec.n, [(u, v, colouring[(u, v)]) for u, v in pairs])


def _misra_gries(n: int, pairs: list[tuple[int, int]]) -> dict[tuple[int, int], int]:
    """Proper edge colouring with at most max_degree + 1 colours.

    Fan construction plus alternating-path inversion.  The single source of
    truth is `at[v]`: colour -> neighbour; an edge's colour is read back from
    it.  All choices are smallest-first, so the colouring is deterministic.
    """
    at: list[dict[int, int]] = [dict() for _ in range(n)]
    degree = [0] * n
    for u, v in pairs:
        degree[u] += 1
        degree[v] += 1
    palette = (max(degree) if pairs else 0) + 1

    def free(v: int) -> int:
        for c in range(palette):
            if c not in at[v]:
                return c
        raise InternalInvariantError("palette exhausted")

    def colour_between(a: int, b: int) -> Optional[int]:
        for c, nb in at[a].items():
            if nb == b:
                return c
        return None

    def set_edge(a: int, b: int, c: int) -> None:
        at[a][c] = b
        at[b][c] = a

    def unset_edge(a: int, b: int, c: int) -> None:
        del at[a][c]
        del at[b][c]

    for u, v in pairs:
        fan = [v]
        members = {v}
        while True:
            d = free(fan[-1])
            nxt = at[u].get(d)
            if nxt is None or nxt in members:
                break
            fan.append(nxt)
            members.add(nxt)
        d = free(fan[-1])
        c = free(u)
        if d in at[u]:
            # invert the maximal path from u alternating colours d, c; a
            # vertex holds at most one edge of each colour, so it is simple
            path = []
            x, want = u, d
            while True:
                nxt = at[x].get(want)
                if nxt is None:
                    break
                path.append((x, nxt, want))
                x = nxt
                want = c if want == d else d
            for a, b, col in path:
                unset_edge(a, b, col)
            for a, b, col in path:
                set_edge(a, b, c if col == d else d)
        # first fan prefix still valid after the inversion whose end has d free
        rotate_to = None
        for j in range(len(fan)):
            if j > 0:
                cj = colour_between(u, fan[j])
                if cj is None or cj in at[fan[j - 1]]:
                    break
            if d not in at[fan[j]]:
                rotate_to = j
                break
        if rotate_to is None:
            raise InternalInvariantError("no valid fan rotation point")
        for j in range(rotate_to):
            shifted = colour_between(u, fan[j + 1])
            current = colour_between(u, fan[j])
            if current is not None:
                unset_edge(u, fan[j], current)
            unset_edge(u, fan[j + 1], shifted)
            set_edge(u, fan[j], shifted)
        current = colour_between(u, fan[rotate_to])
        if current is not None:
            unset_edge(u, fan[rotate_to], current)
        set_edge(u, fan[rotate_to], d)

    out = {}
    for u, v in pairs:
        c = colour_between(u, v)
        if c is None:
            raise InternalInvariantError(f"edge ({u}, {v}) left uncoloured")
        out[(u, v)] = c
    return out


# ---------------------------------------------------------------------------
# trials


@dataclass
class TrialReport:
    spec: Optional[GenSpec]
    theorem: str
    outcome: str  # "verified" | "failed" | "precondition_unmet"
    witness: Optional[dict]
    elapsed: float
    detail: str = ""
    cases: Optional[dict] = None

    def to_json_dict(self) -> dict:
        out: dict = {
            "theorem": self.theorem,
            "outcome": self.outcome,
            "elapsed": self.elapsed,
        }
        if self.spec is not None:
            out["spec"] = self.spec.to_json_dict()
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        if self.cases is not None:
            out["cases"] = self.cases
        return out


def _matching_json(matching: Matching) -> list:
    return [list(e) for e in matching.edges]


def run_trial(theorem: str, spec: GenSpec) -> TrialReport:
    """Generate, check hypotheses, run the constructive routine, re-verify.

    Failures never raise: every outcome is encoded in the report.  A
    `failed` outcome contradicts a proved statement and marks a bug.
    """
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem id {theorem!r}")
    start = time.perf_counter()

    def report(outcome, witness=None, detail="") -> TrialReport:
        return TrialReport(
            spec, theorem, outcome, witness, time.perf_counter() - start, detail
        )

    try:
        graph = generate(spec)
    except UnsatisfiableSpec as exc:
        return report("precondition_unmet", detail=str(exc))

    try:
        if theorem == "T1":
            return _trial_t1(graph, spec, report)
        if theorem == "T2":
            return _trial_t2(graph, spec, report)
        if theorem == "T3":
            return _trial_t3(graph, spec, report)
        return _trial_extension(graph, spec, theorem, report)
    except (InternalInvariantError, PreconditionError, HallViolation, ValueError) as exc:
        return report("failed", detail=f"{type(exc).__name__}: {exc}")


def _trial_t1(graph, spec, report) -> TrialReport:
    k = spec.k
    if k is None or k < 1:
        return report("precondition_unmet", detail="k missing")
    if 2 * graph.order < 7 * k + 4:
        return report(
            "precondition_unmet", detail=f"2n = {2 * graph.order} < 7k+4 = {7 * k + 4}"
        )
    if graph.order and graph.min_colour_degree() < k:
        return report(
            "precondition_unmet",
            detail=f"min colour degree {graph.min_colour_degree()} < {k}",
        )
    found = rainbow_matching(graph, k)
    if is_rainbow_matching(graph, found) and len(found) == k:
        return report("verified", witness={"matching": _matching_json(found)})
    return report("failed", detail="returned matching fails verification")


def _trial_t2(graph, spec, report) -> TrialReport:
    k = spec.k
    if k is None or k < 1:
        return report("precondition_unmet", detail="k missing")
    eps = Fraction(spec.epsilon or "1/2")
    if graph.bipartition() is None:
        return report("precondition_unmet", detail="graph is not bipartite")
    need = (3 + eps) * k + 1 / (eps * eps)
    if Fraction(graph.order) < need:
        return report("precondition_unmet", detail=f"n = {graph.order} < {need}")
    if graph.order and graph.min_colour_degree() < k:
        return report(
            "precondition_unmet",
            detail=f"min colour degree {graph.min_colour_degree()} < {k}",
        )
    found = rainbow_matching_bipartite(graph, k, eps)
    if is_rainbow_matching(graph, found) and len(found) == k:
        return report("verified", witness={"matching": _matching_json(found)})
    return report("failed", detail="returned matching fails verification")


def _trial_t3(graph, spec, report) -> TrialReport:
    t = spec.t
    if t is None or t < 11:
        return report("precondition_unmet", detail="guarantee needs t >= 11")
    if graph.mono_max_degree() > t:
        return report(
            "precondition_unmet",
            detail=f"monochromatic degree {graph.mono_max_degree()} > {t}",
        )
    result = decompose(graph, t)
    ok = (
        verify_decomposition(graph, result)
        and len(result.parts) == (t * graph.order) // 2
    )
    if ok:
        return report("verified", witness=result.to_json_dict())
    return report("failed", detail="decomposition fails verification")


def _trial_extension(graph, spec, theorem, report) -> TrialReport:
    k = spec.k
    if k is None or k < 1:
        return report("precondition_unmet", detail="k missing")
    best, witness = max_rainbow_matching_exact(graph)
    if best < k - 1:
        return report(
            "precondition_unmet", detail=f"no rainbow matching of size {k - 1}"
        )
    matching = Matching(witness.edges[: k - 1])
    if theorem == "P_bipartite":
        if graph.bipartition() is None:
            return report("precondition_unmet", detail="graph is not bipartite")
        if graph.order < 2 * k:
            return report("precondition_unmet", detail=f"n = {graph.order} < 2k")
    else:
        if graph.order < 3 * (k - 1) + 1:
            return report(
                "precondition_unmet", detail=f"n = {graph.order} < 3(k-1)+1"
            )
    for z in sorted(graph.vertices - matching.vertices):
        if graph.colour_degree(z) < k:
            return report(
                "precondition_unmet", detail=f"vertex {z} has colour degree < {k}"
            )
    extend = bipartite_extend if theorem == "P_bipartite" else general_extend
    result = extend(graph, matching, k)
    u, v, c = result.edge
    ok = (
        is_rainbow_matching(graph, result.matching)
        and len(result.matching) == k - 1
        and graph.edge_colour(u, v) == c
        and not (result.matching.vertices & {u, v})
    )
    if ok:
        return report(
            "verified",
            witness={
                "matching": _matching_json(result.matching),
                "edge": list(result.edge),
            },
        )
    return report("failed", detail="extension result fails verification")


# ---------------------------------------------------------------------------
# exhaustive checks


def _rgs_colourings(m: int, max_colours: int) -> Iterator[tuple[int, ...]]:
    """Colour tuples of length m, canonical up to colour renaming."""
    if m == 0:
        yield ()
        return
    stack: list[int] = []

    def rec(used: int):
        if len(stack) == m:
            yield tuple(stack)
            return
        for c in range(min(used + 1, max_colours)):
            stack.append(c)
            yield from rec(max(used, c + 1))
            stack.pop()

    yield from rec(0)


def _stirling_leq(m: int, kinds: int) -> int:
    # number of length-m restricted-growth strings over at most `kinds` symbols
    if m == 0:
        return 1
    row = [0] * (kinds + 1)
    row[0] = 1
    for _ in range(m):
        new = [0] * (kinds + 1)
        for j in range(kinds + 1):
            if row[j] == 0:
                continue
            new[j] += row[j] * j
            if j < kinds:
                new[j + 1] += row[j]
        row = new
    return sum(row)


def _estimate_instances(pair_count: int, max_colours: int) -> int:
    total = 0
    for m in range(pair_count + 1):
        total += _comb(pair_count, m) * _stirling_leq(m, max_colours)
    return total


def _comb(n: int, r: int) -> int:
    out = 1
    for i in range(r):
        out = out * (n - i) // (i + 1)
    return out


def _coloured_graphs(n: int, pairs: list, max_colours: int) -> Iterator[EdgeColouredGraph]:
    for m in range(len(pairs) + 1):
        for subset in itertools.combinations(pairs, m):
            for colouring in _rgs_colourings(m, max_colours):
                yield EdgeColouredGraph(
                    n, [(u, v, c) for (u, v), c in zip(subset, colouring)]
                )


def exhaustive_check(statement: str, limits: Optional[dict] = None) -> TrialReport:
    """Verify a statement by full enumeration at tiny scale.

    limits keys (all optional): max_n, max_colours, k, budget.  Raises
    ValueError when the estimated enumeration exceeds the budget.
    """
    if statement not in STATEMENTS:
        raise ValueError(f"unknown statement {statement!r}")
    limits = dict(limits or {})
    budget = limits.pop("budget", 2_000_000)
    start = time.perf_counter()
    if statement == "adapter_props":
        outcome, detail, cases = _exhaustive_adapters(limits)
    elif statement == "L_general_small":
        outcome, detail, cases = _exhaustive_general(limits, budget)
    else:
        outcome, detail, cases = _exhaustive_bipartite(limits, budget)
    return TrialReport(
        None, statement, outcome, None, time.perf_counter() - start, detail, cases
    )


def _exhaustive_general(limits: dict, budget: int):
    max_n = limits.get("max_n", 4)
    max_colours = limits.get("max_colours", 4)
    k = limits.get("k", 2)
    floor_n = 3 * (k - 1) + 1
    checked = instances = 0
    for n in range(floor_n, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        if _estimate_instances(len(pairs), max_colours) > budget:
            raise ValueError("limits too large: estimated enumeration exceeds budget")
        for graph in _coloured_graphs(n, pairs, max_colours):
            instances += 1
            for edges in itertools.combinations(sorted(graph.edges), k - 1):
                matching = _try_matching(edges)
                if matching is None:
                    continue
                if any(
                    graph.colour_degree(z) < k
                    for z in graph.vertices - matching.vertices
                ):
                    continue
                checked += 1
                problem = _check_extension(graph, matching, k, general_extend)
                if problem:
                    return "failed", problem, {"instances": instances, "cases": checked}
    return "verified", "", {"instances": instances, "cases": checked}


def _exhaustive_bipartite(limits: dict, budget: int):
    max_n = limits.get("max_n", 6)
    max_colours = limits.get("max_colours", 3)
    k = limits.get("k", 2)
    checked = instances = 0
    for n in range(2 * k, max_n + 1):
        for a in range(1, n // 2 + 1):
            pairs = [(i, j) for i in range(a) for j in range(a, n)]
            if _estimate_instances(len(pairs), max_colours) > budget:
                raise ValueError(
                    "limits too large: estimated enumeration exceeds budget"
                )
            for graph in _coloured_graphs(n, pairs, max_colours):
                instances += 1
                for edges in itertools.combinations(sorted(graph.edges), k - 1):
                    matching = _try_matching(edges)
                    if matching is None:
                        continue
                    if any(
                        graph.colour_degree(z) < k
                        for z in graph.vertices - matching.vertices
                    ):
                        continue
                    checked += 1
                    problem = _check_extension(graph, matching, k, bipartite_extend)
                    if problem:
                        return (
                            "failed",
                            problem,
                            {"instances": instances, "cases": checked},
                        )
    return "verified", "", {"instances": instances, "cases": checked}


def _try_matching(edges) -> Optional[Matching]:
    try:
        m = Matching(edges)
    except ValueError:
        return None
    return m if m.is_rainbow else None


def _check_extension(graph, matching, k, extend) -> str:
    """Empty string when the extension output verifies; else a description."""
    try:
        result = extend(graph, matching, k)
    except Exception as exc:  # noqa: BLE001 - counterexample reporting
        return f"{type(exc).__name__}: {exc} on {sorted(graph.edges)} M={list(matching)}"
    u, v, c = result.edge
    ok = (
        is_rainbow_matching(graph, result.matching)
        and len(result.matching) == k - 1
        and graph.edge_colour(u, v) == c
        and not (result.matching.vertices & {u, v})
    )
    if ok:
        return ""
    return f"invalid extension on {sorted(graph.edges)} M={list(matching)}"


def _exhaustive_adapters(limits: dict):
    max_level = limits.get("max_level", 2)
    built = 0
    # parallel-pairs construction, every role assignment
    for ell in range(1, max_level + 1):
        size = 3 * ell + 1
        for roles in itertools.permutations(range(size)):
            pairs = [(roles[2 * i], roles[2 * i + 1]) for i in range(ell)]
            relays = [roles[2 * ell + i] for i in range(ell)]
            hub = roles[3 * ell]
            edges = []
            for i, ((x, y), z) in enumerate(zip(pairs, relays)):
                edges.append((x, y, i))
                edges.append((z, hub, i))
            graph = EdgeColouredGraph(size, edges)
            adapter = adapter_from_parallel_pairs(graph, pairs, relays, hub)
            built += 1
            if not check_adapter(graph, adapter):
                return "failed", f"pairs construction fails at roles {roles}", None
            if len(adapter.vertices) != 3 * len(adapter.colours) + 1:
                return "failed", f"size identity fails at roles {roles}", None
            if adapter.level != len(adapter.colours) + 1:
                return "failed", f"level identity fails at roles {roles}", None
    # union of two disjoint single-colour gadgets
    for left_roles in itertools.permutations(range(4)):
        for right_roles in itertools.permutations(range(4, 8)):
            edges = [
                (left_roles[0], left_roles[1], 0),
                (left_roles[2], left_roles[3], 0),
                (right_roles[0], right_roles[1], 1),
                (right_roles[2], right_roles[3], 1),
            ]
            graph = EdgeColouredGraph(8, edges)
            first = adapter_from_parallel_pairs(
                graph, [(left_roles[0], left_roles[1])], [left_roles[2]], left_roles[3]
            )
            second = adapter_from_parallel_pairs(
                graph,
                [(right_roles[0], right_roles[1])],
                [right_roles[2]],
                right_roles[3],
            )
            union = adapter_union([first, second])
            built += 1
            if not check_adapter(graph, union):
                return (
                    "failed",
                    f"union fails at roles {left_roles} {right_roles}",
                    None,
                )
            if union.level != max(first.level, second.level) or len(union.colours) != 2:
                return "failed", "union level or colour identity fails", None
    # absorb one more colour into every single-colour gadget
    for base_roles in itertools.permutations(range(4)):
        for extra in itertools.permutations((4, 5, 6)):
            for w in range(4):
                x, y, z = extra
                edges = [
                    (base_roles[0], base_roles[1], 0),
                    (base_roles[2], base_roles[3], 0),
                    (x, y, 1),
                    (z, w, 1),
                ]
                graph = EdgeColouredGraph(7, edges)
                base = adapter_from_parallel_pairs(
                    graph, [(base_roles[0], base_roles[1])], [base_roles[2]], base_roles[3]
                )
                grown = adapter_absorb(graph, base, x, y, z, w)
                built += 1
                if not check_adapter(graph, grown):
                    return (
                        "failed",
                        f"absorb fails at roles {base_roles} {extra} w={w}",
                        None,
                    )
                good = (
                    len(grown.vertices) == len(base.vertices) + 3
                    and len(grown.colours) == len(base.colours) + 1
                    and grown.level == base.level + 1
                )
                if not good:
                    return "failed", "absorb delta identity fails", None
    return "verified", "", {"constructions": built}


# ---------------------------------------------------------------------------
# sweep construction (shared by the CLI `check` command and the test suite)


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def sweep_specs(theorem: str, trials: int, base_seed: int) -> list[tuple[str, GenSpec]]:
    """Deterministic trial list for a theorem sweep."""
    out = []
    for i in range(trials):
        seed = base_seed + i
        shape = SplitMix64(seed ^ 0x5DEECE66D)
        if theorem == "T1":
            k = (2, 3, 4)[i % 3]
            n = -(-(7 * k + 4) // 2) + shape.below(13)
            spec = GenSpec("min_colour_degree", n=n, k=k, seed=seed)
        elif theorem == "T2":
            k = (2, 3)[i % 2]
            eps = Fraction(1, 2)
            n = _ceil_fraction((3 + eps) * k + 1 / (eps * eps)) + shape.below(10)
            spec = GenSpec(
                "bipartite",
                n=n,
                k=k,
                seed=seed,
                epsilon="1/2",
                edge_probability="3/4",
                colours=2 * k,
            )
        elif theorem == "T3":
            t = (11, 12, 13)[i % 3]
            n = 5 + shape.below(36)
            spec = GenSpec("mono_budget", n=n, t=t, seed=seed, colours=3)
        elif theorem == "L_general":
            k = 2 + shape.below(2)
            n = 3 * (k - 1) + 1 + shape.below(6)
            spec = GenSpec(
                "uniform", n=n, k=k, seed=seed, edge_probability="2/3", colours=4
            )
        elif theorem == "P_bipartite":
            k = 2
            n = 2 * k + shape.below(6)
            spec = GenSpec(
                "bipartite", n=n, k=k, seed=seed, edge_probability="2/3", colours=3
            )
        else:
            raise ValueError(f"unknown theorem id {theorem!r}")
        out.append((theorem, spec))
    return out
