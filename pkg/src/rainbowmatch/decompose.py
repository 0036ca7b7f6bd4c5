"""Edge-decomposition into floor(t*n/2) rainbow matchings.

Feasible whenever no vertex carries more than t edges of one colour, for
t >= 11.  The construction completes the graph with fresh singleton colours,
processes colour classes largest first, and assigns each class's edges to the
open matchings through a maximum bipartite matching (edge compatible with a
matching iff vertex-disjoint from it); the fresh edges are stripped at the
end.  For t <= 10 the same procedure runs best effort and surfaces a
Hall-style certificate when a class cannot be spread.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import HallViolation, PreconditionError
from .graphs import Edge, EdgeColouredGraph, Matching
from .oracle import BipartiteAssignment, hall_violator, max_bipartite_matching

GUARANTEE_THRESHOLD = 11


@dataclass(frozen=True)
class Decomposition:
    """An ordered list of edge-disjoint rainbow matchings covering E(host).

    Empty parts are kept so that len(parts) == floor(t*n/2) exactly.  `host`
    is the decomposed graph when produced locally; parsed decompositions
    carry None and are verified against an explicitly supplied graph.
    """

    n: int
    t: int
    parts: tuple[tuple[Edge, ...], ...]
    host: Optional[EdgeColouredGraph] = None

    @property
    def nonempty_count(self) -> int:
        return sum(1 for p in self.parts if p)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "parts": [[list(e) for e in part] for part in self.parts],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "Decomposition":
        parts = tuple(
            tuple((int(u), int(v), int(c)) for u, v, c in part)
            for part in data["parts"]
        )
        return Decomposition(n=int(data["n"]), t=int(data["t"]), parts=parts)


def decompose(graph: EdgeColouredGraph, t: int, keep_completion: bool = False) -> Decomposition:
    """Split E(graph) into floor(t*n/2) rainbow matchings (some empty).

    Requires mono_max_degree(graph) <= t.  Guaranteed to succeed for
    t >= 11; for smaller t a HallViolation may be raised carrying the
    failing colour class and a deficiency certificate.  Deterministic:
    classes are processed by descending size then ascending colour, edges
    ascending, and the matcher scans parts in ascending index.

    With keep_completion=True the fresh completion edges stay in the output,
    which then decomposes the completed graph rather than the input.
    """
    if t < 1:
        raise ValueError("t must be positive")
    dmon = graph.mono_max_degree()
    if dmon > t:
        raise PreconditionError(f"monochromatic degree {dmon} exceeds the budget t = {t}")

    completed, fresh = graph.complete_with_fresh_colours()
    n_parts = (t * graph.order) // 2
    parts: list[list[Edge]] = [[] for _ in range(n_parts)]
    # per-vertex bitmask of parts already touching the vertex
    occupancy: dict[int, int] = {v: 0 for v in graph.vertices}
    full_mask = (1 << n_parts) - 1

    by_colour: dict[int, list[Edge]] = {}
    for e in completed.edges:
        by_colour.setdefault(e[2], []).append(e)
    classes = sorted(by_colour.items(), key=lambda item: (-len(item[1]), item[0]))

    for colour, class_edges in classes:
        class_edges.sort()
        if len(class_edges) == 1:
            # singleton class: lowest compatible part, same as the matcher
            u, v, _ = class_edges[0]
            mask = full_mask & ~(occupancy[u] | occupancy[v])
            if mask == 0:
                raise HallViolation(colour, class_edges, class_edges, [])
            j = (mask & -mask).bit_length() - 1
            _commit(parts, occupancy, class_edges[0], j)
            continue
        adjacency = {}
        for i, (u, v, _) in enumerate(class_edges):
            mask = full_mask & ~(occupancy[u] | occupancy[v])
            row = []
            while mask:
                low = mask & -mask
                row.append(low.bit_length() - 1)
                mask ^= low
            adjacency[i] = row
        assignment = BipartiteAssignment(class_edges, list(range(n_parts)), adjacency)
        max_bipartite_matching(assignment)
        if not assignment.saturated:
            bad_items = hall_violator(assignment)
            joint: set[int] = set()
            for i in bad_items:
                joint.update(assignment.adjacency[i])
            raise HallViolation(
                colour,
                class_edges,
                [class_edges[i] for i in bad_items],
                joint,
            )
        for i, j in sorted(assignment.assignment.items()):
            _commit(parts, occupancy, class_edges[i], j)

    if not keep_completion:
        parts = [[e for e in part if e[2] not in fresh] for part in parts]
    return Decomposition(
        n=graph.order,
        t=t,
        parts=tuple(tuple(sorted(part)) for part in parts),
        host=completed if keep_completion else graph,
    )


def _commit(parts, occupancy, edge: Edge, j: int) -> None:
    u, v, _ = edge
    parts[j].append(edge)
    occupancy[u] |= 1 << j
    occupancy[v] |= 1 << j


def verify_decomposition(graph: EdgeColouredGraph, decomposition: Decomposition) -> bool:
    """Re-check every decomposition invariant from scratch against `graph`."""
    if decomposition.n != graph.order:
        return False
    if len(decomposition.parts) != (decomposition.t * graph.order) // 2:
        return False
    total = 0
    union: set[Edge] = set()
    for part in decomposition.parts:
        seen_vertices: set[int] = set()
        seen_colours: set[int] = set()
        for u, v, c in part:
            if u > v:
                u, v = v, u
            if graph.edge_colour(u, v) != c:
                return False
            if u in seen_vertices or v in seen_vertices:
                return False
            if c in seen_colours:
                return False
            seen_vertices.update((u, v))
            seen_colours.add(c)
            union.add((u, v, c))
            total += 1
    return total == len(union) and union == set(graph.edges)


def cover_lower_bound(graph: EdgeColouredGraph) -> int:
    """Floor on the number of nonempty parts any decomposition needs.

    A rainbow matching holds at most one edge per colour, at most one edge at
    each vertex, and at most floor(n/2) edges overall.
    """
    per_colour: dict[int, int] = {}
    for _, _, c in graph.edges:
        per_colour[c] = per_colour.get(c, 0) + 1
    colour_term = max(per_colour.values(), default=0)
    degree_term = max((graph.degree(v) for v in graph.vertices), default=0)
    size_term = 0
    if graph.size:
        capacity = graph.order // 2
        size_term = -(-graph.size // capacity)
    return max(colour_term, degree_term, size_term)


def sharpness_instance(t: int, n: int) -> EdgeColouredGraph:
    """A t-regular single-colour circulant on n vertices.

    Every edge shares colour 1, so any decomposition into rainbow matchings
    needs t*n/2 nonempty parts: the floor(t*n/2) budget is tight.  Each
    vertex is joined to its ceil(t/2) nearest successors; for odd t (then n
    is even) the last of those is the antipodal vertex.
    """
    if t < 1:
        raise ValueError("t must be positive")
    if t >= n:
        raise ValueError(f"t = {t} must be smaller than n = {n}")
    if (t * n) % 2 != 0:
        raise ValueError(f"t*n = {t * n} is odd; no t-regular graph exists")
    edges = []
    for d in range(1, t // 2 + 1):
        for v in range(n):
            edges.append((v, (v + d) % n, 1))
    if t % 2 == 1:
        half = n // 2
        for v in range(half):
            edges.append((v, v + half, 1))
    return EdgeColouredGraph(n, (tuple(sorted(e[:2])) + (1,) for e in edges))
