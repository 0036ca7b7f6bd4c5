"""Exact reference algorithms.

max_rainbow_matching_exact is a branch-and-bound over edges and serves as the
ground truth the constructive routines are tested against.  Hopcroft-Karp
maximum bipartite matching is both an oracle in its own right and the engine
the decomposer uses for its per-colour-class assignment rounds; when the left
side cannot be saturated, hall_violator extracts a deficiency certificate.
"""

from __future__ import annotations

from collections import deque
from typing import Mapping, Optional, Sequence

from .graphs import EdgeColouredGraph, Matching

_INF = float("inf")


def max_rainbow_matching_exact(graph: EdgeColouredGraph) -> tuple[int, Matching]:
    """Maximum-cardinality rainbow matching by exhaustive branch and bound.

    Edges are branched on in descending endpoint-degree-sum order (ties by
    edge) which tightens pruning; the bound at each node is the minimum of
    remaining edges, free vertex pairs, and distinct colours left in the
    suffix.  The reported witness is the first optimum in this fixed search
    order, so repeated runs agree.  Exponential in the worst case; meant for
    desk-scale instances (roughly <= 24 edges or <= 14 vertices).
    """
    order = sorted(
        graph.edges,
        key=lambda e: (-(graph.degree(e[0]) + graph.degree(e[1])), e),
    )
    m = len(order)
    # distinct colours in order[i:], an upper bound on edges still addable
    suffix_colours = [0] * (m + 1)
    seen: set[int] = set()
    for i in range(m - 1, -1, -1):
        seen.add(order[i][2])
        suffix_colours[i] = len(seen)

    best_size = 0
    best_edges: tuple = ()
    used_vertices: set[int] = set()
    used_colours: set[int] = set()
    chosen: list = []
    free_count = graph.order

    def search(i: int) -> None:
        nonlocal best_size, best_edges, free_count
        bound = len(chosen) + min(m - i, free_count // 2, suffix_colours[i])
        if bound <= best_size and best_size > 0:
            return
        if len(chosen) > best_size:
            best_size = len(chosen)
            best_edges = tuple(chosen)
        if i == m:
            return
        u, v, c = order[i]
        if u not in used_vertices and v not in used_vertices and c not in used_colours:
            used_vertices.add(u)
            used_vertices.add(v)
            used_colours.add(c)
            chosen.append((u, v, c))
            free_count -= 2
            search(i + 1)
            free_count += 2
            chosen.pop()
            used_colours.discard(c)
            used_vertices.discard(v)
            used_vertices.discard(u)
        search(i + 1)

    search(0)
    return best_size, Matching(best_edges)


class BipartiteAssignment:
    """Left items, right slots, and which slots each item may occupy.

    `adjacency` maps item index -> iterable of compatible slot indices; it is
    normalised to ascending tuples, which (with ascending item processing)
    pins the solver's output.  After solving, `assignment` maps item index ->
    slot index and is injective.
    """

    __slots__ = ("items", "slots", "adjacency", "assignment", "solved")

    def __init__(
        self,
        items: Sequence,
        slots: Sequence,
        adjacency: Mapping[int, Sequence[int]],
    ):
        self.items = list(items)
        self.slots = list(slots)
        nslots = len(self.slots)
        adj: list[tuple[int, ...]] = []
        for i in range(len(self.items)):
            row = tuple(sorted(set(adjacency.get(i, ()))))
            if row and not (0 <= row[0] and row[-1] < nslots):
                raise ValueError(f"adjacency of item {i} references unknown slots")
            adj.append(row)
        self.adjacency = adj
        self.assignment: dict[int, int] = {}
        self.solved = False

    @property
    def saturated(self) -> bool:
        return len(self.assignment) == len(self.items)


def max_bipartite_matching(assignment: BipartiteAssignment) -> BipartiteAssignment:
    """Hopcroft-Karp: repeated layered BFS + batched augmenting DFS.

    Completes `assignment.assignment` with a maximum matching and returns the
    same object.  The left side is saturated iff a left-saturating matching
    exists.
    """
    adj = assignment.adjacency
    n_items = len(assignment.items)
    match_item: list[Optional[int]] = [None] * n_items
    match_slot: dict[int, int] = {}
    dist: list[float] = [0.0] * n_items

    def bfs() -> bool:
        queue: deque[int] = deque()
        for i in range(n_items):
            if match_item[i] is None:
                dist[i] = 0
                queue.append(i)
            else:
                dist[i] = _INF
        reachable_free = False
        while queue:
            i = queue.popleft()
            for s in adj[i]:
                j = match_slot.get(s)
                if j is None:
                    reachable_free = True
                elif dist[j] == _INF:
                    dist[j] = dist[i] + 1
                    queue.append(j)
        return reachable_free

    def dfs(i: int) -> bool:
        for s in adj[i]:
            j = match_slot.get(s)
            if j is None or (dist[j] == dist[i] + 1 and dfs(j)):
                match_item[i] = s
                match_slot[s] = i
                return True
        dist[i] = _INF
        return False

    while bfs():
        for i in range(n_items):
            if match_item[i] is None:
                dfs(i)

    assignment.assignment = {
        i: s for i, s in enumerate(match_item) if s is not None
    }
    assignment.solved = True
    return assignment


def hall_violator(assignment: BipartiteAssignment) -> list[int]:
    """Deficiency certificate: item indices S with |N(S)| < |S|.

    Requires a solved, unsaturated assignment.  S is the set of left items
    reachable by alternating paths from the lowest unassigned item; every slot
    in N(S) is matched into S, so |N(S)| = |S| - 1.
    """
    if not assignment.solved:
        raise ValueError("solve the assignment first")
    if assignment.saturated:
        raise ValueError("left side is saturated; no violator exists")
    slot_owner: dict[int, int] = {s: i for i, s in assignment.assignment.items()}
    start = min(
        i for i in range(len(assignment.items)) if i not in assignment.assignment
    )
    items = {start}
    slots: set[int] = set()
    frontier = [start]
    while frontier:
        nxt = []
        for i in frontier:
            for s in assignment.adjacency[i]:
                if s in slots:
                    continue
                slots.add(s)
                owner = slot_owner.get(s)
                if owner is not None and owner not in items:
                    items.add(owner)
                    nxt.append(owner)
        frontier = nxt
    assert len(slots) < len(items)
    return sorted(items)
