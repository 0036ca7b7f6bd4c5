"""Colour adapters: vertex sets that can re-emit a fixed colour set around
any one of their vertices.

An adapter for colour set C at level L is a vertex set W together with L
rainbow matchings inside G[W], each using exactly the colours C, such that
every vertex of W is avoided by at least one of them.  The matching driver
parks colours in adapters and later pulls out a witness matching that misses
whichever vertex it needs free.  Three constructions are provided: the
parallel-pairs gadget, disjoint union, and absorption of one more colour.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphs import EdgeColouredGraph, Matching, normalise_edge


@dataclass(frozen=True)
class Adapter:
    vertices: frozenset[int]
    colours: frozenset[int]
    level: int
    witnesses: tuple[Matching, ...]

    def witness(self, i: int = 0) -> Matching:
        return self.witnesses[i]

    def witness_avoiding(self, v: int) -> Matching:
        """A witness matching that does not cover v (smallest index wins)."""
        for m in self.witnesses:
            if not m.covers(v):
                return m
        raise KeyError(f"no witness avoids vertex {v}; not a valid adapter")


def verify_adapter(
    graph: EdgeColouredGraph,
    vertices: Iterable[int],
    colours: Iterable[int],
    level: int,
    witnesses: Sequence[Matching],
) -> bool:
    """Check the adapter definition against the graph.

    Total: returns False on any malformed input (wrong witness count, edges
    absent from the graph, vertices outside W, ...) instead of raising.
    """
    wset = frozenset(vertices)
    cset = frozenset(colours)
    if level != len(witnesses) or level < 1:
        return False
    for m in witnesses:
        if not isinstance(m, Matching):
            return False
        if not m.vertices <= wset:
            return False
        for u, v, c in m.edges:
            if graph.edge_colour(u, v) != c:
                return False
        if not m.is_rainbow or m.colour_set != cset:
            return False
    for w in wset:
        if all(m.covers(w) for m in witnesses):
            return False
    return True


def check_adapter(graph: EdgeColouredGraph, adapter: Adapter) -> bool:
    return verify_adapter(
        graph, adapter.vertices, adapter.colours, adapter.level, adapter.witnesses
    )


def adapter_from_parallel_pairs(
    graph: EdgeColouredGraph,
    pairs: Sequence[tuple[int, int]],
    relays: Sequence[int],
    hub: int,
) -> Adapter:
    """Build an adapter from parallel pair/relay edges of matching colours.

    Each pair (x_i, y_i) must be an edge whose colour equals that of the edge
    relay_i--hub; the colours must be pairwise distinct and all 3*len(pairs)+1
    named vertices distinct.  The result has |W| = 3|C| + 1 and level |C| + 1:
    witness i drops pair i and uses the hub--relay_i edge instead; the last
    witness uses all the pairs and leaves the hub free.
    """
    ell = len(pairs)
    if ell == 0:
        raise ValueError("need at least one pair")
    if len(relays) != ell:
        raise ValueError(f"{ell} pairs but {len(relays)} relay vertices")
    named = [v for p in pairs for v in p] + list(relays) + [hub]
    if len(set(named)) != 3 * ell + 1:
        raise ValueError("pairs, relays and hub must name distinct vertices")

    colours = []
    for (x, y), z in zip(pairs, relays):
        c_pair = graph.edge_colour(x, y)
        if c_pair is None:
            raise ValueError(f"missing edge ({x}, {y})")
        c_link = graph.edge_colour(z, hub)
        if c_link is None:
            raise ValueError(f"missing edge ({z}, {hub})")
        if c_pair != c_link:
            raise ValueError(
                f"colour mismatch: edge ({x}, {y}) has {c_pair}, "
                f"edge ({z}, {hub}) has {c_link}"
            )
        colours.append(c_pair)
    if len(set(colours)) != ell:
        raise ValueError("pair colours must be pairwise distinct")

    pair_edges = [normalise_edge(x, y, c) for (x, y), c in zip(pairs, colours)]
    witnesses = []
    for i in range(ell):
        edges = [pair_edges[j] for j in range(ell) if j != i]
        edges.append(normalise_edge(relays[i], hub, colours[i]))
        witnesses.append(Matching(edges))
    witnesses.append(Matching(pair_edges))
    return Adapter(
        vertices=frozenset(named),
        colours=frozenset(colours),
        level=ell + 1,
        witnesses=tuple(witnesses),
    )


def adapter_union(adapters: Sequence[Adapter]) -> Adapter:
    """Combine adapters on disjoint vertex sets with disjoint colour sets.

    The level is the maximum input level; shorter witness lists are padded by
    repeating their last witness (any repetition preserves the definition,
    repeating the last keeps outputs canonical).
    """
    if not adapters:
        raise ValueError("union of zero adapters")
    if len(adapters) == 1:
        return adapters[0]
    verts: set[int] = set()
    cols: set[int] = set()
    for a in adapters:
        if verts & a.vertices:
            raise ValueError("adapter vertex sets overlap")
        if cols & a.colours:
            raise ValueError("adapter colour sets overlap")
        verts |= a.vertices
        cols |= a.colours
    level = max(a.level for a in adapters)
    witnesses = []
    for i in range(level):
        layer = [a.witnesses[min(i, a.level - 1)] for a in adapters]
        witnesses.append(layer[0].join(*layer[1:]))
    return Adapter(
        vertices=frozenset(verts),
        colours=frozenset(cols),
        level=level,
        witnesses=tuple(witnesses),
    )


def adapter_absorb(
    graph: EdgeColouredGraph, adapter: Adapter, x: int, y: int, z: int, w: int
) -> Adapter:
    """Absorb the colour of edge xy into the adapter through vertex w.

    Requires x, y, z outside the adapter, w inside it, edges xy and zw present
    with equal colour not already in the adapter's colour set.  Grows the
    vertex set by {x, y, z}, the colour set by c(xy), and the level by one:
    every old witness gains the edge xy; the new witness replaces xy by wz in
    the lowest-index witness that misses w.
    """
    over = {x, y, z} & adapter.vertices
    if over:
        raise ValueError(f"vertices {sorted(over)} are already in the adapter")
    if w not in adapter.vertices:
        raise ValueError(f"vertex {w} is not in the adapter")
    c_xy = graph.edge_colour(x, y)
    if c_xy is None:
        raise ValueError(f"missing edge ({x}, {y})")
    c_zw = graph.edge_colour(z, w)
    if c_zw is None:
        raise ValueError(f"missing edge ({z}, {w})")
    if c_xy != c_zw:
        raise ValueError(f"colour mismatch: c({x},{y})={c_xy} but c({z},{w})={c_zw}")
    if c_xy in adapter.colours:
        raise ValueError(f"colour {c_xy} is already in the adapter")

    xy = normalise_edge(x, y, c_xy)
    grown = [m.plus(xy) for m in adapter.witnesses]
    spare = adapter.witness_avoiding(w)
    grown.append(spare.plus(normalise_edge(w, z, c_zw)))
    return Adapter(
        vertices=adapter.vertices | {x, y, z},
        colours=adapter.colours | {c_xy},
        level=adapter.level + 1,
        witnesses=tuple(grown),
    )
