"""Edge-coloured graphs: representation, colour-degree statistics, matchings,
and the line-oriented ``.ecg`` text format.

Vertices are dense 0-based integers.  Induced subgraphs keep the original
vertex ids (they carry a vertex mask rather than relabelling), so matchings
and gadgets built on a subgraph remain valid references into the host graph.
Graphs are immutable after construction and all queries are pure.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

from .errors import EcgFormatError

# An edge is a (u, v, colour) triple, normalised to u < v.
Edge = tuple[int, int, int]


def normalise_edge(u: int, v: int, c: int) -> Edge:
    if u > v:
        u, v = v, u
    return (u, v, c)


class Matching:
    """An immutable set of pairwise vertex-disjoint coloured edges.

    Edges are stored as (u, v, colour) with u < v, in sorted order, so equal
    matchings compare and serialize identically.  Vertex-disjointness is
    enforced at construction; rainbowness is a property, not an invariant.
    """

    __slots__ = ("edges", "vertices")

    def __init__(self, edges: Iterable[tuple[int, int, int]] = ()):
        triples = sorted(normalise_edge(*e) for e in edges)
        seen: set[int] = set()
        for u, v, _ in triples:
            if u == v:
                raise ValueError(f"loop at vertex {u} cannot be in a matching")
            if u in seen or v in seen:
                clash = u if u in seen else v
                raise ValueError(f"edges are not vertex-disjoint at vertex {clash}")
            seen.add(u)
            seen.add(v)
        self.edges: tuple[Edge, ...] = tuple(triples)
        self.vertices: frozenset[int] = frozenset(seen)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matching) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def __repr__(self) -> str:
        return f"Matching({list(self.edges)!r})"

    @property
    def colours(self) -> tuple[int, ...]:
        return tuple(c for _, _, c in self.edges)

    @property
    def colour_set(self) -> frozenset[int]:
        return frozenset(self.colours)

    @property
    def is_rainbow(self) -> bool:
        return len(self.colour_set) == len(self.edges)

    def covers(self, v: int) -> bool:
        return v in self.vertices

    def edge_with_colour(self, colour: int) -> Edge:
        for e in self.edges:
            if e[2] == colour:
                return e
        raise KeyError(f"no edge of colour {colour} in matching")

    def plus(self, *extra: tuple[int, int, int]) -> "Matching":
        return Matching(self.edges + tuple(extra))

    def minus(self, edge: tuple[int, int, int]) -> "Matching":
        target = normalise_edge(*edge)
        if target not in self.edges:
            raise KeyError(f"edge {target} not in matching")
        return Matching(e for e in self.edges if e != target)

    def join(self, *others: "Matching") -> "Matching":
        """Union with other matchings; raises if vertex sets overlap."""
        parts = [self.edges]
        parts.extend(m.edges for m in others)
        return Matching(e for chunk in parts for e in chunk)


class EdgeColouredGraph:
    """A simple undirected graph with a non-negative integer colour per edge.

    ``n`` bounds the vertex ids; ``vertices`` is the active vertex set (all of
    range(n) for graphs built from scratch, a subset for induced subgraphs).
    Loops and repeated endpoint pairs are rejected at construction.
    """

    __slots__ = ("n", "vertices", "edges", "_adj")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, int]] = (),
        vertices: Optional[Iterable[int]] = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        vset = frozenset(range(n)) if vertices is None else frozenset(vertices)
        for v in vset:
            if not 0 <= v < n:
                raise ValueError(f"vertex {v} out of range 0..{n - 1}")
        self.vertices: frozenset[int] = vset

        by_pair: dict[tuple[int, int], int] = {}
        for u, v, c in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u} is not allowed")
            if u not in vset or v not in vset:
                w = u if u not in vset else v
                raise ValueError(f"edge endpoint {w} is not a vertex of the graph")
            if c < 0:
                raise ValueError(f"colour {c} is negative")
            key = (u, v) if u < v else (v, u)
            if key in by_pair:
                raise ValueError(f"duplicate edge {key}")
            by_pair[key] = c
        self.edges: frozenset[Edge] = frozenset(
            (u, v, c) for (u, v), c in by_pair.items()
        )

        adj: dict[int, dict[int, int]] = {v: {} for v in sorted(vset)}
        for (u, v), c in sorted(by_pair.items()):
            adj[u][v] = c
            adj[v][u] = c
        # re-sort each neighbourhood so iteration order is by vertex id
        self._adj = {v: dict(sorted(nb.items())) for v, nb in adj.items()}

    # -- basic queries ---------------------------------------------------

    @property
    def order(self) -> int:
        """Number of (active) vertices."""
        return len(self.vertices)

    @property
    def size(self) -> int:
        """Number of edges."""
        return len(self.edges)

    def _require_vertex(self, v: int) -> None:
        if v not in self.vertices:
            raise ValueError(f"vertex {v} out of range")

    def neighbours(self, v: int) -> tuple[int, ...]:
        self._require_vertex(v)
        return tuple(self._adj[v].keys())

    def incident(self, v: int) -> tuple[tuple[int, int], ...]:
        """(neighbour, colour) pairs at v, ascending by neighbour."""
        self._require_vertex(v)
        return tuple(self._adj[v].items())

    def has_edge(self, u: int, v: int) -> bool:
        return u in self.vertices and v in self._adj[u]

    def edge_colour(self, u: int, v: int) -> Optional[int]:
        if u not in self.vertices:
            return None
        return self._adj[u].get(v)

    def degree(self, v: int) -> int:
        self._require_vertex(v)
        return len(self._adj[v])

    def colours(self) -> frozenset[int]:
        return frozenset(c for _, _, c in self.edges)

    # -- colour statistics -----------------------------------------------

    def colour_degree(self, v: int) -> int:
        """Number of distinct colours on the edges at v."""
        self._require_vertex(v)
        return len(set(self._adj[v].values()))

    def min_colour_degree(self) -> int:
        if not self.vertices:
            raise ValueError("minimum colour degree of an empty vertex set")
        return min(self.colour_degree(v) for v in self.vertices)

    def mono_max_degree(self) -> int:
        """Largest number of same-coloured edges meeting at one vertex."""
        best = 0
        for v in self.vertices:
            counts: dict[int, int] = {}
            for c in self._adj[v].values():
                counts[c] = counts.get(c, 0) + 1
            if counts:
                best = max(best, max(counts.values()))
        return best

    # -- derived graphs ----------------------------------------------------

    def delete_colours(self, colours: Iterable[int]) -> "EdgeColouredGraph":
        """Same vertices, minus every edge whose colour is in `colours`."""
        drop = frozenset(colours)
        return EdgeColouredGraph(
            self.n,
            (e for e in self.edges if e[2] not in drop),
            vertices=self.vertices,
        )

    def induced(self, subset: Iterable[int]) -> "EdgeColouredGraph":
        """Induced subgraph; vertex ids are kept, not relabelled."""
        sub = frozenset(subset)
        if not sub <= self.vertices:
            bad = sorted(sub - self.vertices)[0]
            raise ValueError(f"vertex {bad} is not in the graph")
        return EdgeColouredGraph(
            self.n,
            (e for e in self.edges if e[0] in sub and e[1] in sub),
            vertices=sub,
        )

    def without_vertices(self, drop: Iterable[int]) -> "EdgeColouredGraph":
        return self.induced(self.vertices - frozenset(drop))

    def complete_with_fresh_colours(self) -> tuple["EdgeColouredGraph", frozenset[int]]:
        """Complete the graph, giving every missing pair its own new colour.

        Fresh colour ids start strictly above every existing colour and are
        assigned in ascending pair order.  Returns the completed graph and the
        set of fresh colours.
        """
        next_colour = max((c for _, _, c in self.edges), default=-1) + 1
        present = {(u, v) for u, v, _ in self.edges}
        verts = sorted(self.vertices)
        new_edges = list(self.edges)
        fresh = []
        for i, u in enumerate(verts):
            for v in verts[i + 1 :]:
                if (u, v) not in present:
                    new_edges.append((u, v, next_colour))
                    fresh.append(next_colour)
                    next_colour += 1
        return (
            EdgeColouredGraph(self.n, new_edges, vertices=self.vertices),
            frozenset(fresh),
        )

    def bipartition(self) -> Optional[tuple[frozenset[int], frozenset[int]]]:
        """Two-colour the vertices with every edge crossing, if possible.

        Deterministic: BFS from the lowest-index vertex of each component,
        which is assigned to side A.  Returns None when no bipartition exists.
        """
        side: dict[int, int] = {}
        for start in sorted(self.vertices):
            if start in side:
                continue
            side[start] = 0
            queue = [start]
            while queue:
                v = queue.pop(0)
                for u in self._adj[v]:
                    if u not in side:
                        side[u] = 1 - side[v]
                        queue.append(u)
                    elif side[u] == side[v]:
                        return None
        a = frozenset(v for v, s in side.items() if s == 0)
        b = frozenset(v for v, s in side.items() if s == 1)
        return a, b


def is_rainbow_matching(graph: EdgeColouredGraph, matching) -> bool:
    """True iff `matching` is a matching in `graph` with pairwise distinct
    colours.  Raises ValueError if an edge is absent (or differently coloured)
    in the graph."""
    edges = list(matching.edges) if isinstance(matching, Matching) else [
        normalise_edge(*e) for e in matching
    ]
    for u, v, c in edges:
        if graph.edge_colour(u, v) != c:
            raise ValueError(f"edge ({u}, {v}, {c}) is not present in the graph")
    seen: set[int] = set()
    for u, v, _ in edges:
        if u in seen or v in seen or u == v:
            return False
        seen.add(u)
        seen.add(v)
    colours = [c for _, _, c in edges]
    return len(set(colours)) == len(colours)


# -- .ecg text format ------------------------------------------------------
#
#   ecg 1
#   n <vertex-count>
#   e <u> <v> <colour>      (one line per edge, 0-indexed decimal integers)
#
# '#' starts a comment; blank lines are ignored.


def parse_ecg(text: str) -> EdgeColouredGraph:
    lines = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append(stripped)
    if not lines or lines[0].split() != ["ecg", "1"]:
        raise EcgFormatError("missing 'ecg 1' magic line")
    if len(lines) < 2 or not lines[1].startswith("n "):
        raise EcgFormatError("missing 'n <vertex-count>' line")
    try:
        n = int(lines[1].split()[1])
    except (IndexError, ValueError) as exc:
        raise EcgFormatError(f"bad vertex-count line: {lines[1]!r}") from exc
    edges = []
    for line in lines[2:]:
        fields = line.split()
        if fields[0] != "e" or len(fields) != 4:
            raise EcgFormatError(f"bad edge line: {line!r}")
        try:
            u, v, c = int(fields[1]), int(fields[2]), int(fields[3])
        except ValueError as exc:
            raise EcgFormatError(f"non-integer field in edge line: {line!r}") from exc
        edges.append((u, v, c))
    try:
        return EdgeColouredGraph(n, edges)
    except ValueError as exc:
        raise EcgFormatError(str(exc)) from exc


def format_ecg(graph: EdgeColouredGraph) -> str:
    if graph.vertices != frozenset(range(graph.n)):
        raise ValueError(".ecg cannot express induced subgraphs; use full graphs")
    out = ["ecg 1", f"n {graph.n}"]
    for u, v, c in sorted(graph.edges):
        out.append(f"e {u} {v} {c}")
    return "\n".join(out) + "\n"


def read_ecg(path) -> EdgeColouredGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_ecg(fh.read())


def write_ecg(path, graph: EdgeColouredGraph) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_ecg(graph))
