"""Constructive search for rainbow matchings under colour-degree hypotheses.

Two extension routines take a rainbow matching of size k-1 and produce a
rainbow matching of size k-1 plus a vertex-disjoint edge (whose colour may
repeat): `bipartite_extend` needs only 2k vertices on bipartite inputs, and
`general_extend` needs 3(k-1)+1 vertices on arbitrary graphs, walking a chain
of uncovered vertices and re-orienting the matching as it goes.

`find_rainbow_matching` turns them into a complete search.  It maintains a
partition of the vertices into adapter parts (parked colour sets that can be
re-emitted around any vertex, see adapters.py) and a residual set carrying a
rainbow matching on the unparked colours.  Each loop iteration either outputs
a size-k rainbow matching or strictly increases the sorted string of part
sizes lexicographically: extension either finishes or mints a new part;
cross edges between parts and uncovered residual vertices grow a part by one
colour; when the residual set is tight and parts are small, the uncovered
vertex's edges are folded into one large part.  When the leading part is
large enough the driver instead recurses on the graph minus that part.
The parameter strings live in a finite poset, so the loop terminates; a
budget of k^2 + 3k iterations is enforced as a bug detector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .adapters import (
    Adapter,
    adapter_absorb,
    adapter_from_parallel_pairs,
    adapter_union,
    check_adapter,
)
from .errors import InternalInvariantError, PreconditionError
from .graphs import Edge, EdgeColouredGraph, Matching, is_rainbow_matching

TraceSink = Optional[Callable[[dict], None]]

FAMILIES = ("general", "bipartite")


@dataclass(frozen=True)
class ExtensionResult:
    """A rainbow matching plus one vertex-disjoint edge.

    The edge's colour may coincide with a colour of the matching; callers that
    need a rainbow matching one larger must check.
    """

    matching: Matching
    edge: Edge


def exact_fraction(value, name: str) -> Fraction:
    """Exact rational from int/str/Fraction input; floats are refused because
    the size thresholds are evaluated exactly."""
    if isinstance(value, float):
        raise TypeError(f"{name} must be an exact rational, not a float")
    return Fraction(value)


def _check_input_matching(graph: EdgeColouredGraph, matching: Matching, size: int) -> None:
    if not is_rainbow_matching(graph, matching):
        raise PreconditionError("input matching is not rainbow in the graph")
    if len(matching) != size:
        raise PreconditionError(
            f"input matching has size {len(matching)}, expected {size}"
        )


def _degree_dead_end(graph: EdgeColouredGraph, z: int, k: int) -> Exception:
    # colour degrees are checked lazily, at the point the search actually
    # needs them: a dead end at a deficient vertex is the input's fault, a
    # dead end at a healthy one is a bug
    d = graph.colour_degree(z)
    if d < k:
        return PreconditionError(
            f"vertex {z} outside the matching has colour degree {d} < {k}"
        )
    return InternalInvariantError(
        f"search dead-ended at vertex {z} despite colour degree {d} >= {k}"
    )


def bipartite_extend(graph: EdgeColouredGraph, matching: Matching, k: int) -> ExtensionResult:
    """Extension on bipartite graphs with at least 2k vertices.

    Any uncovered vertex with colour degree k has at least k neighbours, all
    on the other side, where only k-1 vertices are covered, so the lowest
    uncovered vertex always yields a disjoint edge.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if graph.bipartition() is None:
        raise PreconditionError("graph is not bipartite")
    if graph.order < 2 * k:
        raise PreconditionError(f"need at least 2k = {2 * k} vertices, have {graph.order}")
    _check_input_matching(graph, matching, k - 1)

    z = min(graph.vertices - matching.vertices)
    for u, c in graph.incident(z):
        if u not in matching.vertices:
            a, b = (z, u) if z < u else (u, z)
            return ExtensionResult(matching, (a, b, c))
    raise _degree_dead_end(graph, z, k)


def general_extend(graph: EdgeColouredGraph, matching: Matching, k: int) -> ExtensionResult:
    """Extension on arbitrary graphs with at least 3(k-1)+1 vertices.

    If two uncovered vertices are adjacent the input matching already works.
    Otherwise walk the matched edges from the last slot down: each step picks
    an uncovered vertex, finds an edge from it to a lower slot avoiding the
    lower slots' colours, re-orients that slot around the edge, and checks
    whether some uncovered vertex now touches the slot's far end; the first
    time that happens, the matching is re-assembled to free that end and the
    touching edge is returned.  The colour-degree hypothesis makes completing
    the walk impossible, so completion raises an internal error.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if graph.order < 3 * (k - 1) + 1:
        raise PreconditionError(
            f"need at least 3(k-1)+1 = {3 * (k - 1) + 1} vertices, have {graph.order}"
        )
    _check_input_matching(graph, matching, k - 1)

    free = sorted(graph.vertices - matching.vertices)
    free_set = frozenset(free)
    for z in free:
        for u, c in graph.incident(z):
            if z < u and u in free_set:
                return ExtensionResult(matching, (z, u, c))

    # slots[i] = [x, y, colour]; the walk assigns partner[i] (an uncovered
    # vertex seen from y) and partner_colour[i] from the bottom slot up
    slots = [list(e) for e in matching.edges]
    partner: list[Optional[int]] = [None] * len(slots)
    partner_colour: list[Optional[int]] = [None] * len(slots)
    assigned: set[int] = set()

    def tail(start: int, avoid: int) -> list[Edge]:
        # rainbow matching on the triples of slots start.. that dodges `avoid`
        out: list[Edge] = []
        for j in range(start, k - 1):
            if slots[j][2] != avoid:
                out.append((slots[j][0], slots[j][1], slots[j][2]))
            else:
                out.append((slots[j][1], partner[j], partner_colour[j]))
                avoid = partner_colour[j]
        return out

    for si in range(k - 2, -1, -1):
        candidates = [v for v in free if v not in assigned]
        if not candidates:
            raise InternalInvariantError("ran out of uncovered vertices mid-walk")
        z = candidates[0]
        forbidden = {slots[j][2] for j in range(si + 1)}
        where: dict[int, tuple[int, int]] = {}
        for j in range(si + 1):
            where[slots[j][0]] = (j, 0)
            where[slots[j][1]] = (j, 1)
        picked: Optional[int] = None
        for u, c in graph.incident(z):
            if u in where and c not in forbidden:
                picked = u
                break
        if picked is None:
            raise _degree_dead_end(graph, z, k)
        j, side = where[picked]
        if side == 0:
            slots[j][0], slots[j][1] = slots[j][1], slots[j][0]
        slots[si], slots[j] = slots[j], slots[si]
        partner[si] = z
        partner_colour[si] = graph.edge_colour(slots[si][1], z)
        assigned.add(z)

        far_end = slots[si][0]
        for w in free:
            if w in assigned:
                continue
            c_touch = graph.edge_colour(w, far_end)
            if c_touch is None:
                continue
            rebuilt = [(slots[j2][0], slots[j2][1], slots[j2][2]) for j2 in range(si)]
            rebuilt += tail(si + 1, partner_colour[si])
            rebuilt.append((slots[si][1], partner[si], partner_colour[si]))
            result = Matching(rebuilt)
            if len(result.colour_set) != k - 1:
                raise InternalInvariantError("re-assembled matching is not rainbow")
            return ExtensionResult(result, (min(w, far_end), max(w, far_end), c_touch))

    # a completed walk leaves an uncovered vertex whose whole neighbourhood
    # sits on k-1 matched endpoints
    leftover = min(v for v in free if v not in assigned)
    raise _degree_dead_end(graph, leftover, k)


def extend_dispatch(
    graph: EdgeColouredGraph, matching: Matching, k: int, family: str
) -> ExtensionResult:
    if family == "general":
        return general_extend(graph, matching, k)
    if family == "bipartite":
        return bipartite_extend(graph, matching, k)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def size_bound(k: int, gamma: Fraction) -> Fraction:
    """Vertex count above which the partition driver is guaranteed to finish."""
    return (2 + gamma / 2) * k + 2 * (4 - gamma) / (gamma - 2) ** 2 - 3 + gamma


class _HypothesisViolation(Exception):
    """Internal: a vertex outside `matching` has colour degree below the
    current target, which only recursive invocations may observe.  The parent
    driver catches this and converts it into a switch move or a completion."""

    def __init__(self, vertex: int, matching: Matching):
        self.vertex = vertex
        self.matching = matching
        super().__init__(f"colour degree deficit at vertex {vertex}")


class PartitionState:
    """The driver's working partition: adapter parts plus the residual.

    Invariants (validate() enforces them after every move):
      * part vertex sets are pairwise disjoint subsets of the graph,
        |W_i| = 3|C_i| + 1, and each part passes the adapter check;
      * part colour sets are pairwise disjoint and disjoint from the
        residual matching's colours;
      * the residual matching is rainbow, lives inside the residual vertex
        set, and has size k - 1 - sum(|C_i|);
      * at least one residual vertex stays uncovered.
    """

    def __init__(self, graph: EdgeColouredGraph, k: int, parts: list[Adapter], matching: Matching):
        self.graph = graph
        self.k = k
        self.parts = sorted(parts, key=lambda a: -len(a.colours))
        self.matching = matching

    def resort(self) -> None:
        self.parts.sort(key=lambda a: -len(a.colours))

    @property
    def params(self) -> tuple[int, ...]:
        return tuple(len(a.colours) for a in self.parts)

    @property
    def colour_pool(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for a in self.parts:
            out |= a.colours
        return out

    @property
    def part_vertices(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for a in self.parts:
            out |= a.vertices
        return out

    @property
    def residual(self) -> frozenset[int]:
        return self.graph.vertices - self.part_vertices

    @property
    def free(self) -> list[int]:
        return sorted(self.residual - self.matching.vertices)

    def part_index_of(self, v: int) -> int:
        for i, a in enumerate(self.parts):
            if v in a.vertices:
                return i
        raise KeyError(f"vertex {v} is in no part")

    def witness_bundle(self, avoid: Optional[int] = None) -> Matching:
        """One witness per part (avoiding `avoid` where it lives), joined."""
        pieces = []
        for a in self.parts:
            if avoid is not None and avoid in a.vertices:
                pieces.append(a.witness_avoiding(avoid))
            else:
                pieces.append(a.witness(0))
        if not pieces:
            return Matching()
        return pieces[0].join(*pieces[1:])

    def validate(self) -> None:
        g, k = self.graph, self.k
        seen: set[int] = set()
        cols: set[int] = set()
        for a in self.parts:
            if a.vertices & seen:
                raise InternalInvariantError("part vertex sets overlap")
            if a.colours & cols:
                raise InternalInvariantError("part colour sets overlap")
            seen |= a.vertices
            cols |= a.colours
            if len(a.vertices) != 3 * len(a.colours) + 1:
                raise InternalInvariantError("part size is not 3*colours + 1")
            if a.level != len(a.colours) + 1:
                raise InternalInvariantError("part level is not colours + 1")
            if not check_adapter(g, a):
                raise InternalInvariantError("part fails the adapter check")
        if not seen <= g.vertices:
            raise InternalInvariantError("part vertices outside the graph")
        m = self.matching
        try:
            ok = is_rainbow_matching(g, m)
        except ValueError as exc:
            raise InternalInvariantError(f"residual matching broken: {exc}") from exc
        if not ok:
            raise InternalInvariantError("residual matching is not rainbow")
        if m.colour_set & cols:
            raise InternalInvariantError("residual matching reuses a parked colour")
        if len(m) != k - 1 - sum(len(a.colours) for a in self.parts):
            raise InternalInvariantError("residual matching has the wrong size")
        if not m.vertices <= self.residual:
            raise InternalInvariantError("residual matching touches a part")
        if not self.residual - m.vertices:
            raise InternalInvariantError("no uncovered residual vertex")


def _cross_edge(graph: EdgeColouredGraph, state: PartitionState):
    """Lowest (z, w) edge from an uncovered residual vertex into a part with
    an unparked colour; None at the fixpoint."""
    pool = state.colour_pool
    pv = state.part_vertices
    for z in state.free:
        for u, c in graph.incident(z):
            if u in pv and c not in pool:
                return z, u, c
    return None


def _absorb_cross(graph, state: PartitionState, z: int, w: int, colour: int) -> None:
    """Grow w's part by the residual matching edge of `colour` plus z."""
    xy = state.matching.edge_with_colour(colour)
    x, y, _ = xy
    idx = state.part_index_of(w)
    state.parts[idx] = adapter_absorb(graph, state.parts[idx], x, y, z, w)
    state.matching = state.matching.minus(xy)
    state.resort()


def _new_single_part(graph, state: PartitionState, found: ExtensionResult) -> None:
    """Turn an extension edge whose colour repeats into a one-colour part."""
    a, b, c = found.edge
    xy = found.matching.edge_with_colour(c)
    x, y, _ = xy
    part = adapter_from_parallel_pairs(graph, [(x, y)], [b], a)
    state.parts.append(part)
    state.matching = found.matching.minus(xy)
    state.resort()


def _handle_recursion_violation(
    graph, state: PartitionState, lead: Adapter, violation: _HypothesisViolation, k: int
) -> Optional[Matching]:
    """Convert a nested driver's degree deficit into progress at this level.

    Returns a finished size-k matching, or None after growing the removed
    part and replacing the partition with just that part.  Re-raises upward
    when the deficit persists in this level's graph.
    """
    z, inner = violation.vertex, violation.matching
    if graph.colour_degree(z) < k:
        raise _HypothesisViolation(z, inner.join(lead.witness(0)))
    pick = None
    for u, c in graph.incident(z):
        if u in lead.vertices and c not in lead.colours:
            pick = (u, c)
            break
    if pick is None:
        raise InternalInvariantError(
            "degree deficit without a compensating edge into the removed part"
        )
    w, colour = pick
    if colour not in inner.colour_set:
        return inner.plus((z, w, colour) if z < w else (w, z, colour)).join(
            lead.witness_avoiding(w)
        )
    xy = inner.edge_with_colour(colour)
    x, y, _ = xy
    grown = adapter_absorb(graph, lead, x, y, z, w)
    state.parts = [grown]
    state.matching = inner.minus(xy)
    return None


def _fold_residual(graph, state: PartitionState, k: int, l0: int, l1: int):
    """Tight-residual step: park an uncovered vertex's colours in one part.

    Returns a finished Matching, or the action label after mutating state.
    """
    free = state.free
    z = free[0]
    if graph.colour_degree(z) < k:
        raise _HypothesisViolation(z, state.matching.join(state.witness_bundle()))
    covered = state.matching.vertices
    reps: dict[int, int] = {}
    for u, c in graph.incident(z):
        if u not in covered and c not in reps:
            reps[c] = u
    pool = state.colour_pool
    pv = state.part_vertices

    for colour in sorted(reps):
        if colour in pool:
            continue
        u = reps[colour]
        edge = (z, u, colour) if z < u else (u, z, colour)
        if colour not in state.matching.colour_set:
            if u in pv:
                return state.matching.plus(edge).join(state.witness_bundle(avoid=u))
            return state.matching.plus(edge).join(state.witness_bundle())
        if u in pv:
            if len(free) < 2:
                # unreachable under the size bound for k <= 11 (see notes);
                # growing the part here would empty the uncovered residual
                raise InternalInvariantError("no spare residual vertex for a switch move")
            _absorb_cross(graph, state, z, u, colour)
            return "switch"
        if len(free) < 3:
            raise InternalInvariantError("no spare residual vertices for a residual pair move")
        xy = state.matching.edge_with_colour(colour)
        x, y, _ = xy
        part = adapter_from_parallel_pairs(graph, [(x, y)], [u], z)
        state.parts.append(part)
        state.matching = state.matching.minus(xy)
        state.resort()
        return "switch"

    # every representative colour is parked: pick the joint witness missing
    # the most endpoints and rebuild the partition as one large part around z
    union = state.parts[0] if len(state.parts) == 1 else adapter_union(state.parts)
    if union.level != l1 + 1:
        raise InternalInvariantError("joint adapter level mismatch")
    rep_items = sorted(reps.items())
    best_usable: Optional[list[tuple[int, int]]] = None
    best_index = 0
    for i in range(union.level):
        taken = union.witnesses[i].vertices
        usable = [(c, u) for c, u in rep_items if u not in taken]
        if best_usable is None or len(usable) > len(best_usable):
            best_usable, best_index = usable, i
    q = -((2 * l0 - k) // (l1 + 1))  # ceil((k - 2*l0) / (l1 + 1))
    if q <= l1:
        raise InternalInvariantError(
            "fold cannot beat the leading part; the size bound should forbid this"
        )
    if best_usable is None or len(best_usable) < q:
        raise InternalInvariantError("averaging lost too many endpoints")
    witness = union.witnesses[best_index]
    take = best_usable[:q]
    pairs = []
    relays = []
    for colour, u in take:
        a, b, _ = witness.edge_with_colour(colour)
        pairs.append((a, b))
        relays.append(u)
    part = adapter_from_parallel_pairs(graph, pairs, relays, z)
    spent = {colour for colour, _ in take}
    leftovers = Matching(e for e in witness.edges if e[2] not in spent)
    state.parts = [part]
    state.matching = state.matching.join(leftovers)
    return "absorb"


def _drive(
    graph: EdgeColouredGraph,
    k: int,
    gamma: Fraction,
    family: str,
    start: Matching,
    trace: TraceSink,
    ids,
) -> Matching:
    """One level of the search: from a rainbow (k-1)-matching to size k."""
    driver_id = next(ids)
    state = PartitionState(graph, k, [], start)
    budget = k * k + 3 * k
    iteration = 0

    def emit(action: str) -> None:
        if trace is not None:
            trace(
                {
                    "driver": driver_id,
                    "k": k,
                    "iteration": iteration,
                    "action": action,
                    "params": list(state.params),
                    "residual": len(state.residual),
                }
            )

    def progressed(before: tuple[int, ...]) -> None:
        if not state.params > before:
            raise InternalInvariantError(
                f"parameter string did not increase: {before} -> {state.params}"
            )

    while True:
        iteration += 1
        if iteration > budget:
            raise InternalInvariantError(f"driver exceeded its {budget}-iteration budget")
        state.validate()
        before = state.params
        l0 = k - 1 - sum(before)
        residual = state.residual

        if len(residual) > gamma * (l0 + 1):
            move = _cross_edge(graph, state)
            if move is not None:
                z, w, colour = move
                if colour not in state.matching.colour_set:
                    edge = (z, w, colour) if z < w else (w, z, colour)
                    result = state.matching.plus(edge).join(state.witness_bundle(avoid=w))
                    emit("done")
                    return result
                _absorb_cross(graph, state, z, w, colour)
                emit("switch")
                progressed(before)
                continue

            pool = state.colour_pool
            sub = graph.induced(residual).delete_colours(pool)
            for z in state.free:
                if sub.colour_degree(z) < l0 + 1:
                    if graph.colour_degree(z) < k:
                        raise _HypothesisViolation(
                            z, state.matching.join(state.witness_bundle())
                        )
                    raise InternalInvariantError("cross-edge scan missed a violation")
            found = extend_dispatch(sub, state.matching, l0 + 1, family)
            if found.edge[2] not in found.matching.colour_set:
                result = found.matching.plus(found.edge).join(state.witness_bundle())
                emit("done")
                return result
            _new_single_part(graph, state, found)
            emit("extend")
            progressed(before)
            continue

        if not state.parts:
            raise InternalInvariantError("tight residual with no parts")
        l1 = before[0]

        if (gamma - 2) * l1 >= 2:
            lead = state.parts[0]
            rest = state.parts[1:]
            shrunk = graph.without_vertices(lead.vertices).delete_colours(lead.colours)
            if Fraction(shrunk.order) < size_bound(k - l1, gamma):
                raise InternalInvariantError("reduced graph lost the size bound")
            passdown = (
                state.matching.join(*(a.witness(0) for a in rest))
                if rest
                else state.matching
            )
            try:
                inner = _drive(shrunk, k - l1, gamma, family, passdown, trace, ids)
            except _HypothesisViolation as violation:
                finished = _handle_recursion_violation(graph, state, lead, violation, k)
                if finished is not None:
                    emit("done")
                    return finished
                emit("switch")
                progressed(before)
                continue
            result = inner.join(lead.witness(0))
            emit("recurse")
            return result

        outcome = _fold_residual(graph, state, k, l0, l1)
        if isinstance(outcome, Matching):
            emit("done")
            return outcome
        emit(outcome)
        progressed(before)


def find_rainbow_matching(
    graph: EdgeColouredGraph,
    k: int,
    gamma,
    family: str,
    trace: TraceSink = None,
) -> Matching:
    """Rainbow matching of size k under the partition driver's hypotheses.

    gamma is an exact rational in (2, 3] (exactly 3 for the general family);
    the graph needs (2 + gamma/2)k + 2(4-gamma)/(gamma-2)^2 - 3 + gamma
    vertices and minimum colour degree at least k.  All threshold comparisons
    are exact; floats are rejected.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    g = exact_fraction(gamma, "gamma")
    if family == "general":
        if g != 3:
            raise PreconditionError("the general family requires gamma = 3 exactly")
    else:
        if not (2 < g <= 3):
            raise PreconditionError(f"gamma must lie in (2, 3]; got {g}")
        if graph.bipartition() is None:
            raise PreconditionError("graph is not bipartite")
    bound = size_bound(k, g)
    if Fraction(graph.order) < bound:
        raise PreconditionError(
            f"need (2+gamma/2)k + 2(4-gamma)/(gamma-2)^2 - 3 + gamma = {bound} "
            f"vertices; got {graph.order}"
        )
    mind = graph.min_colour_degree()
    if mind < k:
        raise PreconditionError(f"minimum colour degree {mind} < k = {k}")

    ids = itertools.count()
    found = Matching()
    for kk in range(1, k + 1):
        try:
            found = _drive(graph, kk, g, family, found, trace, ids)
        except _HypothesisViolation as violation:  # pragma: no cover - bug trap
            raise InternalInvariantError(
                f"hypothesis violation escaped to the top level at vertex "
                f"{violation.vertex} despite the global colour-degree check"
            ) from violation
    if not is_rainbow_matching(graph, found) or len(found) != k:
        raise InternalInvariantError("driver returned a non-rainbow or wrong-size matching")
    return found


def rainbow_matching(graph: EdgeColouredGraph, k: int, trace: TraceSink = None) -> Matching:
    """Rainbow matching of size k in any graph with 2n >= 7k + 4 and minimum
    colour degree at least k."""
    if k < 1:
        raise ValueError("k must be positive")
    if 2 * graph.order < 7 * k + 4:
        raise PreconditionError(
            f"need n >= 7k/2 + 2, i.e. 2n >= 7k + 4: {2 * graph.order} < {7 * k + 4}"
        )
    mind = graph.min_colour_degree()
    if mind < k:
        raise PreconditionError(f"minimum colour degree {mind} < k = {k}")
    return find_rainbow_matching(graph, k, Fraction(3), "general", trace)


def rainbow_matching_bipartite(
    graph: EdgeColouredGraph,
    k: int,
    eps=Fraction(1, 2),
    trace: TraceSink = None,
) -> Matching:
    """Rainbow matching of size k in a bipartite graph with
    n >= (3 + eps)k + eps^-2 and minimum colour degree at least k."""
    if k < 1:
        raise ValueError("k must be positive")
    e = exact_fraction(eps, "eps")
    if not (0 < e <= Fraction(1, 2)):
        raise PreconditionError(f"eps must lie in (0, 1/2]; got {e}")
    if graph.bipartition() is None:
        raise PreconditionError("graph is not bipartite")
    need = (3 + e) * k + 1 / (e * e)
    if Fraction(graph.order) < need:
        raise PreconditionError(
            f"need n >= (3+eps)k + eps^-2 = {need}; got {graph.order}"
        )
    mind = graph.min_colour_degree()
    if mind < k:
        raise PreconditionError(f"minimum colour degree {mind} < k = {k}")
    return find_rainbow_matching(graph, k, 2 + 2 * e, "bipartite", trace)
