"""
Minors (G - e, G / e), the four manifold-preserving moves, simplification
to a fixpoint, and normalization into parallel -1 edges.
"""
import logging
from typing import Dict, List, Optional, Set

from core.exceptions import InvalidInputError, PreconditionError
from core.utils import natural_min

from .models import (
    ChainmailGraph, Dart, Edge, EraseLoop, EraseZeroEdge, MergeParallel, MinorKind, MoveKind,
    RemoveUnitLeaf,
)

logger = logging.getLogger(__name__)


def _require_edge(graph: ChainmailGraph, edge_id: str) -> Edge:
    try:
        return graph.edges[edge_id]
    except KeyError:
        raise InvalidInputError(f"unknown edge id '{edge_id}'", detail={'edge': edge_id})


def _require_vertex(graph: ChainmailGraph, vertex: str) -> int:
    try:
        return graph.vertices[vertex]
    except KeyError:
        raise InvalidInputError(f"unknown vertex id '{vertex}'", detail={'vertex': vertex})


def delete_edges(graph: ChainmailGraph, edge_ids) -> ChainmailGraph:
    doomed = set(edge_ids)
    edges = {e: edge for e, edge in graph.edges.items() if e not in doomed}
    rotations = {
        v: tuple(d for d in rotation if d.edge not in doomed)
        for v, rotation in graph.rotations.items()
    }
    return graph.evolve(edges=edges, rotations=rotations)


def delete_vertex(graph: ChainmailGraph, vertex: str) -> ChainmailGraph:
    """Remove a vertex with every edge touching it."""
    pruned = delete_edges(graph, [e for e, edge in graph.edges.items() if vertex in edge.ends])
    vertices = {v: w for v, w in pruned.vertices.items() if v != vertex}
    rotations = {v: r for v, r in pruned.rotations.items() if v != vertex}
    return pruned.evolve(vertices=vertices, rotations=rotations)


def drop_loops(graph: ChainmailGraph) -> ChainmailGraph:
    loops = graph.loops()
    return delete_edges(graph, loops) if loops else graph


def contract_edge(graph: ChainmailGraph, edge_id: str) -> ChainmailGraph:
    """
    Merge the endpoints of a non-loop edge.

    The merged vertex keeps the lower id and the summed weight. Its rotation
    is the kept vertex's rotation with the dart of e replaced by the other
    vertex's rotation read cyclically after its dart of e.
    """
    edge = _require_edge(graph, edge_id)
    if edge.is_loop:
        raise PreconditionError(f"cannot contract loop '{edge_id}'", detail={'edge': edge_id})

    keep = natural_min(edge.ends)
    gone = edge.other(keep)
    keep_dart = edge.dart_at(keep)
    gone_dart = edge.dart_at(gone)

    gone_rotation = list(graph.rotations[gone])
    start = gone_rotation.index(gone_dart)
    spliced_in = gone_rotation[start + 1:] + gone_rotation[:start]

    merged_rotation: List[Dart] = []
    for dart in graph.rotations[keep]:
        if dart == keep_dart:
            merged_rotation.extend(spliced_in)
        else:
            merged_rotation.append(dart)

    edges: Dict[str, Edge] = {}
    for other_id, other in graph.edges.items():
        if other_id == edge_id:
            continue
        ends = tuple(keep if end == gone else end for end in other.ends)
        edges[other_id] = Edge(other_id, ends, other.weight)

    vertices = {v: w for v, w in graph.vertices.items() if v != gone}
    vertices[keep] = graph.vertices[keep] + graph.vertices[gone]
    rotations = {v: r for v, r in graph.rotations.items() if v not in (keep, gone)}
    rotations[keep] = tuple(merged_rotation)
    return ChainmailGraph(vertices, edges, rotations)


def minor(graph: ChainmailGraph, edge_id: str, kind: MinorKind) -> ChainmailGraph:
    """
    G - e or G / e. Parallel partners of a contracted edge stay as loops.
    """
    _require_edge(graph, edge_id)
    kind = MinorKind(kind)
    if kind is MinorKind.DELETE:
        return delete_edges(graph, [edge_id])
    return contract_edge(graph, edge_id)


def move_precondition_errors(graph: ChainmailGraph, move: MoveKind) -> List[str]:
    """Empty when the move applies; otherwise the failing conditions."""
    if isinstance(move, EraseZeroEdge):
        edge = _require_edge(graph, move.edge)
        return [] if edge.weight == 0 else [f"edge '{move.edge}' has weight {edge.weight}, not 0"]

    if isinstance(move, MergeParallel):
        first = _require_edge(graph, move.edge)
        second = _require_edge(graph, move.other)
        if move.edge == move.other:
            return ["MergeParallel needs two distinct edges"]
        if first.is_loop or second.is_loop:
            return [f"edges '{move.edge}' and '{move.other}' must not be loops"]
        if set(first.ends) != set(second.ends):
            return [f"edges '{move.edge}' and '{move.other}' do not share both endpoints"]
        return []

    if isinstance(move, EraseLoop):
        edge = _require_edge(graph, move.edge)
        return [] if edge.is_loop else [f"edge '{move.edge}' is not a loop"]

    if isinstance(move, RemoveUnitLeaf):
        weight = _require_vertex(graph, move.vertex)
        edge = _require_edge(graph, move.edge)
        errors = []
        if weight != 0:
            errors.append(f"vertex '{move.vertex}' has weight {weight}, not 0")
        if graph.degree(move.vertex) != 1:
            errors.append(f"vertex '{move.vertex}' has degree {graph.degree(move.vertex)}, not 1")
        if move.vertex not in edge.ends or edge.is_loop:
            errors.append(f"edge '{move.edge}' is not the leaf edge of '{move.vertex}'")
        if edge.weight not in (1, -1):
            errors.append(f"edge '{move.edge}' has weight {edge.weight}, not +-1")
        return errors

    raise InvalidInputError(f"unknown move {move!r}")


def apply_move(graph: ChainmailGraph, move: MoveKind) -> ChainmailGraph:
    errors = move_precondition_errors(graph, move)
    if errors:
        raise PreconditionError(
            f"{type(move).__name__} does not apply: {'; '.join(errors)}",
            detail={'move': type(move).__name__, 'violations': errors},
        )

    if isinstance(move, (EraseZeroEdge, EraseLoop)):
        return delete_edges(graph, [move.edge])

    if isinstance(move, MergeParallel):
        merged = delete_edges(graph, [move.other])
        edges = dict(merged.edges)
        kept = edges[move.edge]
        edges[move.edge] = Edge(kept.id, kept.ends, kept.weight + graph.edges[move.other].weight)
        return merged.evolve(edges=edges)

    return delete_vertex(graph, move.vertex)


def next_move(graph: ChainmailGraph) -> Optional[MoveKind]:
    """
    The move simplify applies next: zero edges, then parallel pairs, then
    loops, then unit leaves; lowest id first within each kind.
    """
    edge_ids = graph.edge_ids
    for edge_id in edge_ids:
        if graph.edges[edge_id].weight == 0:
            return EraseZeroEdge(edge_id)

    for position, edge_id in enumerate(edge_ids):
        edge = graph.edges[edge_id]
        if edge.is_loop:
            continue
        for other_id in edge_ids[position + 1:]:
            other = graph.edges[other_id]
            if not other.is_loop and set(other.ends) == set(edge.ends):
                return MergeParallel(edge_id, other_id)

    for edge_id in edge_ids:
        if graph.edges[edge_id].is_loop:
            return EraseLoop(edge_id)

    for vertex in graph.vertex_ids:
        if graph.vertices[vertex] != 0 or graph.degree(vertex) != 1:
            continue
        edge_id = graph.rotations[vertex][0].edge
        if graph.edges[edge_id].weight in (1, -1):
            return RemoveUnitLeaf(vertex, edge_id)
    return None


def simplify(graph: ChainmailGraph) -> ChainmailGraph:
    steps = 0
    move = next_move(graph)
    while move is not None:
        logger.debug(f"simplify: {move}")
        graph = apply_move(graph, move)
        steps += 1
        move = next_move(graph)
    logger.debug(f"simplify reached a fixpoint after {steps} moves")
    return graph


def copy_id(edge_id: str, index: int, taken: Set[str]) -> str:
    """`edge_id~index`, primed until it is not in `taken`; the result is added to `taken`."""
    name = f"{edge_id}~{index}"
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def split_parallel(graph: ChainmailGraph) -> ChainmailGraph:
    """
    Replace every edge of weight w (|w| >= 2) by |w| parallel edges of
    weight sign(w), inserted next to the original in both rotations.
    Zero edges are left alone.
    """
    edges: Dict[str, Edge] = {}
    rotations = {v: list(r) for v, r in graph.rotations.items()}
    taken = set(graph.edge_ids)
    for edge_id in graph.edge_ids:
        edge = graph.edges[edge_id]
        count = abs(edge.weight)
        if count <= 1 or edge.is_loop:
            edges[edge_id] = edge
            continue
        sign = 1 if edge.weight > 0 else -1
        copies = [edge_id] + [copy_id(edge_id, i, taken) for i in range(1, count)]
        for name in copies:
            edges[name] = Edge(name, edge.ends, sign)
        # u: [e, e~1, e~2], v: [e~2, e~1, e]
        u, v = edge.ends
        at_u = rotations[u].index(Dart(edge_id, 0))
        rotations[u][at_u + 1:at_u + 1] = [Dart(name, 0) for name in copies[1:]]
        at_v = rotations[v].index(Dart(edge_id, 1))
        rotations[v][at_v:at_v] = [Dart(name, 1) for name in reversed(copies[1:])]
    return ChainmailGraph(dict(graph.vertices), edges, rotations)


def normalize(graph: ChainmailGraph) -> ChainmailGraph:
    """
    Parallel -1 edges only, no loops. Requires every edge weight < 0.
    """
    positive = [e for e in graph.edge_ids if graph.edges[e].weight >= 0]
    if positive:
        raise PreconditionError(
            f"normalize needs negative edge weights; edge '{positive[0]}' has weight {graph.edges[positive[0]].weight}",
            detail={'edge': positive[0]},
        )
    return split_parallel(drop_loops(graph))


def is_normalized(graph: ChainmailGraph) -> bool:
    return all(edge.weight == -1 and not edge.is_loop for edge in graph.edges.values())

