"""
Combinatorial predicates: bridges, leaves, degrees, the asymmetry screen,
acyclic orientations and weighted spanning-tree counts.
"""
import itertools
import logging
from dataclasses import dataclass, field
from math import prod
from typing import Dict, List, Optional

import networkx as nx
from django.conf import settings
from networkx.utils import UnionFind

from core.exceptions import CapExceededError, PreconditionError
from core.utils import natural_sorted

from .embedding import is_sphere_embedding
from .models import ChainmailGraph, EdgeOrientation

logger = logging.getLogger(__name__)


@dataclass
class PropertyReport:
    components: List[List[str]]
    bridges: List[str]
    leaves: List[str]
    degrees: Dict[str, int]
    simplicial: bool
    triangle_free: bool
    min_degree_at_least_3: bool
    bridge_free: bool
    valid_embedding: bool
    violations: List[str] = field(default_factory=list)

    @property
    def asymmetry_candidate(self) -> bool:
        return not self.violations

    def as_dict(self):
        return {
            'components': self.components,
            'bridges': self.bridges,
            'leaves': self.leaves,
            'degrees': self.degrees,
            'degree_sequence': sorted(self.degrees.values(), reverse=True),
            'simplicial': self.simplicial,
            'triangle_free': self.triangle_free,
            'min_degree_at_least_3': self.min_degree_at_least_3,
            'bridge_free': self.bridge_free,
            'valid_embedding': self.valid_embedding,
            'asymmetry_candidate': self.asymmetry_candidate,
            'violations': self.violations,
        }


def bridges(graph: ChainmailGraph) -> List[str]:
    """Isthmus edges. A pair joined by two or more edges is never a bridge."""
    simple_bridges = {frozenset(pair) for pair in nx.bridges(graph.simple_graph())}
    result = []
    for edge_id in graph.edge_ids:
        edge = graph.edges[edge_id]
        if edge.is_loop or frozenset(edge.ends) not in simple_bridges:
            continue
        if len(graph.edges_between(*edge.ends)) == 1:
            result.append(edge_id)
    return result


def leaves(graph: ChainmailGraph) -> List[str]:
    return [v for v in graph.vertex_ids if graph.degree(v) == 1]


def is_simplicial(graph: ChainmailGraph) -> bool:
    pairs = set()
    for edge in graph.edges.values():
        if edge.is_loop:
            return False
        pair = frozenset(edge.ends)
        if pair in pairs:
            return False
        pairs.add(pair)
    return True


def graph_properties(graph: ChainmailGraph) -> PropertyReport:
    degrees = {v: graph.degree(v) for v in graph.vertex_ids}
    bridge_ids = bridges(graph)
    simplicial = is_simplicial(graph)
    triangle_count = sum(nx.triangles(graph.simple_graph()).values()) // 3
    report = PropertyReport(
        components=graph.components(),
        bridges=bridge_ids,
        leaves=leaves(graph),
        degrees=degrees,
        simplicial=simplicial,
        triangle_free=triangle_count == 0,
        min_degree_at_least_3=all(d >= 3 for d in degrees.values()),
        bridge_free=not bridge_ids,
        valid_embedding=is_sphere_embedding(graph),
    )
    if not simplicial:
        report.violations.append('not simplicial (loops or multiedges)')
    if triangle_count:
        report.violations.append(f'triangle ({triangle_count} found)')
    degree_two = [v for v, d in degrees.items() if d == 2]
    if degree_two:
        report.violations.append(f"degree-2 vertex '{natural_sorted(degree_two)[0]}'")
    if bridge_ids:
        report.violations.append(f"bridge '{bridge_ids[0]}'")
    if not report.valid_embedding:
        report.violations.append('invalid sphere embedding')
    return report


def enumerate_acyclic_orientations(graph: ChainmailGraph, cap: Optional[int] = None) -> List[EdgeOrientation]:
    """
    Every orientation of the edges without a directed cycle.

    Edges are decided in id order, end 0 -> end 1 before end 1 -> end 0,
    so the output order is deterministic.
    """
    cap = getattr(settings, 'CHAINMAIL_ORIENTATION_CAP', 20) if cap is None else cap
    loops = graph.loops()
    if loops:
        raise PreconditionError(f"graph has loop '{loops[0]}'; orientations need a loop-free graph", detail={'edge': loops[0]})
    if len(graph.edges) > cap:
        raise CapExceededError(
            f"{len(graph.edges)} edges exceed the orientation cap {cap}",
            detail={'edges': len(graph.edges), 'cap': cap},
        )

    edge_ids = graph.edge_ids
    successors: Dict[str, List[str]] = {v: [] for v in graph.vertices}
    chosen: Dict[str, str] = {}
    found: List[EdgeOrientation] = []

    def reaches(start: str, goal: str) -> bool:
        stack, seen = [start], {start}
        while stack:
            vertex = stack.pop()
            if vertex == goal:
                return True
            for nxt in successors[vertex]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    def extend(position: int):
        if position == len(edge_ids):
            found.append(EdgeOrientation(dict(chosen)))
            return
        edge_id = edge_ids[position]
        u, v = graph.edges[edge_id].ends
        for source, target in ((u, v), (v, u)):
            if reaches(target, source):
                continue
            successors[source].append(target)
            chosen[edge_id] = source
            extend(position + 1)
            successors[source].pop()
            del chosen[edge_id]

    extend(0)
    logger.debug(f"{len(found)} acyclic orientations over {len(edge_ids)} edges")
    return found


def count_weighted_spanning_trees(graph: ChainmailGraph, limit: Optional[int] = None) -> int:
    """
    Sum over spanning trees of the product of |weight|, by enumeration.
    """
    limit = getattr(settings, 'CHAINMAIL_SPANNING_TREE_EDGE_LIMIT', 24) if limit is None else limit
    if not graph.vertices:
        raise PreconditionError("spanning trees need at least one vertex")
    if not graph.is_connected():
        raise PreconditionError("spanning trees need a connected graph", detail={'components': len(graph.components())})
    candidates = [graph.edges[e] for e in graph.edge_ids if not graph.edges[e].is_loop]
    if len(candidates) > limit:
        raise CapExceededError(
            f"{len(candidates)} edges exceed the spanning-tree enumeration limit {limit}",
            detail={'edges': len(candidates), 'limit': limit},
        )

    size = len(graph.vertices) - 1
    total = 0
    for subset in itertools.combinations(candidates, size):
        forest = UnionFind(graph.vertices)
        acyclic = True
        for edge in subset:
            u, v = edge.ends
            if forest[u] == forest[v]:
                acyclic = False
                break
            forest.union(u, v)
        if acyclic:
            total += prod(abs(edge.weight) for edge in subset)
    return total

