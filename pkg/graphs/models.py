"""
Domain models for chainmail graphs.

Nothing here is an ORM model: graphs are immutable values. Every operation
in the graphs/surgery/lspace/diagrams apps takes one of these and returns a
new one.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import gcd
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import networkx as nx

from core.exceptions import InvalidInputError
from core.utils import natural_key, natural_sorted


@dataclass(frozen=True, order=True)
class Dart:
    """One end of an edge: end 0 sits at ends[0], end 1 at ends[1]."""

    edge: str
    end: int

    def __post_init__(self):
        if self.end not in (0, 1):
            raise InvalidInputError(f"dart end must be 0 or 1, got {self.end}", detail={'edge': self.edge})

    @property
    def twin(self) -> 'Dart':
        return Dart(self.edge, 1 - self.end)

    def __str__(self):
        return f"{self.edge}.{self.end}"

    @classmethod
    def parse(cls, text: str) -> 'Dart':
        edge, sep, end = str(text).rpartition('.')
        if not sep or not edge or end not in ('0', '1'):
            raise InvalidInputError(f"malformed dart '{text}' (expected 'edgeId.0' or 'edgeId.1')", detail={'dart': text})
        return cls(edge, int(end))


@dataclass(frozen=True)
class Edge:
    id: str
    ends: Tuple[str, str]
    weight: int

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]

    def other(self, vertex: str) -> str:
        return self.ends[1] if self.ends[0] == vertex else self.ends[0]

    def joins(self, u: str, v: str) -> bool:
        return {self.ends[0], self.ends[1]} == {u, v}

    def dart_at(self, vertex: str) -> Dart:
        return Dart(self.id, 0 if self.ends[0] == vertex else 1)


def _freeze(mapping):
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True, eq=False)
class ChainmailGraph:
    """
    Weighted planar multigraph with a rotation system.

    vertices: vertex id -> weight nu(v)
    edges: edge id -> Edge (endpoints and weight epsilon(e))
    rotations: vertex id -> counterclockwise cyclic sequence of darts

    Construction only checks that ids are consistent; sphere-embedding
    validity is reported by graphs.embedding.validate.
    """

    vertices: Mapping[str, int]
    edges: Mapping[str, Edge]
    rotations: Mapping[str, Tuple[Dart, ...]]

    def __post_init__(self):
        object.__setattr__(self, 'vertices', _freeze(self.vertices))
        object.__setattr__(self, 'edges', _freeze(self.edges))
        rotations = {v: tuple(self.rotations.get(v, ())) for v in self.vertices}
        for vertex in self.rotations:
            if vertex not in self.vertices:
                raise InvalidInputError(f"rotation given for unknown vertex '{vertex}'", detail={'vertex': vertex})
        object.__setattr__(self, 'rotations', _freeze(rotations))
        for edge_id, edge in self.edges.items():
            if edge_id != edge.id:
                raise InvalidInputError(f"edge key '{edge_id}' does not match edge id '{edge.id}'", detail={'edge': edge_id})
            for end in edge.ends:
                if end not in self.vertices:
                    raise InvalidInputError(
                        f"edge '{edge_id}' references unknown vertex '{end}'",
                        detail={'edge': edge_id, 'vertex': end},
                    )

    # -- equality ------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ChainmailGraph):
            return NotImplemented
        return (
            dict(self.vertices) == dict(other.vertices)
            and dict(self.edges) == dict(other.edges)
            and dict(self.rotations) == dict(other.rotations)
        )

    __hash__ = None

    def __repr__(self):
        return f"ChainmailGraph(V={len(self.vertices)}, E={len(self.edges)})"

    # -- construction --------------------------------------------------------

    @classmethod
    def build(cls, vertices: Mapping[str, int], edges: Iterable[Tuple[str, str, str, int]],
              rotations: Optional[Mapping[str, Iterable[Dart]]] = None) -> 'ChainmailGraph':
        """
        Build a graph from (id, u, v, weight) tuples.

        Without rotations a sphere embedding is computed
        (InvalidInputError on non-planar input).
        """
        edge_map = {}
        for edge_id, u, v, weight in edges:
            if edge_id in edge_map:
                raise InvalidInputError(f"duplicate edge id '{edge_id}'", detail={'edge': edge_id})
            edge_map[edge_id] = Edge(edge_id, (u, v), int(weight))
        if rotations is None:
            from graphs.embedding import planar_rotations
            rotations = planar_rotations(vertices, edge_map)
        return cls(dict(vertices), edge_map, {v: tuple(r) for v, r in rotations.items()})

    def evolve(self, vertices=None, edges=None, rotations=None) -> 'ChainmailGraph':
        return ChainmailGraph(
            dict(self.vertices) if vertices is None else vertices,
            dict(self.edges) if edges is None else edges,
            dict(self.rotations) if rotations is None else rotations,
        )

    # -- queries -------------------------------------------------------------

    @property
    def vertex_ids(self) -> List[str]:
        return natural_sorted(self.vertices)

    @property
    def edge_ids(self) -> List[str]:
        return natural_sorted(self.edges)

    def dart_vertex(self, dart: Dart) -> str:
        return self.edges[dart.edge].ends[dart.end]

    def degree(self, vertex: str) -> int:
        return len(self.rotations[vertex])

    def incident_edges(self, vertex: str) -> List[str]:
        return natural_sorted({d.edge for d in self.rotations[vertex]})

    def loops(self) -> List[str]:
        return [e for e in self.edge_ids if self.edges[e].is_loop]

    def edges_between(self, u: str, v: str) -> List[str]:
        return [e for e in self.edge_ids if not self.edges[e].is_loop and self.edges[e].joins(u, v)]

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertex_ids)
        for edge_id in self.edge_ids:
            edge = self.edges[edge_id]
            graph.add_edge(edge.ends[0], edge.ends[1], key=edge_id, weight=edge.weight)
        return graph

    def simple_graph(self) -> nx.Graph:
        """Underlying simple graph: loops dropped, parallel edges collapsed."""
        graph = nx.Graph()
        graph.add_nodes_from(self.vertex_ids)
        for edge in self.edges.values():
            if not edge.is_loop:
                graph.add_edge(*edge.ends)
        return graph

    def components(self) -> List[List[str]]:
        parts = [natural_sorted(c) for c in nx.connected_components(self.simple_graph())]
        return sorted(parts, key=lambda c: natural_key(c[0]))

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def total_weight(self) -> int:
        return sum(abs(e.weight) for e in self.edges.values())


class SurgeryCoefficient:
    """
    Rational surgery slope p/q in lowest terms with q >= 0; infinity is 1/0.
    """

    __slots__ = ('p', 'q')

    def __init__(self, p: int, q: int = 1):
        p, q = int(p), int(q)
        if p == 0 and q == 0:
            raise InvalidInputError("0/0 is not a surgery coefficient")
        if q < 0:
            p, q = -p, -q
        if q == 0:
            p = 1
        g = gcd(p, q)
        self.p, self.q = p // g, q // g

    INF_TOKENS = ('inf', 'infinity', '∞', '1/0')

    @classmethod
    def parse(cls, text: str) -> 'SurgeryCoefficient':
        raw = str(text).strip()
        if raw.lower() in cls.INF_TOKENS:
            return cls.infinity()
        try:
            value = Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise InvalidInputError(f"invalid surgery coefficient '{text}'", detail={'coefficient': text})
        return cls(value.numerator, value.denominator)

    @classmethod
    def infinity(cls) -> 'SurgeryCoefficient':
        return cls(1, 0)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @property
    def is_integer(self) -> bool:
        return self.q == 1

    def is_crossing_coefficient(self) -> bool:
        """-c with c >= 1, -1/n with n >= 1, or infinity."""
        if self.is_infinite:
            return True
        if self.is_integer:
            return self.p <= -1
        return self.p == -1 and self.q >= 1

    def __eq__(self, other):
        if not isinstance(other, SurgeryCoefficient):
            return NotImplemented
        return (self.p, self.q) == (other.p, other.q)

    def __hash__(self):
        return hash((self.p, self.q))

    def __str__(self):
        if self.is_infinite:
            return 'inf'
        if self.is_integer:
            return str(self.p)
        return f"{self.p}/{self.q}"

    def __repr__(self):
        return f"SurgeryCoefficient({self})"


@dataclass(frozen=True, eq=False)
class AugmentedGraph:
    """
    A simplicial chainmail graph with crossing loops on a subset A of its
    edges. Augmented edges carry weight -1; the remaining edges are negative
    (a Rolfsen twist on one loop leaves a -n edge behind while the others
    are still augmented).
    """

    base: ChainmailGraph
    coefficients: Mapping[str, SurgeryCoefficient]

    def __post_init__(self):
        object.__setattr__(self, 'coefficients', _freeze(self.coefficients))
        problems = augmented_violations(self.base, self.coefficients)
        if problems:
            raise InvalidInputError(f"invalid augmented graph: {problems[0]}", detail={'violations': problems})

    def __eq__(self, other):
        if not isinstance(other, AugmentedGraph):
            return NotImplemented
        return self.base == other.base and dict(self.coefficients) == dict(other.coefficients)

    __hash__ = None

    @property
    def augmented_edges(self) -> List[str]:
        return natural_sorted(self.coefficients)

    def with_coefficients(self, coefficients: Mapping[str, SurgeryCoefficient]) -> 'AugmentedGraph':
        return replace(self, coefficients=dict(coefficients))

    def restored(self) -> ChainmailGraph:
        """The base graph, every crossing loop blown down at -1."""
        return self.base


def augmented_violations(base: ChainmailGraph, coefficients: Mapping[str, SurgeryCoefficient]) -> List[str]:
    problems = []
    seen_pairs = set()
    for edge_id in base.edge_ids:
        edge = base.edges[edge_id]
        if edge.is_loop:
            problems.append(f"base graph has loop '{edge_id}'")
            continue
        pair = frozenset(edge.ends)
        if pair in seen_pairs:
            problems.append(f"base graph has a multiedge at '{edge_id}'")
        seen_pairs.add(pair)
        if edge.weight >= 0:
            problems.append(f"edge '{edge_id}' has non-negative weight {edge.weight}")
    for edge_id in natural_sorted(coefficients):
        coefficient = coefficients[edge_id]
        if edge_id not in base.edges:
            problems.append(f"augmented edge '{edge_id}' is not a base edge")
            continue
        if base.edges[edge_id].weight != -1:
            problems.append(f"augmented edge '{edge_id}' must have weight -1")
        if not coefficient.is_crossing_coefficient():
            problems.append(f"coefficient {coefficient} on '{edge_id}' is not -c, -1/n or inf")
    return problems


class MinorKind(str, Enum):
    DELETE = 'delete'
    CONTRACT = 'contract'


@dataclass(frozen=True)
class EdgeOrientation:
    """direction: edge id -> source vertex (loops excluded)."""

    direction: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'direction', _freeze(self.direction))

    def head(self, graph: ChainmailGraph, edge_id: str) -> str:
        return graph.edges[edge_id].other(self.direction[edge_id])

    def out_degrees(self, graph: ChainmailGraph) -> Dict[str, int]:
        counts = {v: 0 for v in graph.vertices}
        for source in self.direction.values():
            counts[source] += 1
        return counts

    def in_degrees(self, graph: ChainmailGraph) -> Dict[str, int]:
        counts = {v: 0 for v in graph.vertices}
        for edge_id in self.direction:
            counts[self.head(graph, edge_id)] += 1
        return counts

    def sinks(self, graph: ChainmailGraph) -> List[str]:
        out = self.out_degrees(graph)
        return [v for v in graph.vertex_ids if out[v] == 0]

    def sources(self, graph: ChainmailGraph) -> List[str]:
        into = self.in_degrees(graph)
        return [v for v in graph.vertex_ids if into[v] == 0]

    def as_dict(self, graph: ChainmailGraph) -> Dict[str, List[str]]:
        return {e: [self.direction[e], self.head(graph, e)] for e in natural_sorted(self.direction)}


# -- moves -------------------------------------------------------------------

@dataclass(frozen=True)
class EraseZeroEdge:
    edge: str


@dataclass(frozen=True)
class MergeParallel:
    edge: str
    other: str


@dataclass(frozen=True)
class EraseLoop:
    edge: str


@dataclass(frozen=True)
class RemoveUnitLeaf:
    vertex: str
    edge: str


MoveKind = Union[EraseZeroEdge, MergeParallel, EraseLoop, RemoveUnitLeaf]
