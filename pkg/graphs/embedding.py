"""
Rotation systems: face tracing, sphere-embedding validation and computing
an embedding for graphs given without one.

Faces are the orbits of dart -> succ(twin(dart)), where succ is the next
dart counterclockwise at the twin's vertex.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

import networkx as nx

from core.exceptions import InvalidInputError
from core.utils import natural_key, natural_sorted

from .models import ChainmailGraph, Dart, Edge

logger = logging.getLogger(__name__)


@dataclass
class ComponentReport:
    vertices: List[str]
    V: int
    E: int
    F: int

    @property
    def euler(self) -> int:
        return self.V - self.E + self.F

    def as_dict(self):
        return {'vertices': self.vertices, 'V': self.V, 'E': self.E, 'F': self.F, 'euler': self.euler}


@dataclass
class ValidationReport:
    components: List[ComponentReport] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.errors and all(c.euler == 2 for c in self.components)

    def __bool__(self):
        return self.valid

    def as_dict(self):
        return {
            'valid': self.valid,
            'components': [c.as_dict() for c in self.components],
            'errors': list(self.errors),
        }


class RotationIndex:
    """Position lookup for succ/pred on a structurally sound rotation system."""

    def __init__(self, graph: ChainmailGraph):
        self.graph = graph
        self.position: Dict[Dart, Tuple[str, int]] = {}
        for vertex, rotation in graph.rotations.items():
            for index, dart in enumerate(rotation):
                self.position[dart] = (vertex, index)

    def succ(self, dart: Dart) -> Dart:
        vertex, index = self.position[dart]
        rotation = self.graph.rotations[vertex]
        return rotation[(index + 1) % len(rotation)]

    def pred(self, dart: Dart) -> Dart:
        vertex, index = self.position[dart]
        rotation = self.graph.rotations[vertex]
        return rotation[(index - 1) % len(rotation)]

    def face_step(self, dart: Dart) -> Dart:
        return self.succ(dart.twin)


def rotation_errors(graph: ChainmailGraph) -> List[str]:
    """Structural problems: missing, duplicated or misplaced darts."""
    errors = []
    counts = Counter()
    for vertex in graph.vertex_ids:
        for dart in graph.rotations[vertex]:
            counts[dart] += 1
            if dart.edge not in graph.edges:
                errors.append(f"vertex '{vertex}': rotation names unknown edge '{dart.edge}'")
            elif graph.dart_vertex(dart) != vertex:
                errors.append(f"vertex '{vertex}': dart {dart} belongs at vertex '{graph.dart_vertex(dart)}'")
    for dart, count in sorted(counts.items(), key=lambda item: (natural_key(item[0].edge), item[0].end)):
        if count > 1 and dart.edge in graph.edges:
            errors.append(f"vertex '{graph.dart_vertex(dart)}': dart {dart} appears {count} times")
    for edge_id in graph.edge_ids:
        for end in (0, 1):
            dart = Dart(edge_id, end)
            if counts[dart] == 0:
                errors.append(f"vertex '{graph.edges[edge_id].ends[end]}': dart {dart} missing from rotation")
    return errors


def trace_faces(graph: ChainmailGraph) -> List[List[Dart]]:
    """
    Face boundaries as dart cycles, in order of their lowest dart.

    Isolated vertices have no darts; their single face is not listed here.
    """
    index = RotationIndex(graph)
    seen = set()
    faces = []
    all_darts = sorted(index.position, key=lambda d: (natural_key(d.edge), d.end))
    for start in all_darts:
        if start in seen:
            continue
        face = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            face.append(dart)
            dart = index.face_step(dart)
        faces.append(face)
    return faces


def validate(graph: ChainmailGraph) -> ValidationReport:
    """
    Per-component V, E, F and Euler characteristic of the rotation system.
    """
    errors = rotation_errors(graph)
    if errors:
        return ValidationReport(components=[], errors=errors)

    faces = trace_faces(graph)
    component_of = {}
    reports = []
    for number, members in enumerate(graph.components()):
        for vertex in members:
            component_of[vertex] = number
        reports.append(ComponentReport(vertices=members, V=len(members), E=0, F=0))
    for edge in graph.edges.values():
        reports[component_of[edge.ends[0]]].E += 1
    for face in faces:
        reports[component_of[graph.dart_vertex(face[0])]].F += 1
    for report in reports:
        if report.E == 0:
            report.F = 1
    return ValidationReport(components=reports, errors=[])


def is_sphere_embedding(graph: ChainmailGraph) -> bool:
    return validate(graph).valid


def planar_rotations(vertices: Mapping[str, int], edges: Mapping[str, Edge]) -> Dict[str, List[Dart]]:
    """
    Counterclockwise rotations of a genus-0 embedding.

    networkx embeds the underlying simple graph; parallel edges are placed
    side by side (reversed at the far end) and loops as adjacent dart pairs.
    """
    simple = nx.Graph()
    simple.add_nodes_from(natural_sorted(vertices))
    bundles: Dict[frozenset, List[str]] = {}
    loops: Dict[str, List[str]] = {}
    for edge_id in natural_sorted(edges):
        edge = edges[edge_id]
        if edge.is_loop:
            loops.setdefault(edge.ends[0], []).append(edge_id)
            continue
        simple.add_edge(*edge.ends)
        bundles.setdefault(frozenset(edge.ends), []).append(edge_id)

    is_planar, embedding = nx.check_planarity(simple)
    if not is_planar:
        raise InvalidInputError("graph is not planar: no sphere embedding exists")
    logger.info(f"🧭 Computed planar embedding for {len(vertices)} vertices / {len(edges)} edges")

    rotations: Dict[str, List[Dart]] = {}
    for vertex in natural_sorted(vertices):
        rotation: List[Dart] = []
        if vertex in embedding and embedding.degree(vertex) > 0:
            clockwise = list(embedding.neighbors_cw_order(vertex))
            for neighbor in reversed(clockwise):
                bundle = bundles[frozenset((vertex, neighbor))]
                if natural_key(vertex) > natural_key(neighbor):
                    bundle = list(reversed(bundle))
                rotation.extend(edges[e].dart_at(vertex) for e in bundle)
        for loop_id in loops.get(vertex, []):
            rotation.extend([Dart(loop_id, 0), Dart(loop_id, 1)])
        rotations[vertex] = rotation
    return rotations


def embedded(graph: ChainmailGraph) -> ChainmailGraph:
    """Same graph with a freshly computed embedding."""
    return graph.evolve(rotations=planar_rotations(graph.vertices, graph.edges))
