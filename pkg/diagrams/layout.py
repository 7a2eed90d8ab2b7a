"""
Plane geometry for chainmail and medial diagrams.

Vertices are placed by Tutte's barycentric method with the longest face of
each component pinned to a circle (walked clockwise so the drawing keeps
the counterclockwise rotations). Components sit side by side.
"""
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.utils import natural_key
from graphs.embedding import trace_faces
from graphs.models import ChainmailGraph, Edge

from .models import Annotation, DiagramLayout, Point

COMPONENT_SEPARATION = 2.6
VERTEX_RADIUS = 0.3
CLASP_SPACING = 0.12
FINGER_TIP = 0.08
PORT_STUB = 0.05
PORT_REACH = 0.35


def tutte_positions(graph: ChainmailGraph) -> Dict[str, np.ndarray]:
    faces = trace_faces(graph)
    positions: Dict[str, np.ndarray] = {}
    offset = 0.0
    for members in graph.components():
        if len(members) == 1:
            positions[members[0]] = np.array([offset + 1.0, 0.0])
            offset += COMPONENT_SEPARATION
            continue
        member_set = set(members)
        own = [face for face in faces if graph.dart_vertex(face[0]) in member_set]
        outer = max(own, key=len)
        ring: List[str] = []
        for dart in outer:
            vertex = graph.dart_vertex(dart)
            if vertex not in ring:
                ring.append(vertex)

        fixed = {}
        for k, vertex in enumerate(ring):
            angle = -2 * math.pi * k / len(ring)
            fixed[vertex] = np.array([math.cos(angle), math.sin(angle)])
        free = [v for v in members if v not in fixed]
        solved = {}
        if free:
            index = {v: i for i, v in enumerate(free)}
            system = np.zeros((len(free), len(free)))
            rhs = np.zeros((len(free), 2))
            for vertex in free:
                i = index[vertex]
                for dart in graph.rotations[vertex]:
                    edge = graph.edges[dart.edge]
                    if edge.is_loop:
                        continue
                    neighbor = edge.other(vertex)
                    system[i, i] += 1
                    if neighbor in index:
                        system[i, index[neighbor]] -= 1
                    else:
                        rhs[i] += fixed[neighbor]
            solution = np.linalg.solve(system, rhs)
            solved = {v: solution[index[v]] for v in free}

        shift = np.array([offset + 1.0, 0.0])
        for vertex in members:
            positions[vertex] = (fixed[vertex] if vertex in fixed else solved[vertex]) + shift
        offset += COMPONENT_SEPARATION
    return positions


def _unit(vector: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vector)
    return vector / norm if norm > 0 else np.array([1.0, 0.0])


class EdgeFrame:
    """Origin at the edge midpoint, t from end 0 to end 1, n = t turned left."""

    def __init__(self, start: np.ndarray, end: np.ndarray):
        self.origin = (start + end) / 2
        self.length = float(np.linalg.norm(end - start))
        self.t = _unit(end - start)
        self.n = np.array([-self.t[1], self.t[0]])

    def point(self, x: float, y: float) -> Point:
        p = self.origin + x * self.t + y * self.n
        return float(p[0]), float(p[1])


def _unit_length(graph: ChainmailGraph, positions: Dict[str, np.ndarray]) -> float:
    lengths = [
        float(np.linalg.norm(positions[e.ends[1]] - positions[e.ends[0]]))
        for e in graph.edges.values() if not e.is_loop
    ]
    lengths = [x for x in lengths if x > 1e-9]
    return min(lengths) if lengths else 1.0


def clasp_offsets(graph: ChainmailGraph, copies: Dict[str, int], spacing: float) -> Dict[Tuple[str, int], float]:
    """
    Offset along each edge frame's n of copy m of every edge. Parallel edges
    share one bundle, ordered as they leave the lower endpoint.
    """
    bundles: Dict[Tuple[str, str], List[str]] = {}
    for vertex in graph.vertex_ids:
        for dart in graph.rotations[vertex]:
            edge = graph.edges[dart.edge]
            if edge.is_loop or copies.get(edge.id, 0) == 0:
                continue
            low, high = sorted(edge.ends, key=natural_key)
            if vertex == low:
                bundles.setdefault((low, high), []).append(edge.id)

    offsets = {}
    for (low, _), edge_ids in bundles.items():
        total = sum(copies[e] for e in edge_ids)
        slot = 0
        for edge_id in edge_ids:
            k = copies[edge_id]
            same_frame = graph.edges[edge_id].ends[0] == low
            for m in range(k):
                position = slot + (m if same_frame else k - 1 - m)
                across = (position - (total - 1) / 2) * spacing
                offsets[(edge_id, m)] = across if same_frame else -across
            slot += k
    return offsets


def _circle_points(centre: np.ndarray, radius: float, start: Point, stop: Point) -> List[Point]:
    """Counterclockwise samples strictly between two points near the circle."""
    a0 = math.atan2(start[1] - centre[1], start[0] - centre[0])
    a1 = math.atan2(stop[1] - centre[1], stop[0] - centre[0])
    while a1 <= a0:
        a1 += 2 * math.pi
    steps = max(2, int((a1 - a0) / (math.pi / 18)))
    return [
        (float(centre[0] + radius * math.cos(a)), float(centre[1] + radius * math.sin(a)))
        for a in np.linspace(a0, a1, steps + 1)[1:-1]
    ]


def _split_arcs(points: List[Point], marks: List[int], arcs: Sequence[int]) -> Dict[int, List[Point]]:
    """Arc t runs from passage t-1 to passage t along the closed polyline."""
    result = {}
    size = len(points)
    for t, arc in enumerate(arcs):
        begin, end = marks[t - 1], marks[t]
        if end <= begin:
            end += size
        result[arc] = [points[i % size] for i in range(begin, end + 1)]
    return result


def chainmail_layout(graph: ChainmailGraph, arcs_by_vertex: Dict[str, Tuple[int, ...]],
                     crossing_of: Dict[Tuple[str, int, str], int], over_side: Dict[int, int],
                     coefficients: Optional[Dict[str, str]] = None) -> DiagramLayout:
    """
    graph has no loops; every edge with nonzero weight carries |weight|
    clasps. crossing_of maps (edge, copy, 'P' | 'Q') to a crossing index and
    over_side says which end's circle runs over there.
    """
    positions = tutte_positions(graph)
    unit = _unit_length(graph, positions)
    copies = {e: abs(edge.weight) for e, edge in graph.edges.items()}
    widest = max(
        [sum(copies[x] for x in graph.edges_between(*edge.ends)) for edge in graph.edges.values()],
        default=1,
    )
    radius = VERTEX_RADIUS * unit
    spacing = unit * min(CLASP_SPACING, 1.2 * VERTEX_RADIUS / max(widest, 1))
    narrow, wide, tip = 0.25 * spacing, 0.4 * spacing, FINGER_TIP * unit
    offsets = clasp_offsets(graph, copies, spacing)
    frames = {
        e: EdgeFrame(positions[edge.ends[0]], positions[edge.ends[1]])
        for e, edge in graph.edges.items() if copies[e]
    }

    layout = DiagramLayout(gap=0.9 * narrow)
    count = len(crossing_of)
    layout.crossing_points = [(0.0, 0.0)] * count
    layout.over_directions = [(1.0, 0.0)] * count
    for (edge_id, m, name), index in crossing_of.items():
        frame = frames[edge_id]
        y = offsets[(edge_id, m)] + (narrow if name == 'P' else -narrow)
        layout.crossing_points[index] = frame.point(0.0, y)
        direction = frame.t if over_side[index] == 0 else frame.n
        layout.over_directions[index] = (float(direction[0]), float(direction[1]))

    def base_x(frame: EdgeFrame, y: float) -> float:
        inside = math.sqrt(max(radius * radius - y * y, 0.0))
        return -frame.length / 2 + inside

    for vertex in graph.vertex_ids:
        centre = positions[vertex]
        fingers: List[List[Tuple[Point, bool]]] = []
        for dart in graph.rotations[vertex]:
            edge: Edge = graph.edges[dart.edge]
            if not copies[edge.id]:
                continue
            frame = frames[edge.id]
            finger: List[Tuple[Point, bool]] = []
            if dart.end == 0:
                for m in range(copies[edge.id]):
                    o = offsets[(edge.id, m)]
                    low, high = o - narrow, o + narrow
                    finger += [
                        (frame.point(base_x(frame, low), low), False),
                        (frame.point(0.0, low), True),
                        (frame.point(tip, low), False),
                        (frame.point(tip, high), False),
                        (frame.point(0.0, high), True),
                        (frame.point(base_x(frame, high), high), False),
                    ]
            else:
                for m in reversed(range(copies[edge.id])):
                    o = offsets[(edge.id, m)]
                    low, high = o - wide, o + wide
                    finger += [
                        (frame.point(-base_x(frame, high), high), False),
                        (frame.point(0.0, high), False),
                        (frame.point(0.0, o + narrow), True),
                        (frame.point(0.0, o - narrow), True),
                        (frame.point(0.0, low), False),
                        (frame.point(-base_x(frame, low), low), False),
                    ]
            fingers.append(finger)

        if not fingers:
            layout.unknots[vertex] = (float(centre[0]), float(centre[1]), radius)
            continue
        points: List[Point] = []
        marks: List[int] = []
        for position, finger in enumerate(fingers):
            for point, is_passage in finger:
                if is_passage:
                    marks.append(len(points))
                points.append(point)
            following = fingers[(position + 1) % len(fingers)]
            points.extend(_circle_points(centre, radius, finger[-1][0], following[0][0]))
        layout.arc_points.update(_split_arcs(points, marks, arcs_by_vertex[vertex]))

    for edge_id, label in (coefficients or {}).items():
        if edge_id not in frames:
            continue
        frame = frames[edge_id]
        ys = [offsets[(edge_id, m)] for m in range(copies[edge_id])]
        reach = (max(ys) - min(ys)) / 2 + wide + spacing
        centre_y = (max(ys) + min(ys)) / 2
        layout.annotations.append(Annotation(label, frame.point(0.0, centre_y), reach))
    return layout


def _bezier(p0, p1, p2, p3, samples: int = 12) -> List[Point]:
    s = np.linspace(0.0, 1.0, samples)[:, None]
    curve = ((1 - s) ** 3) * p0 + 3 * ((1 - s) ** 2) * s * p1 + 3 * (1 - s) * (s ** 2) * p2 + (s ** 3) * p3
    return [(float(x), float(y)) for x, y in curve]


def medial_layout(graph: ChainmailGraph, crossing_of_edge: Dict[str, int],
                  passages: List[List[Tuple[int, int]]], arcs: List[Tuple[int, ...]],
                  over_ports: Dict[int, Tuple[int, int]], unknot_vertices: Dict[str, str]) -> DiagramLayout:
    """
    passages[k] lists (crossing, entry port) along component k. Ports
    0..3 point NE, NW, SW, SE in the frame of the crossing's edge.
    """
    positions = tutte_positions(graph)
    unit = _unit_length(graph, positions)
    copies = {e: 1 for e in crossing_of_edge}
    offsets = clasp_offsets(graph, copies, CLASP_SPACING * unit * 2)

    centres: Dict[int, np.ndarray] = {}
    ports: Dict[int, List[np.ndarray]] = {}
    for edge_id, index in crossing_of_edge.items():
        edge = graph.edges[edge_id]
        frame = EdgeFrame(positions[edge.ends[0]], positions[edge.ends[1]])
        centres[index] = np.array(frame.point(0.0, offsets[(edge_id, 0)]))
        ports[index] = [_unit(frame.t + frame.n), _unit(-frame.t + frame.n),
                        _unit(-frame.t - frame.n), _unit(frame.t - frame.n)]

    layout = DiagramLayout(gap=PORT_STUB * unit * 0.8)
    count = len(crossing_of_edge)
    layout.crossing_points = [(0.0, 0.0)] * count
    layout.over_directions = [(1.0, 0.0)] * count
    for index, centre in centres.items():
        layout.crossing_points[index] = (float(centre[0]), float(centre[1]))
        first, second = over_ports[index]
        direction = _unit(ports[index][second] - ports[index][first])
        layout.over_directions[index] = (float(direction[0]), float(direction[1]))

    stub, reach = PORT_STUB * unit, PORT_REACH * unit
    for route, component_arcs in zip(passages, arcs):
        for t, arc in enumerate(component_arcs):
            previous, entry = route[t - 1], route[t]
            leave = ports[previous[0]][(previous[1] + 2) % 4]
            arrive = ports[entry[0]][entry[1]]
            a, b = centres[previous[0]], centres[entry[0]]
            curve = _bezier(a + stub * leave, a + reach * leave, b + reach * arrive, b + stub * arrive)
            layout.arc_points[arc] = [tuple(map(float, a))] + curve + [tuple(map(float, b))]

    for component_id, vertex in unknot_vertices.items():
        centre = positions[vertex]
        layout.unknots[component_id] = (float(centre[0]), float(centre[1]), VERTEX_RADIUS * unit)
    return layout
