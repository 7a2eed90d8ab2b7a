"""
Link diagrams of chainmail graphs: the chainmail link, the medial link,
their PD codes and the invariants read off a PD code.
"""
import logging
import re
from collections import deque
from math import prod
from typing import Dict, List, Optional, Tuple, Union

from core.exceptions import CertificateError, InvalidInputError, PreconditionError
from graphs.embedding import validate
from graphs.minors import delete_edges, split_parallel
from graphs.models import AugmentedGraph, ChainmailGraph
from graphs.properties import count_weighted_spanning_trees
from linalg.models import IntMatrix
from linalg.services import determinant
from surgery.services import first_homology, linking_matrix

from .layout import chainmail_layout, medial_layout
from .models import ComponentKind, CoverReport, Crossing, DiagramInvariants, LinkComponent, PDCode

logger = logging.getLogger(__name__)


def _require_embedding(graph: ChainmailGraph) -> None:
    report = validate(graph)
    if not report.valid:
        problem = report.errors[0] if report.errors else 'rotation system is not a sphere embedding'
        raise InvalidInputError(f"invalid embedding: {problem}", detail=report.as_dict())


def _clasp_graph(graph: ChainmailGraph) -> ChainmailGraph:
    """Loops and zero-weight edges removed; neither contributes crossings."""
    idle = [e for e, edge in graph.edges.items() if edge.is_loop or edge.weight == 0]
    return delete_edges(graph, idle) if idle else graph


def _number_arcs(routes: List[list]) -> List[Tuple[int, ...]]:
    arcs, next_arc = [], 1
    for route in routes:
        size = max(len(route), 1)
        arcs.append(tuple(range(next_arc, next_arc + size)))
        next_arc += size
    return arcs


# -- chainmail link ------------------------------------------------------------

def build_chainmail_pd(graph: Union[ChainmailGraph, AugmentedGraph], with_layout: bool = True) -> PDCode:
    """
    One counterclockwise circle per vertex; an edge of weight w adds |w|
    clasps. At clasp m the end-0 circle meets crossings Q then P going out
    along its finger, the end-1 circle meets P then Q along its finger tip.
    Augmented graphs are drawn with their crossing loops as annotations.
    """
    coefficients = None
    if isinstance(graph, AugmentedGraph):
        coefficients = {e: str(c) for e, c in graph.coefficients.items()}
        graph = graph.base
    _require_embedding(graph)
    clasps = _clasp_graph(graph)

    crossing_of: Dict[Tuple[str, int, str], int] = {}
    for edge_id in clasps.edge_ids:
        for m in range(abs(clasps.edges[edge_id].weight)):
            for name in ('P', 'Q'):
                crossing_of[(edge_id, m, name)] = len(crossing_of)

    routes: Dict[str, List[Tuple[str, int, str]]] = {}
    for vertex in clasps.vertex_ids:
        route = []
        for dart in clasps.rotations[vertex]:
            count = abs(clasps.edges[dart.edge].weight)
            if dart.end == 0:
                for m in range(count):
                    route += [(dart.edge, m, 'Q'), (dart.edge, m, 'P')]
            else:
                for m in reversed(range(count)):
                    route += [(dart.edge, m, 'P'), (dart.edge, m, 'Q')]
        routes[vertex] = route

    vertex_ids = clasps.vertex_ids
    arcs = dict(zip(vertex_ids, _number_arcs([routes[v] for v in vertex_ids])))
    # (clasp crossing, end) -> (arc in, arc out)
    strands: Dict[Tuple[Tuple[str, int, str], int], Tuple[int, int]] = {}
    for vertex in vertex_ids:
        route = routes[vertex]
        for t, key in enumerate(route):
            end = 0 if clasps.edges[key[0]].ends[0] == vertex else 1
            strands[(key, end)] = (arcs[vertex][t], arcs[vertex][(t + 1) % len(route)])

    crossings: List[Optional[Crossing]] = [None] * len(crossing_of)
    over_side: Dict[int, int] = {}
    for key, index in crossing_of.items():
        (u_in, u_out), (v_in, v_out) = strands[(key, 0)], strands[(key, 1)]
        negative = clasps.edges[key[0]].weight < 0
        if negative and key[2] == 'P':
            crossings[index], over_side[index] = Crossing((u_in, v_in, u_out, v_out), -1), 1
        elif negative:
            crossings[index], over_side[index] = Crossing((v_in, u_in, v_out, u_out), -1), 0
        elif key[2] == 'P':
            crossings[index], over_side[index] = Crossing((v_in, u_out, v_out, u_in), 1), 0
        else:
            crossings[index], over_side[index] = Crossing((u_in, v_out, u_out, v_in), 1), 1

    components = tuple(LinkComponent(v, ComponentKind.VERTEX, arcs[v]) for v in vertex_ids)
    layout = chainmail_layout(clasps, arcs, crossing_of, over_side, coefficients) if with_layout else None
    pd = PDCode('chainmail', tuple(crossings), components, layout)

    lk = _linking_numbers(pd)
    expected = linking_matrix(graph).matrix
    for i in range(len(vertex_ids)):
        for j in range(len(vertex_ids)):
            if i != j and lk[i][j] != expected[i, j]:
                raise CertificateError(
                    f"diagram linking number lk({vertex_ids[i]}, {vertex_ids[j]}) = {lk[i][j]} "
                    f"differs from the linking matrix entry {expected[i, j]}",
                    detail={'vertices': [vertex_ids[i], vertex_ids[j]]},
                )
    logger.debug(f"chainmail diagram: {pd.crossing_count} crossings, {len(components)} components")
    return pd


# -- medial link -----------------------------------------------------------------

def _after_port(end: int) -> int:
    return 1 if end == 0 else 3


def _before_port(end: int) -> int:
    return 2 if end == 0 else 0


def medial_link_pd(graph: ChainmailGraph, with_layout: bool = True) -> PDCode:
    """
    One crossing per unit of |weight| at the middle of each parallel copy,
    strands turning around every corner of the embedding. Negative edges
    put the strand through the two 'after' corners (ports 1 and 3) over.
    """
    _require_embedding(graph)
    if not graph.is_connected():
        raise PreconditionError(
            f"medial link needs a connected graph; found {len(graph.components())} components",
            detail={'components': len(graph.components())},
        )
    working = split_parallel(_clasp_graph(graph))

    crossing_of_edge = {e: i for i, e in enumerate(working.edge_ids)}
    over_ports = {
        crossing_of_edge[e]: ((1, 3) if working.edges[e].weight < 0 else (0, 2)) for e in working.edge_ids
    }
    links: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for vertex in working.vertex_ids:
        rotation = working.rotations[vertex]
        for position, dart in enumerate(rotation):
            following = rotation[(position + 1) % len(rotation)]
            leave = (crossing_of_edge[dart.edge], _after_port(dart.end))
            arrive = (crossing_of_edge[following.edge], _before_port(following.end))
            links[leave] = arrive
            links[arrive] = leave

    routes: List[List[Tuple[int, int]]] = []
    used = set()
    for crossing in range(len(crossing_of_edge)):
        for entry in (2, 1):
            if (crossing, entry % 2) in used:
                continue
            route, current = [], (crossing, entry)
            while True:
                route.append(current)
                used.add((current[0], current[1] % 2))
                current = links[(current[0], (current[1] + 2) % 4)]
                if current == (crossing, entry):
                    break
            routes.append(route)

    isolated = [v for v in working.vertex_ids if not working.rotations[v]]
    arcs = _number_arcs(routes + [[None] for _ in isolated])
    passes: Dict[int, Dict[int, Tuple[int, int]]] = {i: {} for i in crossing_of_edge.values()}
    for route, component_arcs in zip(routes, arcs):
        for t, (crossing, port) in enumerate(route):
            passes[crossing][port] = (component_arcs[t], component_arcs[(t + 1) % len(route)])

    crossings = []
    for index in range(len(crossing_of_edge)):
        over_in = next(p for p in passes[index] if p in over_ports[index])
        under_in = next(p for p in passes[index] if p not in over_ports[index])
        at_port = {}
        for port, (arc_in, arc_out) in passes[index].items():
            at_port[port] = arc_in
            at_port[(port + 2) % 4] = arc_out
        sign = 1 if (over_in - under_in) % 4 == 3 else -1
        crossings.append(Crossing(tuple(at_port[(under_in + r) % 4] for r in range(4)), sign))

    components = [LinkComponent(f"K{k + 1}", ComponentKind.MEDIAL, arcs[k]) for k in range(len(routes))]
    unknots = {}
    for offset, vertex in enumerate(isolated):
        component_id = f"K{len(routes) + offset + 1}"
        components.append(LinkComponent(component_id, ComponentKind.MEDIAL, arcs[len(routes) + offset]))
        unknots[component_id] = vertex

    layout = None
    if with_layout:
        layout = medial_layout(working, crossing_of_edge, routes, arcs[:len(routes)], over_ports, unknots)
    pd = PDCode('medial', tuple(crossings), tuple(components), layout)
    logger.debug(f"medial diagram: {pd.crossing_count} crossings, {len(components)} components")
    return pd


# -- PD validation and invariants ---------------------------------------------------

def validate_pd(pd: PDCode) -> None:
    """InvalidInputError unless every arc is used consistently with its component."""
    following: Dict[int, int] = {}
    for component in pd.components:
        if not component.arcs:
            raise InvalidInputError(f"component '{component.id}' has no arcs", detail={'component': component.id})
        for position, arc in enumerate(component.arcs):
            if arc in following:
                raise InvalidInputError(f"arc {arc} belongs to two components", detail={'arc': arc})
            following[arc] = component.arcs[(position + 1) % len(component.arcs)]

    uses: Dict[int, int] = {}
    for number, crossing in enumerate(pd.crossings, start=1):
        if crossing.sign not in (-1, 1):
            raise InvalidInputError(f"crossing {number} has sign {crossing.sign}", detail={'crossing': number})
        for arc in crossing.arcs:
            if arc not in following:
                raise InvalidInputError(f"crossing {number} uses arc {arc} of no component", detail={'arc': arc})
            uses[arc] = uses.get(arc, 0) + 1
        if following[crossing.under_in] != crossing.under_out:
            raise InvalidInputError(
                f"crossing {number}: under strand {crossing.under_in} -> {crossing.under_out} breaks its component",
                detail={'crossing': number},
            )
        if following[crossing.over_in] != crossing.over_out:
            raise InvalidInputError(
                f"crossing {number}: over strand {crossing.over_in} -> {crossing.over_out} breaks its component",
                detail={'crossing': number},
            )

    for component in pd.components:
        counts = {uses.get(arc, 0) for arc in component.arcs}
        if len(component.arcs) == 1 and counts == {0}:
            continue
        if counts != {2}:
            bad = next(arc for arc in component.arcs if uses.get(arc, 0) != 2)
            raise InvalidInputError(
                f"arc {bad} appears {uses.get(bad, 0)} times; every arc must appear exactly twice",
                detail={'arc': bad},
            )


def _linking_numbers(pd: PDCode) -> List[List[int]]:
    owner = pd.component_of_arc()
    size = len(pd.components)
    twice = [[0] * size for _ in range(size)]
    for crossing in pd.crossings:
        a, b = owner[crossing.under_in], owner[crossing.over_in]
        if a != b:
            twice[a][b] += crossing.sign
            twice[b][a] += crossing.sign
    for i in range(size):
        for j in range(size):
            if twice[i][j] % 2:
                raise InvalidInputError(
                    f"odd crossing sum between components '{pd.components[i].id}' and '{pd.components[j].id}'"
                )
    return [[x // 2 for x in row] for row in twice]


def _is_alternating(pd: PDCode) -> bool:
    passage = {}
    for crossing in pd.crossings:
        passage[crossing.under_in] = 'under'
        passage[crossing.over_in] = 'over'
    for component in pd.components:
        kinds = [passage[arc] for arc in component.arcs if arc in passage]
        if any(kinds[t] == kinds[t - 1] for t in range(len(kinds))):
            return False
    return True


def _seifert_circles(pd: PDCode) -> int:
    smoothing = {}
    for crossing in pd.crossings:
        i, j, k, l = crossing.arcs
        if crossing.sign < 0:
            smoothing[i], smoothing[j] = l, k
        else:
            smoothing[i], smoothing[l] = j, k
    circles, seen = 0, set()
    for start in smoothing:
        if start in seen:
            continue
        circles += 1
        arc = start
        while arc not in seen:
            seen.add(arc)
            arc = smoothing[arc]
    crossingless = sum(1 for c in pd.components if not any(a in smoothing for a in c.arcs))
    return circles + crossingless


class _Regions:
    """Faces of the 4-valent diagram graph; corner k of crossing c lies in face[(c, k + 1)]."""

    def __init__(self, pd: PDCode):
        occurrences: Dict[int, List[Tuple[int, int]]] = {}
        for c, crossing in enumerate(pd.crossings):
            for p, arc in enumerate(crossing.arcs):
                occurrences.setdefault(arc, []).append((c, p))
        twin = {}
        for first, second in occurrences.values():
            twin[first], twin[second] = second, first

        self.face: Dict[Tuple[int, int], int] = {}
        self.count = 0
        for c in range(len(pd.crossings)):
            for p in range(4):
                if (c, p) in self.face:
                    continue
                dart = (c, p)
                while dart not in self.face:
                    self.face[dart] = self.count
                    other = twin[dart]
                    dart = (other[0], (other[1] + 1) % 4)
                self.count += 1

        parent = list(range(len(pd.crossings)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for first, second in occurrences.values():
            parent[find(first[0])] = find(second[0])
        self.pieces = len({find(c) for c in range(len(pd.crossings))})

    def corner(self, c: int, k: int) -> int:
        return self.face[(c, (k + 1) % 4)]


def _incoming_dart(pd: PDCode, arc: int) -> Tuple[int, int]:
    for c, crossing in enumerate(pd.crossings):
        if crossing.under_in == arc:
            return c, 0
        if crossing.over_in == arc:
            return c, (1 if crossing.sign < 0 else 3)
    raise InvalidInputError(f"arc {arc} enters no crossing", detail={'arc': arc})


def _goeritz_det(pd: PDCode, regions: _Regions) -> int:
    colour = [-1] * regions.count
    neighbours: Dict[int, set] = {f: set() for f in range(regions.count)}
    for c in range(len(pd.crossings)):
        for p in range(4):
            a, b = regions.face[(c, p)], regions.face[(c, (p + 1) % 4)]
            neighbours[a].add(b)
            neighbours[b].add(a)
    for start in range(regions.count):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            face = queue.popleft()
            for other in neighbours[face]:
                if colour[other] < 0:
                    colour[other] = 1 - colour[face]
                    queue.append(other)
                elif colour[other] == colour[face]:
                    raise InvalidInputError("diagram regions are not checkerboard colourable")

    shaded_colour = colour[regions.face[_incoming_dart(pd, pd.components[0].arcs[0])]]
    shaded = [f for f in range(regions.count) if colour[f] == shaded_colour]
    index = {f: i for i, f in enumerate(shaded)}
    size = len(shaded)
    goeritz = [[0] * size for _ in range(size)]
    for c in range(len(pd.crossings)):
        first = 0 if colour[regions.corner(c, 0)] == shaded_colour else 1
        eta = 1 if first == 0 else -1
        a, b = index[regions.corner(c, first)], index[regions.corner(c, first + 2)]
        if a != b:
            goeritz[a][b] -= eta
            goeritz[b][a] -= eta
    for i in range(size):
        goeritz[i][i] = -sum(goeritz[i][j] for j in range(size) if j != i)
    reduced = [row[:-1] for row in goeritz[:-1]]
    return abs(determinant(IntMatrix.from_rows(reduced, cols=size - 1)))


def diagram_invariants(pd: PDCode) -> DiagramInvariants:
    """
    Invariants read off a PD code.

    On chainmail diagrams the Seifert count is
    s = 2 * sum(|eps|) - |V| + 2 * (components of the clasp graph).
    That is |V|, one circle per vertex, only when the clasp graph is a
    forest; a cycle of clasps adds circles beyond |V|.
    """
    validate_pd(pd)
    crossingless = [c for c in pd.components if len(c.arcs) == 1 and not any(
        c.arcs[0] in x.arcs for x in pd.crossings)]
    regions = _Regions(pd)
    if pd.crossings and regions.count != pd.crossing_count + 2 * regions.pieces:
        raise InvalidInputError(
            f"PD code is not planar: {regions.count} regions for {pd.crossing_count} crossings",
            detail={'regions': regions.count, 'crossings': pd.crossing_count},
        )
    pieces = (regions.pieces if pd.crossings else 0) + len(crossingless)
    split = pieces > 1
    if split:
        goeritz = 0
    elif pd.crossings:
        goeritz = _goeritz_det(pd, regions)
    else:
        goeritz = 1

    return DiagramInvariants(
        crossing_count=pd.crossing_count,
        writhe=sum(c.sign for c in pd.crossings),
        component_ids=[c.id for c in pd.components],
        lk=_linking_numbers(pd),
        alternating=_is_alternating(pd),
        seifert_circles=_seifert_circles(pd),
        goeritz_det=goeritz,
        split=split,
    )


# -- PD text ----------------------------------------------------------------------

CROSSING_LINE = re.compile(r'^X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*([+-])$')


def parse_pd_text(text: str) -> PDCode:
    """
    Reads the format PDCode.text writes: a 'pd <kind>' header, one
    'component <id> <kind> <arcs...>' line per component, one X[...]± line
    per crossing. Blank lines and '#' comments are skipped.
    """
    kind = None
    components, crossings = [], []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        words = line.split()
        if kind is None:
            if len(words) != 2 or words[0] != 'pd':
                raise InvalidInputError(f"line {number}: expected 'pd <kind>' header", detail={'line': number})
            kind = words[1]
            continue
        if words[0] == 'component':
            if len(words) < 4:
                raise InvalidInputError(f"line {number}: component needs an id, a kind and arcs",
                                        detail={'line': number})
            try:
                component_kind = ComponentKind(words[2])
                arcs = tuple(int(w) for w in words[3:])
            except ValueError:
                raise InvalidInputError(f"line {number}: malformed component line", detail={'line': number})
            components.append(LinkComponent(words[1], component_kind, arcs))
            continue
        match = CROSSING_LINE.match(line)
        if not match:
            raise InvalidInputError(f"line {number}: cannot read '{line}'", detail={'line': number})
        arcs = tuple(int(match.group(g)) for g in range(1, 5))
        crossings.append(Crossing(arcs, 1 if match.group(5) == '+' else -1))
    if kind is None:
        raise InvalidInputError("empty PD text")
    pd = PDCode(kind, tuple(crossings), tuple(components))
    validate_pd(pd)
    return pd


# -- balanced cover check -------------------------------------------------------

def balanced_cover_check(graph: ChainmailGraph) -> CoverReport:
    if not graph.is_connected():
        raise PreconditionError("cover check needs a connected graph")
    weighted = [v for v in graph.vertex_ids if graph.vertices[v] != 0]
    if weighted:
        raise PreconditionError(
            f"cover check needs a balanced graph; vertex '{weighted[0]}' has weight {graph.vertices[weighted[0]]}",
            detail={'vertex': weighted[0]},
        )
    positive = [e for e in graph.edge_ids if graph.edges[e].weight >= 0 and not graph.edges[e].is_loop]
    if positive:
        raise PreconditionError(
            f"cover check needs negative edge weights; edge '{positive[0]}' has weight "
            f"{graph.edges[positive[0]].weight}",
            detail={'edge': positive[0]},
        )
    group = first_homology(graph)
    goeritz = diagram_invariants(medial_link_pd(graph, with_layout=False)).goeritz_det
    report = CoverReport(
        free_rank=group.free_rank,
        torsion_order=prod(group.invariant_factors),
        goeritz_det=goeritz,
        spanning_trees=count_weighted_spanning_trees(graph),
    )
    logger.info(f"🧭 Cover check: {report.text()}")
    return report
