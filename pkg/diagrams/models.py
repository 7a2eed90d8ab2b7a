"""
Planar diagram codes and their invariants.

A crossing is X[i, j, k, l]: i is the under-strand arc coming in, then the
other three arcs counterclockwise, so k leaves along the under strand.
The over strand enters at j on a negative crossing and at l on a positive
one. Arc a_t of a component enters the t-th crossing passage of its
traversal.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

Point = Tuple[float, float]


class ComponentKind(str, Enum):
    VERTEX = 'vertex'
    MEDIAL = 'medial'


@dataclass(frozen=True)
class Crossing:
    arcs: Tuple[int, int, int, int]
    sign: int

    @property
    def over_in(self) -> int:
        return self.arcs[1] if self.sign < 0 else self.arcs[3]

    @property
    def over_out(self) -> int:
        return self.arcs[3] if self.sign < 0 else self.arcs[1]

    @property
    def under_in(self) -> int:
        return self.arcs[0]

    @property
    def under_out(self) -> int:
        return self.arcs[2]

    def __str__(self):
        return f"X[{','.join(str(a) for a in self.arcs)}]{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class LinkComponent:
    id: str
    kind: ComponentKind
    arcs: Tuple[int, ...]


@dataclass(frozen=True)
class Annotation:
    """A crossing loop drawn around a clasp, labelled with its coefficient."""

    label: str
    center: Point
    radius: float


@dataclass
class DiagramLayout:
    """Plane geometry for rendering; arc polylines run from crossing to crossing."""

    arc_points: Dict[int, List[Point]] = field(default_factory=dict)
    crossing_points: List[Point] = field(default_factory=list)
    over_directions: List[Point] = field(default_factory=list)
    unknots: Dict[str, Tuple[float, float, float]] = field(default_factory=dict)
    annotations: List[Annotation] = field(default_factory=list)
    gap: float = 0.05

    def all_points(self) -> List[Point]:
        points = list(self.crossing_points)
        for polyline in self.arc_points.values():
            points.extend(polyline)
        for x, y, r in self.unknots.values():
            points.extend([(x - r, y - r), (x + r, y + r)])
        for note in self.annotations:
            x, y = note.center
            points.extend([(x - note.radius, y - note.radius), (x + note.radius, y + note.radius)])
        return points


@dataclass(frozen=True)
class PDCode:
    kind: str
    crossings: Tuple[Crossing, ...]
    components: Tuple[LinkComponent, ...]
    layout: Optional[DiagramLayout] = field(default=None, compare=False)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def component_of_arc(self) -> Dict[int, int]:
        return {arc: index for index, component in enumerate(self.components) for arc in component.arcs}

    def text(self) -> str:
        lines = [f"pd {self.kind}"]
        for component in self.components:
            arcs = ' '.join(str(a) for a in component.arcs)
            lines.append(f"component {component.id} {component.kind.value} {arcs}")
        lines.extend(str(crossing) for crossing in self.crossings)
        return '\n'.join(lines) + '\n'

    def as_dict(self):
        return {
            'kind': self.kind,
            'components': [
                {'id': c.id, 'kind': c.kind.value, 'arcs': list(c.arcs)} for c in self.components
            ],
            'crossings': [{'arcs': list(x.arcs), 'sign': x.sign} for x in self.crossings],
        }


@dataclass
class DiagramInvariants:
    crossing_count: int
    writhe: int
    component_ids: List[str]
    lk: List[List[int]]
    alternating: bool
    seifert_circles: int
    goeritz_det: int
    split: bool

    @property
    def seifert_euler(self) -> int:
        return self.seifert_circles - self.crossing_count

    @property
    def seifert_genus(self) -> Optional[int]:
        """Genus of the Seifert surface; None when the diagram is split."""
        if self.split or not self.component_ids:
            return None
        return (2 - self.seifert_euler - len(self.component_ids)) // 2

    def lk_between(self, first: str, second: str) -> int:
        return self.lk[self.component_ids.index(first)][self.component_ids.index(second)]

    def text(self) -> str:
        lines = [
            f"crossings: {self.crossing_count}",
            f"components: {len(self.component_ids)}",
            f"writhe: {self.writhe}",
            f"alternating: {'yes' if self.alternating else 'no'}",
            f"seifert circles: {self.seifert_circles} (euler {self.seifert_euler})",
            f"seifert genus: {'-' if self.seifert_genus is None else self.seifert_genus}",
            f"goeritz det: {self.goeritz_det}",
        ]
        return '\n'.join(lines)

    def as_dict(self):
        return {
            'crossing_count': self.crossing_count,
            'writhe': self.writhe,
            'components': self.component_ids,
            'lk': self.lk,
            'alternating': self.alternating,
            'seifert_circles': self.seifert_circles,
            'seifert_euler': self.seifert_euler,
            'seifert_genus': self.seifert_genus,
            'goeritz_det': str(self.goeritz_det),
            'split': self.split,
        }


@dataclass
class CoverReport:
    """coker Lambda = Z + T for a connected balanced graph, |T| from three code paths."""

    free_rank: int
    torsion_order: int
    goeritz_det: int
    spanning_trees: int

    @property
    def holds(self) -> bool:
        return self.free_rank == 1 and self.torsion_order == self.goeritz_det == self.spanning_trees

    def text(self) -> str:
        verdict = 'OK' if self.holds else 'FAIL'
        return (f"H1 = Z + T with |T| = {self.torsion_order}, goeritz det {self.goeritz_det}, "
                f"spanning trees {self.spanning_trees} {verdict}")

    def as_dict(self):
        return {
            'free_rank': self.free_rank,
            'torsion_order': str(self.torsion_order),
            'goeritz_det': str(self.goeritz_det),
            'spanning_trees': str(self.spanning_trees),
            'holds': self.holds,
        }
