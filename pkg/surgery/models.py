"""
Surgery-side values: framing matrices of chainmail and augmented chainmail
links, and the reports produced by the determinant checks.
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from graphs.models import SurgeryCoefficient
from linalg.models import IntMatrix


@dataclass(frozen=True)
class LinkingMatrix:
    """
    Framing matrix of L_G indexed by vertex id.

    Off-diagonal entries are summed edge weights; the diagonal is
    nu(v) minus the row's off-diagonal sum, so every row sums to nu(v).
    """

    matrix: IntMatrix

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.matrix.row_labels or ()

    def entry(self, u: str, v: str) -> int:
        return self.matrix[self.labels.index(u), self.labels.index(v)]

    def row_sums(self) -> List[int]:
        return [sum(row) for row in self.matrix.entries]

    def as_dict(self):
        return self.matrix.as_dict()


@dataclass(frozen=True)
class AugmentedMatrix:
    """Crossing-loop rows first (in edge order), then the vertex block."""

    matrix: IntMatrix
    crossing_edges: Tuple[str, ...]
    vertex_labels: Tuple[str, ...]

    @property
    def crossing_count(self) -> int:
        return len(self.crossing_edges)

    def vertex_block(self) -> IntMatrix:
        offset = self.crossing_count
        keep = range(offset, self.matrix.rows)
        return self.matrix.submatrix(keep, keep)

    def as_dict(self):
        payload = self.matrix.as_dict()
        payload['crossing_edges'] = list(self.crossing_edges)
        return payload


def crossing_label(edge_id: str) -> str:
    return f"c[{edge_id}]"


@dataclass(frozen=True)
class SurgeryComponent:
    """One framed component: coefficient p/q and its linking numbers with every component."""

    label: str
    coefficient: SurgeryCoefficient
    linking: Tuple[int, ...]


class CrossingAction(str, Enum):
    ROLFSEN_TWIST = 'twist'
    BLOW_DOWN_UNIT = 'blowdown'
    ERASE = 'erase'


@dataclass
class DCReport:
    edge: str
    det: int
    deleted: int
    contracted: int

    @property
    def holds(self) -> bool:
        return self.det == self.deleted + self.contracted

    def text(self) -> str:
        return f"{self.det} = {self.deleted} + {self.contracted} {'OK' if self.holds else 'FAIL'}"

    def as_dict(self):
        return {
            'edge': self.edge,
            'det': str(self.det),
            'det_deleted': str(self.deleted),
            'det_contracted': str(self.contracted),
            'holds': self.holds,
        }


@dataclass
class SignReport:
    det: int
    crossing_loops: int

    @property
    def expected_sign(self) -> int:
        return -1 if self.crossing_loops % 2 else 1

    @property
    def sign(self) -> int:
        return (self.det > 0) - (self.det < 0)

    @property
    def holds(self) -> bool:
        return self.det == 0 or self.sign == self.expected_sign

    def text(self) -> str:
        verdict = 'OK' if self.holds else 'FAIL'
        return (f"det = {self.det}, |V_c| = {self.crossing_loops}, "
                f"expected sign {'+' if self.expected_sign > 0 else '-'} {verdict}")

    def as_dict(self):
        return {
            'det': str(self.det),
            'crossing_loops': self.crossing_loops,
            'expected_sign': self.expected_sign,
            'holds': self.holds,
        }


@dataclass
class TwistReport:
    """Result of a crossing-loop transform with the determinants on both sides."""

    edge: str
    action: CrossingAction
    det_before: int
    det_after: int

    def as_dict(self):
        return {
            'edge': self.edge,
            'action': self.action.value,
            'det_before': str(self.det_before),
            'det_after': str(self.det_after),
        }
