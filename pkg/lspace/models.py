"""
Certificate trees for the L-space inductions and the orientation
obstruction report.

A certificate is an immutable tree; every node stores the graph it speaks
about and the determinant it claims, so a verifier can recompute
everything without trusting the builder.
"""
from dataclasses import dataclass, field
from math import prod
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from core.utils import natural_sorted
from graphs.models import AugmentedGraph, ChainmailGraph

# slopes of the surgery triangle on the crossing loop of an EdgeTriangle edge
TRIANGLE_SLOPES = {'node': '-1', 'delete': 'inf', 'contract': '0'}


@dataclass(frozen=True)
class LensBase:
    weights: Tuple[int, ...]


@dataclass(frozen=True)
class EdgeTriangle:
    edge: str
    delete_child: 'Certificate'
    contract_child: 'Certificate'
    slopes: Mapping[str, str] = field(default_factory=lambda: dict(TRIANGLE_SLOPES), compare=False)


@dataclass(frozen=True)
class LeafRemoval:
    vertex: str
    edge: str
    child: 'Certificate'


CertificateStep = Union[LensBase, EdgeTriangle, LeafRemoval]


@dataclass(frozen=True, eq=False)
class Certificate:
    graph: ChainmailGraph
    det: int
    step: CertificateStep

    @property
    def kind(self) -> str:
        return STEP_KINDS[type(self.step)]

    @property
    def children(self) -> List['Certificate']:
        if isinstance(self.step, EdgeTriangle):
            return [self.step.delete_child, self.step.contract_child]
        if isinstance(self.step, LeafRemoval):
            return [self.step.child]
        return []

    def walk(self) -> Iterator['Certificate']:
        """Preorder."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())

    def depth(self) -> int:
        return 1 + max((child.depth() for child in self.children), default=0)

    def lens_sum(self) -> int:
        """Sum over LensBase leaves of the product of their weights."""
        return sum(prod(node.step.weights) for node in self.walk() if isinstance(node.step, LensBase))

    def summary(self) -> Dict[str, int]:
        kinds = {kind: 0 for kind in STEP_KINDS.values()}
        for node in self.walk():
            kinds[node.kind] += 1
        return kinds


STEP_KINDS = {LensBase: 'lens-base', EdgeTriangle: 'edge-triangle', LeafRemoval: 'leaf-removal'}


# -- generalized certificates --------------------------------------------------

@dataclass(frozen=True)
class ChainmailBase:
    certificate: Certificate


@dataclass(frozen=True)
class CoefficientTriangle:
    """c -> (c - 1, erased): det(node) = det(shallower) - det(erased)."""

    edge: str
    shallower: 'GeneralizedCertificate'
    erased: 'GeneralizedCertificate'


@dataclass(frozen=True)
class UnitBlowDown:
    """-1 crossing loop blown down: det(node) = -det(child)."""

    edge: str
    child: 'GeneralizedCertificate'


GeneralizedStep = Union[ChainmailBase, CoefficientTriangle, UnitBlowDown]


@dataclass(frozen=True, eq=False)
class GeneralizedCertificate:
    graph: AugmentedGraph
    det: int
    step: GeneralizedStep

    @property
    def kind(self) -> str:
        return GENERALIZED_KINDS[type(self.step)]

    @property
    def crossing_loops(self) -> int:
        return len(self.graph.coefficients)

    @property
    def children(self) -> List['GeneralizedCertificate']:
        if isinstance(self.step, CoefficientTriangle):
            return [self.step.shallower, self.step.erased]
        if isinstance(self.step, UnitBlowDown):
            return [self.step.child]
        return []

    def walk(self) -> Iterator['GeneralizedCertificate']:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def node_count(self) -> int:
        """Nodes of this tree plus those of every embedded chainmail certificate."""
        total = 0
        for node in self.walk():
            total += 1
            if isinstance(node.step, ChainmailBase):
                total += node.step.certificate.node_count()
        return total


GENERALIZED_KINDS = {ChainmailBase: 'chainmail-base', CoefficientTriangle: 'coefficient-triangle',
                     UnitBlowDown: 'unit-blow-down'}


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    path: Optional[str] = None
    reason: Optional[str] = None
    nodes: int = 0

    def __bool__(self):
        return self.ok

    def text(self) -> str:
        if self.ok:
            return f"certificate OK ({self.nodes} nodes)"
        return f"certificate FAILED at {self.path}: {self.reason}"

    def as_dict(self):
        return {'ok': self.ok, 'path': self.path, 'reason': self.reason, 'nodes': self.nodes}


# -- orientation obstruction ----------------------------------------------------

@dataclass(frozen=True)
class OrientationRecord:
    direction: Mapping[str, str]
    sinks: Tuple[str, ...]
    sources: Tuple[str, ...]
    witness: Optional[str]

    def as_dict(self):
        return {
            'direction': dict(self.direction),
            'sinks': list(self.sinks),
            'sources': list(self.sources),
            'witness': self.witness,
        }


@dataclass
class ObstructionReport:
    edge_count: int
    positive_vertex: Optional[str]
    records: List[OrientationRecord]

    @property
    def orientation_count(self) -> int:
        return len(self.records)

    def failures(self) -> List[int]:
        bad = []
        for index, record in enumerate(self.records):
            if not record.sinks or not record.sources:
                bad.append(index)
            elif self.edge_count and record.witness is None:
                bad.append(index)
        return bad

    @property
    def verdict(self) -> bool:
        return not self.failures()

    def text(self) -> str:
        lines = [f"{self.orientation_count} acyclic orientations over {self.edge_count} edges"]
        witnesses = natural_sorted({r.witness for r in self.records if r.witness is not None})
        if witnesses:
            lines.append(f"zero-weight witnesses: {', '.join(witnesses)}")
        failures = self.failures()
        if failures:
            lines.append(f"orientation {failures[0]} has no zero-weight sink or source")
        lines.append('verdict: PASS' if self.verdict else 'verdict: FAIL')
        return '\n'.join(lines)

    def as_dict(self):
        return {
            'edges': self.edge_count,
            'positive_vertex': self.positive_vertex,
            'orientation_count': self.orientation_count,
            'orientations': [r.as_dict() for r in self.records],
            'verdict': self.verdict,
        }
