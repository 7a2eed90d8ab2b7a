"""
Certificate construction and verification for negative alternating
chainmail graphs and their partial augmentations, and the acyclic
orientation obstruction.
"""
import logging
from math import prod
from typing import List, Optional

from django.conf import settings

from core.exceptions import CapExceededError, CertificateError, HypothesisError, PreconditionError
from core.utils import natural_sorted
from graphs.minors import delete_edges, delete_vertex, drop_loops, is_normalized, minor, normalize
from graphs.models import AugmentedGraph, ChainmailGraph, MinorKind, SurgeryCoefficient
from graphs.properties import bridges, enumerate_acyclic_orientations
from linalg.services import determinant
from surgery.models import CrossingAction
from surgery.services import augmented_matrix, crossing_loop_transform, linking_determinant

from .models import (
    Certificate, ChainmailBase, CoefficientTriangle, EdgeTriangle, GeneralizedCertificate, LeafRemoval, LensBase,
    ObstructionReport, OrientationRecord, UnitBlowDown, VerificationReport,
)

logger = logging.getLogger(__name__)


def alternating_hypotheses(graph: ChainmailGraph) -> List[str]:
    """
    Violations of: nu >= 0 everywhere, a positive vertex in every
    component, every edge weight negative.
    """
    problems = []
    for vertex in graph.vertex_ids:
        if graph.vertices[vertex] < 0:
            problems.append(f"vertex '{vertex}' has negative weight {graph.vertices[vertex]}")
    for edge_id in graph.edge_ids:
        if graph.edges[edge_id].weight >= 0:
            problems.append(f"edge '{edge_id}' has weight {graph.edges[edge_id].weight}, not negative")
    for component in graph.components():
        if not any(graph.vertices[v] > 0 for v in component):
            problems.append(f"component of '{component[0]}' has no positive vertex")
    return problems


def _require_hypotheses(problems: List[str]) -> None:
    if problems:
        raise HypothesisError(f"hypotheses unmet: {problems[0]}", detail={'violations': problems})


class _Budget:
    def __init__(self, limit: Optional[int]):
        self.limit = getattr(settings, 'CHAINMAIL_CERTIFICATE_MAX_NODES', 200000) if limit is None else limit
        self.used = 0

    def spend(self):
        self.used += 1
        if self.used > self.limit:
            raise CapExceededError(
                f"certificate exceeds {self.limit} nodes",
                detail={'limit': self.limit},
            )


def _isolating_bridge(graph: ChainmailGraph) -> Optional[str]:
    """Lowest bridge whose removal leaves a positive vertex on both sides."""
    for edge_id in bridges(graph):
        edge = graph.edges[edge_id]
        split = delete_edges(graph, [edge_id])
        sides = [c for c in split.components() if edge.ends[0] in c or edge.ends[1] in c]
        if all(any(graph.vertices[v] > 0 for v in side) for side in sides):
            return edge_id
    return None


def _zero_leaf(graph: ChainmailGraph) -> Optional[str]:
    for vertex in graph.vertex_ids:
        if graph.vertices[vertex] == 0 and graph.degree(vertex) == 1:
            return vertex
    return None


def _certify_node(graph: ChainmailGraph, budget: _Budget) -> Certificate:
    budget.spend()
    det = linking_determinant(graph)
    if det <= 0:
        raise CertificateError(f"determinant {det} is not positive", detail={'det': str(det)})

    if not graph.edges:
        weights = tuple(graph.vertices[v] for v in graph.vertex_ids)
        if det != prod(weights):
            raise CertificateError(f"lens base determinant {det} != product {prod(weights)}")
        return Certificate(graph, det, LensBase(weights))

    isthmuses = set(bridges(graph))
    non_bridges = [e for e in graph.edge_ids if e not in isthmuses]
    edge_id = non_bridges[0] if non_bridges else _isolating_bridge(graph)
    if edge_id is not None:
        logger.debug(f"edge triangle on {edge_id} ({len(graph.edges)} edges)")
        deleted = _certify_node(minor(graph, edge_id, MinorKind.DELETE), budget)
        contracted = _certify_node(drop_loops(minor(graph, edge_id, MinorKind.CONTRACT)), budget)
        if det != deleted.det + contracted.det:
            raise CertificateError(
                f"deletion-contraction fails on '{edge_id}': {det} != {deleted.det} + {contracted.det}",
                detail={'edge': edge_id},
            )
        return Certificate(graph, det, EdgeTriangle(edge_id, deleted, contracted))

    vertex = _zero_leaf(graph)
    if vertex is None:
        raise CertificateError("no edge triangle or zero-weight leaf applies", detail={'edges': graph.edge_ids})
    leaf_edge = graph.rotations[vertex][0].edge
    child = _certify_node(delete_vertex(graph, vertex), budget)
    if det != child.det:
        raise CertificateError(f"leaf removal of '{vertex}' changes the determinant: {det} != {child.det}")
    return Certificate(graph, det, LeafRemoval(vertex, leaf_edge, child))


def certify(graph: ChainmailGraph, max_nodes: Optional[int] = None) -> Certificate:
    """
    Deletion-contraction certificate that Lambda(G) is positive with
    the determinant expanded down to lens-space leaves.
    """
    _require_hypotheses(alternating_hypotheses(graph))
    budget = _Budget(max_nodes)
    certificate = _certify_node(normalize(graph), budget)
    logger.info(f"📜 certificate built: det {certificate.det}, {budget.used} nodes")
    return certificate


def _labelled_children(node):
    step = node.step
    if isinstance(step, EdgeTriangle):
        return [('delete', step.delete_child), ('contract', step.contract_child)]
    if isinstance(step, CoefficientTriangle):
        return [('shallower', step.shallower), ('erased', step.erased)]
    if isinstance(step, ChainmailBase):
        return [('base', step.certificate)]
    if isinstance(step, (LeafRemoval, UnitBlowDown)):
        return [('child', step.child)]
    return []


def _verify_tree(root) -> VerificationReport:
    """Children before parents, so a bad determinant is reported where it was claimed."""
    checked = 0

    def visit(node, path):
        nonlocal checked
        for label, child in _labelled_children(node):
            failure = visit(child, f"{path}.{label}")
            if failure is not None:
                return failure
        checked += 1
        check = _node_failure if isinstance(node, Certificate) else _generalized_failure
        reason = check(node)
        return None if reason is None else (path, reason)

    failure = visit(root, 'root')
    if failure is not None:
        logger.debug(f"certificate rejected at {failure[0]}: {failure[1]}")
        return VerificationReport(False, failure[0], failure[1], checked)
    return VerificationReport(True, nodes=checked)


def verify_certificate(certificate: Certificate) -> VerificationReport:
    return _verify_tree(certificate)


def _node_failure(node: Certificate) -> Optional[str]:
    graph = node.graph
    if not is_normalized(graph):
        return "graph is not normalized"
    problems = alternating_hypotheses(graph)
    if problems:
        return problems[0]
    actual = linking_determinant(graph)
    if node.det != actual:
        return f"claimed det {node.det}, recomputed {actual}"
    if node.det <= 0:
        return f"det {node.det} is not positive"

    step = node.step
    if isinstance(step, LensBase):
        if graph.edges:
            return "lens base has edges"
        if tuple(step.weights) != tuple(graph.vertices[v] for v in graph.vertex_ids):
            return "lens base weights differ from the graph"
        if any(w <= 0 for w in step.weights):
            return "lens base has a non-positive weight"
        if node.det != prod(step.weights):
            return f"det {node.det} != product of weights {prod(step.weights)}"
        return None

    if isinstance(step, EdgeTriangle):
        if step.edge not in graph.edges:
            return f"unknown edge '{step.edge}'"
        if graph.edges[step.edge].weight != -1 or graph.edges[step.edge].is_loop:
            return f"edge '{step.edge}' is not a -1 edge"
        if step.delete_child.graph != minor(graph, step.edge, MinorKind.DELETE):
            return "delete child is not G - e"
        if step.contract_child.graph != drop_loops(minor(graph, step.edge, MinorKind.CONTRACT)):
            return "contract child is not G / e"
        if node.det != step.delete_child.det + step.contract_child.det:
            return f"{node.det} != {step.delete_child.det} + {step.contract_child.det}"
        return None

    if step.vertex not in graph.vertices:
        return f"unknown vertex '{step.vertex}'"
    if graph.vertices[step.vertex] != 0 or graph.degree(step.vertex) != 1:
        return f"vertex '{step.vertex}' is not a zero-weight leaf"
    if graph.rotations[step.vertex][0].edge != step.edge:
        return f"edge '{step.edge}' is not the leaf edge of '{step.vertex}'"
    if step.child.graph != delete_vertex(graph, step.vertex):
        return "child is not the graph without the leaf"
    if node.det != step.child.det:
        return f"{node.det} != {step.child.det}"
    return None


# -- generalized certificates --------------------------------------------------

def generalized_hypotheses(augmented: AugmentedGraph) -> List[str]:
    """
    The restored graph must satisfy the alternating hypotheses. Erased
    children of coefficient steps are checked again when they are built.
    """
    return alternating_hypotheses(augmented.restored())


def _require_negative_integers(augmented: AugmentedGraph) -> None:
    for edge_id in augmented.augmented_edges:
        coefficient = augmented.coefficients[edge_id]
        if not coefficient.is_integer or coefficient.p > -1:
            raise PreconditionError(
                f"crossing loop '{edge_id}' needs an integer coefficient -c <= -1, got {coefficient}",
                detail={'edge': edge_id, 'coefficient': str(coefficient)},
            )


def _as_augmented(value) -> AugmentedGraph:
    return value if isinstance(value, AugmentedGraph) else AugmentedGraph(value, {})


def _signed_det(augmented: AugmentedGraph) -> int:
    det = determinant(augmented_matrix(augmented).matrix)
    expected = -1 if len(augmented.coefficients) % 2 else 1
    if det == 0 or (det > 0) != (expected > 0):
        raise CertificateError(
            f"sign lemma fails: det {det} with {len(augmented.coefficients)} crossing loops",
            detail={'det': str(det), 'crossing_loops': len(augmented.coefficients)},
        )
    return det


def _shallower(augmented: AugmentedGraph, edge_id: str) -> AugmentedGraph:
    coefficients = dict(augmented.coefficients)
    coefficients[edge_id] = SurgeryCoefficient(coefficients[edge_id].p + 1)
    return augmented.with_coefficients(coefficients)


def _deepest_loop(augmented: AugmentedGraph) -> Optional[str]:
    for edge_id in augmented.augmented_edges:
        if augmented.coefficients[edge_id].p <= -2:
            return edge_id
    return None


def _certify_generalized_node(augmented: AugmentedGraph, budget: _Budget) -> GeneralizedCertificate:
    budget.spend()
    det = _signed_det(augmented)

    if not augmented.coefficients:
        inner = _certify_node(normalize(augmented.base), budget)
        if inner.det != det:
            raise CertificateError(f"chainmail base det {inner.det} != augmented det {det}")
        return GeneralizedCertificate(augmented, det, ChainmailBase(inner))

    edge_id = _deepest_loop(augmented)
    if edge_id is not None:
        erased_graph = _as_augmented(crossing_loop_transform(augmented, edge_id, CrossingAction.ERASE))
        problems = generalized_hypotheses(erased_graph)
        if problems:
            raise HypothesisError(
                f"erasing crossing loop '{edge_id}' leaves the hypotheses unmet: {problems[0]}",
                detail={'edge': edge_id, 'violations': problems},
            )
        shallower = _certify_generalized_node(_shallower(augmented, edge_id), budget)
        erased = _certify_generalized_node(erased_graph, budget)
        if det != shallower.det - erased.det or abs(det) != abs(shallower.det) + abs(erased.det):
            raise CertificateError(
                f"coefficient step on '{edge_id}' fails: {det} vs {shallower.det} and {erased.det}",
                detail={'edge': edge_id},
            )
        return GeneralizedCertificate(augmented, det, CoefficientTriangle(edge_id, shallower, erased))

    edge_id = augmented.augmented_edges[0]
    child = _certify_generalized_node(
        _as_augmented(crossing_loop_transform(augmented, edge_id, CrossingAction.BLOW_DOWN_UNIT)), budget
    )
    if det != -child.det:
        raise CertificateError(f"blow-down of '{edge_id}' fails: {det} != -({child.det})", detail={'edge': edge_id})
    return GeneralizedCertificate(augmented, det, UnitBlowDown(edge_id, child))


def certify_generalized(augmented: AugmentedGraph, max_nodes: Optional[int] = None) -> GeneralizedCertificate:
    _require_negative_integers(augmented)
    _require_hypotheses(generalized_hypotheses(augmented))
    budget = _Budget(max_nodes)
    certificate = _certify_generalized_node(augmented, budget)
    logger.info(
        f"📜 generalized certificate built: det {certificate.det}, "
        f"{len(augmented.coefficients)} crossing loops, {budget.used} nodes"
    )
    return certificate


def verify_generalized_certificate(certificate: GeneralizedCertificate) -> VerificationReport:
    return _verify_tree(certificate)


def _generalized_failure(node: GeneralizedCertificate) -> Optional[str]:
    augmented = node.graph
    try:
        _require_negative_integers(augmented)
    except PreconditionError as exc:
        return exc.message
    problems = generalized_hypotheses(augmented)
    if problems:
        return problems[0]
    actual = determinant(augmented_matrix(augmented).matrix)
    if node.det != actual:
        return f"claimed det {node.det}, recomputed {actual}"
    expected = -1 if len(augmented.coefficients) % 2 else 1
    if node.det == 0 or (node.det > 0) != (expected > 0):
        return f"sign lemma fails: det {node.det} with {len(augmented.coefficients)} crossing loops"

    step = node.step
    if isinstance(step, ChainmailBase):
        if augmented.coefficients:
            return "chainmail base still has crossing loops"
        if step.certificate.graph != normalize(augmented.base):
            return "embedded certificate is not for the normalized base graph"
        if step.certificate.det != node.det:
            return f"{node.det} != embedded certificate det {step.certificate.det}"
        return None

    if step.edge not in augmented.coefficients:
        return f"edge '{step.edge}' carries no crossing loop"
    if isinstance(step, CoefficientTriangle):
        if augmented.coefficients[step.edge].p > -2:
            return f"crossing loop '{step.edge}' has coefficient -1; no coefficient step"
        if step.shallower.graph != _shallower(augmented, step.edge):
            return "shallower child does not lower the coefficient by one"
        erased = _as_augmented(crossing_loop_transform(augmented, step.edge, CrossingAction.ERASE))
        if step.erased.graph != erased:
            return "erased child is not the graph without the crossing loop"
        if node.det != step.shallower.det - step.erased.det:
            return f"{node.det} != {step.shallower.det} - ({step.erased.det})"
        return None

    if augmented.coefficients[step.edge] != SurgeryCoefficient(-1):
        return f"crossing loop '{step.edge}' is not -1"
    blown = _as_augmented(crossing_loop_transform(augmented, step.edge, CrossingAction.BLOW_DOWN_UNIT))
    if step.child.graph != blown:
        return "child is not the blow-down"
    if node.det != -step.child.det:
        return f"{node.det} != -({step.child.det})"
    return None


# -- orientation obstruction ----------------------------------------------------

def orderability_obstruction(graph: ChainmailGraph, cap: Optional[int] = None) -> ObstructionReport:
    """
    Every acyclic orientation has a sink and a source; with at most one
    positive vertex one of them can be taken of weight zero.
    """
    problems = []
    for edge_id in graph.edge_ids:
        edge = graph.edges[edge_id]
        if edge.is_loop:
            problems.append(f"edge '{edge_id}' is a loop")
        elif edge.weight != -1:
            problems.append(f"edge '{edge_id}' has weight {edge.weight}, not -1")
    negative = [v for v in graph.vertex_ids if graph.vertices[v] < 0]
    problems.extend(f"vertex '{v}' has negative weight {graph.vertices[v]}" for v in negative)
    positive = [v for v in graph.vertex_ids if graph.vertices[v] > 0]
    if len(positive) > 1:
        problems.append(f"{len(positive)} positive vertices ({', '.join(positive[:3])}); at most one allowed")
    _require_hypotheses(problems)

    records = []
    for orientation in enumerate_acyclic_orientations(graph, cap=cap):
        sinks = orientation.sinks(graph)
        sources = orientation.sources(graph)
        candidates = natural_sorted(
            v for v in set(sinks) | set(sources) if graph.vertices[v] == 0 and graph.degree(v) >= 1
        )
        records.append(OrientationRecord(
            direction=orientation.direction,
            sinks=tuple(sinks),
            sources=tuple(sources),
            witness=candidates[0] if candidates else None,
        ))
    report = ObstructionReport(len(graph.edges), positive[0] if positive else None, records)
    logger.info(f"🧭 {report.orientation_count} acyclic orientations checked, verdict {report.verdict}")
    return report
