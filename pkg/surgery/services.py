"""
Linking matrices, first homology and the determinant identities of
chainmail surgery.
"""
import logging
from typing import List, Sequence, Union

from core.exceptions import HypothesisError, InvalidInputError, PreconditionError
from core.utils import natural_min
from graphs.minors import delete_edges, drop_loops, minor
from graphs.models import AugmentedGraph, ChainmailGraph, Edge, MinorKind, SurgeryCoefficient
from linalg.models import AbelianGroup, IntMatrix
from linalg.services import cokernel, determinant

from .models import (
    AugmentedMatrix, CrossingAction, DCReport, LinkingMatrix, SignReport, SurgeryComponent, TwistReport,
    crossing_label,
)

logger = logging.getLogger(__name__)


def linking_matrix(graph: ChainmailGraph) -> LinkingMatrix:
    labels = graph.vertex_ids
    index = {v: i for i, v in enumerate(labels)}
    rows = [[0] * len(labels) for _ in labels]
    for edge in graph.edges.values():
        if edge.is_loop:
            continue
        i, j = index[edge.ends[0]], index[edge.ends[1]]
        rows[i][j] += edge.weight
        rows[j][i] += edge.weight
    for vertex, i in index.items():
        rows[i][i] = graph.vertices[vertex] - sum(rows[i][k] for k in range(len(labels)) if k != i)
    return LinkingMatrix(IntMatrix.from_rows(rows, labels=labels, symmetric=True, cols=len(labels)))


def linking_determinant(graph: ChainmailGraph) -> int:
    return determinant(linking_matrix(graph).matrix)


def first_homology(graph: ChainmailGraph) -> AbelianGroup:
    return cokernel(linking_matrix(graph).matrix)


def is_rational_homology_sphere(graph: ChainmailGraph) -> bool:
    return linking_determinant(graph) != 0


def balanced_laplacian(graph: ChainmailGraph) -> IntMatrix:
    """Linking matrix with every vertex weight set to 0."""
    balanced = graph.evolve(vertices={v: 0 for v in graph.vertices})
    return linking_matrix(balanced).matrix


def dc_check(graph: ChainmailGraph, edge_id: str) -> DCReport:
    if edge_id not in graph.edges:
        raise InvalidInputError(f"unknown edge id '{edge_id}'", detail={'edge': edge_id})
    edge = graph.edges[edge_id]
    if edge.is_loop:
        raise PreconditionError(f"edge '{edge_id}' is a loop", detail={'edge': edge_id})
    if edge.weight != -1:
        raise PreconditionError(f"edge '{edge_id}' has weight {edge.weight}, not -1", detail={'edge': edge_id})

    report = DCReport(
        edge=edge_id,
        det=linking_determinant(graph),
        deleted=linking_determinant(minor(graph, edge_id, MinorKind.DELETE)),
        contracted=linking_determinant(drop_loops(minor(graph, edge_id, MinorKind.CONTRACT))),
    )
    logger.debug(f"dc-check {edge_id}: {report.text()}")
    return report


# -- augmented links ---------------------------------------------------------

def _require_integer_coefficients(augmented: AugmentedGraph) -> None:
    for edge_id in augmented.augmented_edges:
        coefficient = augmented.coefficients[edge_id]
        if not coefficient.is_integer:
            raise PreconditionError(
                f"coefficient {coefficient} on '{edge_id}' is not an integer; use the rational surgery matrix",
                detail={'edge': edge_id, 'coefficient': str(coefficient)},
            )


def augmented_matrix(augmented: AugmentedGraph) -> AugmentedMatrix:
    _require_integer_coefficients(augmented)
    crossing_edges = augmented.augmented_edges
    vertex_block = linking_matrix(delete_edges(augmented.base, crossing_edges)).matrix
    vertex_labels = vertex_block.row_labels or ()
    offset = len(crossing_edges)
    size = offset + len(vertex_labels)

    rows = [[0] * size for _ in range(size)]
    for i in range(len(vertex_labels)):
        for j in range(len(vertex_labels)):
            rows[offset + i][offset + j] = vertex_block[i, j]
    for k, edge_id in enumerate(crossing_edges):
        edge = augmented.base.edges[edge_id]
        low = natural_min(edge.ends)
        high = edge.other(low)
        rows[k][k] = augmented.coefficients[edge_id].p
        for vertex, sign in ((low, 1), (high, -1)):
            column = offset + vertex_labels.index(vertex)
            rows[k][column] = sign
            rows[column][k] = sign

    labels = [crossing_label(e) for e in crossing_edges] + list(vertex_labels)
    matrix = IntMatrix.from_rows(rows, labels=labels, symmetric=True, cols=size)
    return AugmentedMatrix(matrix, tuple(crossing_edges), tuple(vertex_labels))


def augmented_surgery_components(augmented: AugmentedGraph) -> List[SurgeryComponent]:
    """
    Framed components of the augmented link: vertex circles with integer
    framings, then the crossing loops. Loops with coefficient inf are erased.
    """
    crossing_edges = [e for e in augmented.augmented_edges if not augmented.coefficients[e].is_infinite]
    vertex_block = linking_matrix(delete_edges(augmented.base, augmented.augmented_edges)).matrix
    vertex_labels = list(vertex_block.row_labels or ())
    count = len(vertex_labels) + len(crossing_edges)

    linking = [[0] * count for _ in range(count)]
    for i in range(len(vertex_labels)):
        for j in range(len(vertex_labels)):
            linking[i][j] = vertex_block[i, j]
    for k, edge_id in enumerate(crossing_edges):
        edge = augmented.base.edges[edge_id]
        low = natural_min(edge.ends)
        row = len(vertex_labels) + k
        for vertex, sign in ((low, 1), (edge.other(low), -1)):
            column = vertex_labels.index(vertex)
            linking[row][column] = sign
            linking[column][row] = sign

    components = [
        SurgeryComponent(v, SurgeryCoefficient(vertex_block[i, i]), tuple(linking[i]))
        for i, v in enumerate(vertex_labels)
    ]
    components.extend(
        SurgeryComponent(crossing_label(e), augmented.coefficients[e], tuple(linking[len(vertex_labels) + k]))
        for k, e in enumerate(crossing_edges)
    )
    return components


def rational_surgery_matrix(components: Sequence[SurgeryComponent]) -> IntMatrix:
    """
    Presentation matrix of H1 for rational surgery: p_i on the diagonal,
    q_i * lk(L_i, L_j) off it.
    """
    rows = []
    for i, component in enumerate(components):
        coefficient = component.coefficient
        if coefficient.is_infinite:
            raise PreconditionError(
                f"component '{component.label}' has coefficient inf; erase it first",
                detail={'component': component.label},
            )
        if len(component.linking) != len(components):
            raise InvalidInputError(
                f"component '{component.label}' has {len(component.linking)} linking numbers for "
                f"{len(components)} components"
            )
        rows.append([
            coefficient.p if i == j else coefficient.q * lk
            for j, lk in enumerate(component.linking)
        ])
    return IntMatrix.from_rows(rows, labels=[c.label for c in components], cols=len(components))


def surgery_determinant(value: Union[ChainmailGraph, AugmentedGraph]) -> int:
    """det of the presentation matrix: Lambda(G), or the rational matrix of an augmented link."""
    if isinstance(value, AugmentedGraph):
        return determinant(rational_surgery_matrix(augmented_surgery_components(value)))
    return linking_determinant(value)


def crossing_loop_transform(augmented: AugmentedGraph, edge_id: str,
                            action: CrossingAction) -> Union[ChainmailGraph, AugmentedGraph]:
    action = CrossingAction(action)
    if edge_id not in augmented.base.edges:
        raise InvalidInputError(f"unknown edge id '{edge_id}'", detail={'edge': edge_id})
    if edge_id not in augmented.coefficients:
        raise PreconditionError(f"edge '{edge_id}' carries no crossing loop", detail={'edge': edge_id})

    coefficient = augmented.coefficients[edge_id]
    remaining = {e: c for e, c in augmented.coefficients.items() if e != edge_id}
    base = augmented.base

    if action is CrossingAction.ROLFSEN_TWIST:
        if coefficient.is_infinite or coefficient.p != -1:
            raise PreconditionError(
                f"Rolfsen twist needs coefficient -1/n, '{edge_id}' has {coefficient}",
                detail={'edge': edge_id, 'coefficient': str(coefficient)},
            )
        edges = dict(base.edges)
        edges[edge_id] = Edge(edge_id, edges[edge_id].ends, -coefficient.q)
        base = base.evolve(edges=edges)
    elif action is CrossingAction.BLOW_DOWN_UNIT:
        if coefficient != SurgeryCoefficient(-1):
            raise PreconditionError(
                f"unit blow-down needs coefficient -1, '{edge_id}' has {coefficient}",
                detail={'edge': edge_id, 'coefficient': str(coefficient)},
            )
    else:
        base = delete_edges(base, [edge_id])

    logger.debug(f"crossing loop {edge_id} ({coefficient}): {action.value}")
    if remaining:
        return AugmentedGraph(base, remaining)
    return base


def twist_report(augmented: AugmentedGraph, edge_id: str, action: CrossingAction):
    """Apply a crossing-loop transform and report |H1| presentations before and after."""
    result = crossing_loop_transform(augmented, edge_id, action)
    before = surgery_determinant(augmented)
    return result, TwistReport(edge_id, CrossingAction(action), before, surgery_determinant(result))


def sign_check(augmented: AugmentedGraph) -> SignReport:
    """
    det of the augmented matrix has sign (-1)^|V_c| unless it vanishes.
    """
    _require_integer_coefficients(augmented)
    negative = [v for v in augmented.base.vertex_ids if augmented.base.vertices[v] < 0]
    if negative:
        raise HypothesisError(
            f"vertex '{negative[0]}' has negative weight {augmented.base.vertices[negative[0]]}",
            detail={'vertex': negative[0]},
        )
    matrix = augmented_matrix(augmented)
    return SignReport(determinant(matrix.matrix), matrix.crossing_count)
