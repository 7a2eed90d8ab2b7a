"""
Serializers for certificate JSON

Nodes are stored flat in preorder; children are referenced by index and
determinants are decimal strings.
"""
from typing import Any, Dict, List, Union

from rest_framework import serializers

from core.exceptions import InvalidInputError
from graphs.models import AugmentedGraph
from graphs.serializers import first_error, graph_from_data, graph_to_data

from .models import (
    GENERALIZED_KINDS, TRIANGLE_SLOPES, Certificate, ChainmailBase, CoefficientTriangle, EdgeTriangle,
    GeneralizedCertificate, LeafRemoval, LensBase, UnitBlowDown,
)

CERTIFICATE_FORMAT = 'chainmail-certificate'
CERTIFICATE_VERSION = 1

CHILD_COUNTS = {
    'lens-base': 0,
    'edge-triangle': 2,
    'leaf-removal': 1,
    'chainmail-base': 1,
    'coefficient-triangle': 2,
    'unit-blow-down': 1,
}
REQUIRED_FIELDS = {
    'lens-base': ('weights',),
    'edge-triangle': ('edge',),
    'leaf-removal': ('vertex', 'edge'),
    'chainmail-base': (),
    'coefficient-triangle': ('edge',),
    'unit-blow-down': ('edge',),
}


class CertificateNodeSerializer(serializers.Serializer):
    """One certificate node"""

    kind = serializers.ChoiceField(choices=list(CHILD_COUNTS))
    det = serializers.RegexField(r'^-?\d+$', help_text="Determinant as a decimal string")
    graph = serializers.DictField(help_text="chainmail-graph body of the node's graph")
    children = serializers.ListField(child=serializers.IntegerField(min_value=0), required=False, default=list)
    weights = serializers.ListField(child=serializers.IntegerField(), required=False)
    edge = serializers.CharField(max_length=128, required=False)
    vertex = serializers.CharField(max_length=128, required=False)
    slopes = serializers.DictField(child=serializers.CharField(), required=False)

    def validate(self, attrs):
        kind = attrs['kind']
        if len(attrs['children']) != CHILD_COUNTS[kind]:
            raise serializers.ValidationError(
                f"{kind} node needs {CHILD_COUNTS[kind]} children, got {len(attrs['children'])}"
            )
        for name in REQUIRED_FIELDS[kind]:
            if name not in attrs:
                raise serializers.ValidationError({name: f"required for {kind} nodes"})
        return attrs


class CertificateFileSerializer(serializers.Serializer):
    """Validates a chainmail-certificate document"""

    format = serializers.ChoiceField(choices=[CERTIFICATE_FORMAT])
    version = serializers.IntegerField(min_value=CERTIFICATE_VERSION, max_value=CERTIFICATE_VERSION)
    root = serializers.IntegerField(min_value=0)
    nodes = CertificateNodeSerializer(many=True)

    def validate(self, attrs):
        count = len(attrs['nodes'])
        if attrs['root'] >= count:
            raise serializers.ValidationError({'root': f"root index {attrs['root']} out of range"})
        for index, node in enumerate(attrs['nodes']):
            for child in node['children']:
                if child >= count:
                    raise serializers.ValidationError({'nodes': f"node {index} references missing node {child}"})
        return attrs


AnyCertificate = Union[Certificate, GeneralizedCertificate]


def certificate_to_data(certificate: AnyCertificate) -> Dict[str, Any]:
    nodes: List[Dict[str, Any]] = []

    def emit(node) -> int:
        index = len(nodes)
        entry = {'kind': node.kind, 'det': str(node.det), 'graph': graph_to_data(node.graph)}
        nodes.append(entry)
        step = node.step
        if isinstance(step, LensBase):
            entry['weights'] = list(step.weights)
        elif isinstance(step, EdgeTriangle):
            entry['edge'] = step.edge
            entry['slopes'] = dict(step.slopes)
        elif isinstance(step, LeafRemoval):
            entry['vertex'] = step.vertex
            entry['edge'] = step.edge
        elif isinstance(step, (CoefficientTriangle, UnitBlowDown)):
            entry['edge'] = step.edge
        if isinstance(step, ChainmailBase):
            entry['children'] = [emit(step.certificate)]
        else:
            entry['children'] = [emit(child) for child in node.children]
        return index

    root = emit(certificate)
    return {'format': CERTIFICATE_FORMAT, 'version': CERTIFICATE_VERSION, 'root': root, 'nodes': nodes}


def certificate_from_data(data: Dict[str, Any]) -> AnyCertificate:
    serializer = CertificateFileSerializer(data=data)
    if not serializer.is_valid():
        raise InvalidInputError(
            f"invalid certificate: {first_error(serializer.errors)}", detail={'errors': serializer.errors}
        )
    attrs = serializer.validated_data
    nodes = attrs['nodes']
    visited = set()

    def build(index: int) -> AnyCertificate:
        if index in visited:
            raise InvalidInputError(f"certificate node {index} is referenced twice", detail={'node': index})
        visited.add(index)
        node = nodes[index]
        kind = node['kind']
        children = [build(child) for child in node['children']]
        graph = graph_from_data(node['graph'])
        det = int(node['det'])
        generalized = kind in GENERALIZED_KINDS.values()
        if generalized and not isinstance(graph, AugmentedGraph):
            raise InvalidInputError(f"{kind} node {index} needs an augmented graph", detail={'node': index})
        if not generalized and isinstance(graph, AugmentedGraph):
            raise InvalidInputError(f"{kind} node {index} must not carry crossing loops", detail={'node': index})
        if not generalized and any(not isinstance(child, Certificate) for child in children):
            raise InvalidInputError(f"{kind} node {index} must point at chainmail nodes", detail={'node': index})

        if kind == 'lens-base':
            return Certificate(graph, det, LensBase(tuple(node['weights'])))
        if kind == 'edge-triangle':
            slopes = node.get('slopes', TRIANGLE_SLOPES)
            return Certificate(graph, det, EdgeTriangle(node['edge'], children[0], children[1], slopes))
        if kind == 'leaf-removal':
            return Certificate(graph, det, LeafRemoval(node['vertex'], node['edge'], children[0]))
        if kind == 'chainmail-base':
            if not isinstance(children[0], Certificate):
                raise InvalidInputError(f"chainmail-base node {index} must point at a chainmail certificate")
            return GeneralizedCertificate(graph, det, ChainmailBase(children[0]))
        if any(not isinstance(child, GeneralizedCertificate) for child in children):
            raise InvalidInputError(f"{kind} node {index} must point at generalized nodes")
        if kind == 'coefficient-triangle':
            return GeneralizedCertificate(graph, det, CoefficientTriangle(node['edge'], children[0], children[1]))
        return GeneralizedCertificate(graph, det, UnitBlowDown(node['edge'], children[0]))

    return build(attrs['root'])
