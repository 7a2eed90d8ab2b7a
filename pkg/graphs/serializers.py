"""
Serializers for chainmail graph files

Handles validation of the `chainmail-graph` JSON document and conversion
to and from ChainmailGraph / AugmentedGraph values.
"""
from typing import Any, Dict, Union

from rest_framework import serializers

from core.exceptions import InvalidInputError
from core.utils import natural_key, natural_sorted

from .embedding import planar_rotations, validate
from .models import AugmentedGraph, ChainmailGraph, Dart, Edge, SurgeryCoefficient

GRAPH_FORMAT = 'chainmail-graph'
GRAPH_VERSION = 1


class VertexSerializer(serializers.Serializer):
    """One vertex entry"""

    id = serializers.CharField(max_length=128, help_text="Vertex id, unique within the file")
    weight = serializers.IntegerField(help_text="Vertex weight nu(v)")


class EdgeSerializer(serializers.Serializer):
    """One edge entry"""

    id = serializers.CharField(max_length=128, help_text="Edge id, unique within the file")
    ends = serializers.ListField(
        child=serializers.CharField(max_length=128),
        min_length=2,
        max_length=2,
        help_text="The two endpoint vertex ids; equal ids make a loop",
    )
    weight = serializers.IntegerField(help_text="Edge weight epsilon(e)")


class GraphFileSerializer(serializers.Serializer):
    """Validates a chainmail-graph document"""

    format = serializers.ChoiceField(choices=[GRAPH_FORMAT])
    version = serializers.IntegerField(min_value=GRAPH_VERSION, max_value=GRAPH_VERSION)
    vertices = VertexSerializer(many=True)
    edges = EdgeSerializer(many=True, required=False, default=list)
    rotations = serializers.DictField(
        child=serializers.ListField(child=serializers.CharField()),
        required=False,
        help_text="vertex id -> counterclockwise list of 'edgeId.end' darts",
    )
    augmented = serializers.DictField(
        child=serializers.CharField(),
        required=False,
        help_text="edge id -> crossing-loop coefficient: '-2', '-1/3' or 'inf'",
    )

    def validate(self, attrs):
        vertex_ids = set()
        for vertex in attrs['vertices']:
            if vertex['id'] in vertex_ids:
                raise serializers.ValidationError({'vertices': f"duplicate vertex id '{vertex['id']}'"})
            vertex_ids.add(vertex['id'])

        edge_ids = set()
        for edge in attrs.get('edges', []):
            if edge['id'] in edge_ids:
                raise serializers.ValidationError({'edges': f"duplicate edge id '{edge['id']}'"})
            edge_ids.add(edge['id'])
            for end in edge['ends']:
                if end not in vertex_ids:
                    raise serializers.ValidationError(
                        {'edges': f"edge '{edge['id']}' references unknown vertex '{end}'"}
                    )

        for vertex, darts in attrs.get('rotations', {}).items():
            if vertex not in vertex_ids:
                raise serializers.ValidationError({'rotations': f"rotation for unknown vertex '{vertex}'"})
            for text in darts:
                try:
                    dart = Dart.parse(text)
                except InvalidInputError as exc:
                    raise serializers.ValidationError({'rotations': exc.message})
                if dart.edge not in edge_ids:
                    raise serializers.ValidationError(
                        {'rotations': f"vertex '{vertex}': dart '{text}' references unknown edge '{dart.edge}'"}
                    )

        coefficients = {}
        for edge_id, text in attrs.get('augmented', {}).items():
            if edge_id not in edge_ids:
                raise serializers.ValidationError({'augmented': f"augmented edge '{edge_id}' is not an edge"})
            try:
                coefficients[edge_id] = SurgeryCoefficient.parse(text)
            except InvalidInputError as exc:
                raise serializers.ValidationError({'augmented': f"edge '{edge_id}': {exc.message}"})
        attrs['coefficients'] = coefficients
        return attrs


def first_error(errors) -> str:
    """Flatten DRF's nested error structure down to one readable message."""
    if isinstance(errors, dict):
        for key, value in errors.items():
            inner = first_error(value)
            return inner if key == 'non_field_errors' else f"{key}: {inner}"
    if isinstance(errors, (list, tuple)):
        for value in errors:
            if value:
                return first_error(value)
    return str(errors)


def graph_from_data(data: Dict[str, Any], check_embedding: bool = True) -> Union[ChainmailGraph, AugmentedGraph]:
    serializer = GraphFileSerializer(data=data)
    if not serializer.is_valid():
        raise InvalidInputError(f"invalid graph file: {first_error(serializer.errors)}", detail={'errors': serializer.errors})
    attrs = serializer.validated_data

    vertices = {v['id']: v['weight'] for v in attrs['vertices']}
    edges = {e['id']: Edge(e['id'], (e['ends'][0], e['ends'][1]), e['weight']) for e in attrs['edges']}
    if 'rotations' in attrs:
        rotations = {v: [Dart.parse(text) for text in darts] for v, darts in attrs['rotations'].items()}
    else:
        rotations = planar_rotations(vertices, edges)
    graph = ChainmailGraph(vertices, edges, rotations)

    if check_embedding:
        report = validate(graph)
        if not report.valid:
            reason = report.errors[0] if report.errors else 'some component has Euler characteristic != 2'
            raise InvalidInputError(f"invalid sphere embedding: {reason}", detail=report.as_dict())

    if 'augmented' in attrs:
        return AugmentedGraph(graph, attrs['coefficients'])
    return graph


def graph_to_data(value: Union[ChainmailGraph, AugmentedGraph]) -> Dict[str, Any]:
    graph = value.base if isinstance(value, AugmentedGraph) else value
    data = {
        'format': GRAPH_FORMAT,
        'version': GRAPH_VERSION,
        'vertices': [{'id': v, 'weight': graph.vertices[v]} for v in graph.vertex_ids],
        'edges': [
            {'id': e, 'ends': list(graph.edges[e].ends), 'weight': graph.edges[e].weight}
            for e in graph.edge_ids
        ],
        'rotations': {v: [str(d) for d in graph.rotations[v]] for v in graph.vertex_ids},
    }
    if isinstance(value, AugmentedGraph):
        data['augmented'] = {
            e: str(value.coefficients[e])
            for e in sorted(value.coefficients, key=natural_key)
        }
    return data


def graph_summary(value: Union[ChainmailGraph, AugmentedGraph]) -> str:
    graph = value.base if isinstance(value, AugmentedGraph) else value
    text = f"{len(graph.vertices)} vertices, {len(graph.edges)} edges"
    if isinstance(value, AugmentedGraph):
        text += f", crossing loops on {', '.join(natural_sorted(value.coefficients)) or 'none'}"
    return text
