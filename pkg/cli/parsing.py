"""
Reading and writing the CLI's files: .cmg.json graph files and certificate
JSON. Syntax errors keep the JSON decoder's line and column.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from core.exceptions import GraphFileSyntaxError, InvalidInputError
from graphs.models import AugmentedGraph, ChainmailGraph
from graphs.serializers import graph_from_data, graph_to_data

logger = logging.getLogger(__name__)

AnyGraph = Union[ChainmailGraph, AugmentedGraph]


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + '\n'


def load_json(text: str) -> Dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileSyntaxError(exc.msg, exc.lineno, exc.colno)
    if not isinstance(data, dict):
        raise InvalidInputError(f"expected a JSON object at the top level, got {type(data).__name__}")
    return data


def parse_graph_file(text: str, check_embedding: bool = True) -> AnyGraph:
    return graph_from_data(load_json(text), check_embedding=check_embedding)


def serialize_graph(value: AnyGraph) -> str:
    return canonical_json(graph_to_data(value))


def read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except FileNotFoundError:
        raise InvalidInputError(f"no such file: {path}", detail={'path': str(path)})
    except (OSError, UnicodeDecodeError) as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}", detail={'path': str(path)})


def read_graph_file(path: Union[str, Path], check_embedding: bool = True) -> AnyGraph:
    graph = parse_graph_file(read_text(path), check_embedding=check_embedding)
    logger.info(f"📜 Parsed {path}")
    return graph
