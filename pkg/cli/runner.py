"""
Command dispatch for `manage.py chainmail`.

Each handler takes the parsed input and the command options and returns a
CommandResult; library errors are turned into error envelopes by `run`.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from core.exceptions import ChainmailError, InvalidInputError
from core.responses import (
    CommandResult, error_response, exception_response, failure_response, success_response,
)
from core.utils import parse_range
from diagrams.services import (
    balanced_cover_check, build_chainmail_pd, diagram_invariants, medial_link_pd,
)
from diagrams.svg import render_svg
from graphs.embedding import validate
from graphs.minors import minor, simplify
from graphs.models import AugmentedGraph, ChainmailGraph, MinorKind
from graphs.properties import graph_properties
from graphs.serializers import graph_summary, graph_to_data
from lspace.models import GeneralizedCertificate
from lspace.serializers import certificate_from_data, certificate_to_data
from lspace.services import (
    alternating_hypotheses, certify, certify_generalized, orderability_obstruction, verify_certificate,
    verify_generalized_certificate,
)
from surgery.models import CrossingAction
from surgery.services import (
    augmented_matrix, dc_check, first_homology, is_rational_homology_sphere, linking_matrix, sign_check,
    surgery_determinant, twist_report,
)

from .generator import GeneratorParams, Profile, random_graph
from .parsing import AnyGraph, canonical_json, load_json, parse_graph_file, read_text

logger = logging.getLogger(__name__)


@dataclass
class RunOptions:
    format: str = 'text'
    edge: Optional[str] = None
    kind: Optional[str] = None
    action: Optional[str] = None
    cap: Optional[int] = None
    medial: bool = False
    cover_check: bool = False
    seed: int = 0
    profile: str = Profile.THEOREM_ALTERNATING.value
    vertices: Optional[str] = None
    edges: Optional[str] = None
    vertex_weights: Optional[str] = None
    edge_weights: Optional[str] = None
    coefficients: Optional[str] = None


def _plain(value: AnyGraph, command: str) -> ChainmailGraph:
    if isinstance(value, AugmentedGraph):
        raise InvalidInputError(f"{command} expects a graph without crossing loops")
    return value


def _augmented(value: AnyGraph) -> AugmentedGraph:
    if isinstance(value, AugmentedGraph):
        return value
    return AugmentedGraph(value, {})


def _require_edge_flag(options: RunOptions, command: str) -> str:
    if not options.edge:
        raise InvalidInputError(f"{command} needs --edge", detail={'flag': 'edge'})
    return options.edge


# -- graph and matrix commands ---------------------------------------------------

def _validate(text: str, options: RunOptions) -> CommandResult:
    value = parse_graph_file(text, check_embedding=False)
    graph = value.base if isinstance(value, AugmentedGraph) else value
    report = validate(graph)
    lines = [
        f"component {', '.join(c.vertices)}: V={c.V} E={c.E} F={c.F} euler={c.euler}"
        for c in report.components
    ]
    lines.extend(f"error: {e}" for e in report.errors)
    if not report.valid:
        result = error_response('invalid sphere embedding', errors=report.as_dict())
        result.text = '\n'.join(lines + ['invalid'])
        return result
    lines.append(f"valid ({graph_summary(value)})")
    return success_response('valid sphere embedding', data=report.as_dict(), text='\n'.join(lines))


def _matrix(value: AnyGraph, options: RunOptions) -> CommandResult:
    if isinstance(value, AugmentedGraph):
        matrix = augmented_matrix(value)
        return success_response('augmented linking matrix', data=matrix.as_dict(), text=matrix.matrix.format())
    matrix = linking_matrix(value)
    return success_response('linking matrix', data=matrix.as_dict(), text=matrix.matrix.format())


def _det(value: AnyGraph, options: RunOptions) -> CommandResult:
    det = surgery_determinant(value)
    return success_response('determinant', data={'det': str(det)}, text=str(det))


def _h1(value: AnyGraph, options: RunOptions) -> CommandResult:
    graph = _plain(value, 'h1')
    group = first_homology(graph)
    data = group.as_dict()
    data['rational_homology_sphere'] = is_rational_homology_sphere(graph)
    return success_response('first homology', data=data, text=str(group))


def _simplify(value: AnyGraph, options: RunOptions) -> CommandResult:
    result = simplify(_plain(value, 'simplify'))
    return success_response('simplified graph', data=graph_to_data(result),
                            text=canonical_json(graph_to_data(result)), raw=True)


def _minor(value: AnyGraph, options: RunOptions) -> CommandResult:
    edge = _require_edge_flag(options, 'minor')
    if options.kind not in [k.value for k in MinorKind]:
        raise InvalidInputError(
            f"minor needs --kind {'|'.join(k.value for k in MinorKind)}", detail={'flag': 'kind'}
        )
    result = minor(_plain(value, 'minor'), edge, MinorKind(options.kind))
    return success_response('minor', data=graph_to_data(result),
                            text=canonical_json(graph_to_data(result)), raw=True)


def _dc_check(value: AnyGraph, options: RunOptions) -> CommandResult:
    report = dc_check(_plain(value, 'dc-check'), _require_edge_flag(options, 'dc-check'))
    if report.holds:
        return success_response('deletion-contraction identity holds', data=report.as_dict(), text=report.text())
    return failure_response('deletion-contraction identity fails', data=report.as_dict(), text=report.text())


# -- certificates ------------------------------------------------------------------

def _certify(value: AnyGraph, options: RunOptions) -> CommandResult:
    certificate = certify(_plain(value, 'certify'))
    data = certificate_to_data(certificate)
    return success_response(f"certificate with det {certificate.det}", data=data,
                            text=canonical_json(data), raw=True)


def _certify_gen(value: AnyGraph, options: RunOptions) -> CommandResult:
    certificate = certify_generalized(_augmented(value))
    data = certificate_to_data(certificate)
    return success_response(f"generalized certificate with det {certificate.det}", data=data,
                            text=canonical_json(data), raw=True)


def _verify(text: str, options: RunOptions) -> CommandResult:
    certificate = certificate_from_data(load_json(text))
    if isinstance(certificate, GeneralizedCertificate):
        report = verify_generalized_certificate(certificate)
    else:
        report = verify_certificate(certificate)
    if report:
        return success_response('certificate verified', data=report.as_dict(), text=report.text())
    return failure_response('certificate rejected', data=report.as_dict(), text=report.text())


def _obstruct(value: AnyGraph, options: RunOptions) -> CommandResult:
    report = orderability_obstruction(_plain(value, 'obstruct'), cap=options.cap)
    if report.verdict:
        return success_response('orientation obstruction holds', data=report.as_dict(), text=report.text())
    return failure_response('orientation obstruction fails', data=report.as_dict(), text=report.text())


def _sign_check(value: AnyGraph, options: RunOptions) -> CommandResult:
    report = sign_check(_augmented(value))
    if report.holds:
        return success_response('determinant sign matches', data=report.as_dict(), text=report.text())
    return failure_response('determinant sign mismatch', data=report.as_dict(), text=report.text())


def _twist(value: AnyGraph, options: RunOptions) -> CommandResult:
    edge = _require_edge_flag(options, 'twist')
    if options.action not in [a.value for a in CrossingAction]:
        raise InvalidInputError(
            f"twist needs --action {'|'.join(a.value for a in CrossingAction)}", detail={'flag': 'action'}
        )
    result, report = twist_report(_augmented(value), edge, CrossingAction(options.action))
    data = report.as_dict()
    data['graph'] = graph_to_data(result)
    return success_response(f"{report.action.value} on {edge}: det {report.det_before} -> {report.det_after}",
                            data=data, text=canonical_json(graph_to_data(result)), raw=True)


def _asym(value: AnyGraph, options: RunOptions) -> CommandResult:
    graph = _plain(value, 'asym')
    report = graph_properties(graph)
    hypotheses = alternating_hypotheses(graph)
    data = report.as_dict()
    data['hypotheses'] = hypotheses
    problems = report.violations + hypotheses
    if not problems:
        return success_response('asymmetry candidate', data=data, text='asymmetry candidate: yes')
    text = '\n'.join(['asymmetry candidate: no'] + [f"- {p}" for p in problems])
    return failure_response('not an asymmetry candidate', data=data, text=text)


# -- diagrams ------------------------------------------------------------------------

def _diagram(value: AnyGraph, options: RunOptions) -> CommandResult:
    pd = build_chainmail_pd(value, with_layout=False)
    invariants = diagram_invariants(pd)
    return success_response('chainmail diagram invariants', data=invariants.as_dict(), text=invariants.text())


def _medial(value: AnyGraph, options: RunOptions) -> CommandResult:
    graph = _plain(value, 'medial')
    if options.cover_check:
        report = balanced_cover_check(graph)
        if report.holds:
            return success_response('cover check holds', data=report.as_dict(), text=report.text())
        return failure_response('cover check fails', data=report.as_dict(), text=report.text())
    invariants = diagram_invariants(medial_link_pd(graph, with_layout=False))
    return success_response('medial link invariants', data=invariants.as_dict(), text=invariants.text())


def _build_pd(value: AnyGraph, options: RunOptions, with_layout: bool):
    if options.medial:
        return medial_link_pd(_plain(value, 'medial'), with_layout=with_layout)
    return build_chainmail_pd(value, with_layout=with_layout)


def _pd(value: AnyGraph, options: RunOptions) -> CommandResult:
    pd = _build_pd(value, options, with_layout=False)
    return success_response('PD code', data=pd.as_dict(), text=pd.text(), raw=True)


def _svg(value: AnyGraph, options: RunOptions) -> CommandResult:
    svg = render_svg(_build_pd(value, options, with_layout=True))
    return success_response('SVG diagram', data={'svg': svg}, text=svg + '\n', raw=True)


# -- generator -------------------------------------------------------------------------

def generator_params(options: RunOptions) -> GeneratorParams:
    defaults = GeneratorParams()
    try:
        profile = Profile(options.profile)
    except ValueError:
        raise InvalidInputError(f"unknown profile '{options.profile}'", detail={'flag': 'profile'})

    def pick(name):
        text = getattr(options, name)
        return getattr(defaults, name) if text is None else parse_range(text, name.replace('_', '-'))

    params = GeneratorParams(
        seed=options.seed,
        profile=profile,
        vertices=pick('vertices'),
        edges=pick('edges'),
        vertex_weights=pick('vertex_weights'),
        edge_weights=pick('edge_weights'),
        coefficients=pick('coefficients'),
    )
    return params


def _random(options: RunOptions) -> CommandResult:
    graph = random_graph(generator_params(options))
    data = graph_to_data(graph)
    return success_response(f"random {options.profile} graph, seed {options.seed}", data=data,
                            text=canonical_json(data), raw=True)


GraphHandler = Callable[[AnyGraph, RunOptions], CommandResult]

GRAPH_COMMANDS: Dict[str, GraphHandler] = {
    'matrix': _matrix,
    'det': _det,
    'h1': _h1,
    'simplify': _simplify,
    'minor': _minor,
    'dc-check': _dc_check,
    'certify': _certify,
    'certify-gen': _certify_gen,
    'obstruct': _obstruct,
    'sign-check': _sign_check,
    'twist': _twist,
    'asym': _asym,
    'diagram': _diagram,
    'medial': _medial,
    'pd': _pd,
    'svg': _svg,
}
TEXT_COMMANDS = {
    'validate': _validate,
    'verify': _verify,
}
COMMANDS = ('validate', *GRAPH_COMMANDS, 'verify', 'random')


def run(command: str, options: RunOptions, path: Optional[str] = None) -> CommandResult:
    """Run one command on one input file (no file for `random`)."""
    try:
        if command == 'random':
            return _random(options)
        if path is None:
            raise InvalidInputError(f"{command} needs an input file")
        text = read_text(path)
        if command in TEXT_COMMANDS:
            return TEXT_COMMANDS[command](text, options)
        if command not in GRAPH_COMMANDS:
            raise InvalidInputError(f"unknown command '{command}'", detail={'command': command})
        return GRAPH_COMMANDS[command](parse_graph_file(text), options)
    except ChainmailError as exc:
        logger.debug(f"{command} {path or ''}: {exc.code}: {exc.message}")
        return exception_response(exc)


def render(result: CommandResult, output_format: str) -> str:
    """stdout text for one result; JSON mode always prints the envelope."""
    if output_format == 'json':
        return canonical_json(result.envelope())
    body = result.text if result.text is not None else result.message
    if result.status != 'success' and result.text is None:
        body = f"error: {result.message}"
    if result.raw or body.endswith('\n'):
        return body
    return body + '\n'
