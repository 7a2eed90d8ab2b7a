"""
Seeded random chainmail graphs for the fuzz corpus.

Every draw is a pure function of GeneratorParams: the SplitMix64 stream
picks the vertex count, shuffles candidate vertex pairs and assigns
weights, and edges are inserted one by one, skipping any that would make
the graph non-planar.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from itertools import combinations
from typing import List, Tuple, Union

import networkx as nx

from core.exceptions import InvalidInputError
from core.utils import SplitMix64
from graphs.embedding import planar_rotations
from graphs.minors import delete_edges
from graphs.models import AugmentedGraph, ChainmailGraph, Edge, SurgeryCoefficient

logger = logging.getLogger(__name__)


class Profile(str, Enum):
    THEOREM_ALTERNATING = 'theorem-alternating'
    BALANCED = 'balanced'
    AUGMENTED = 'augmented'
    ARBITRARY = 'arbitrary'


@dataclass(frozen=True)
class GeneratorParams:
    seed: int = 0
    profile: Profile = Profile.THEOREM_ALTERNATING
    vertices: Tuple[int, int] = (1, 6)
    edges: Tuple[int, int] = (0, 10)
    vertex_weights: Tuple[int, int] = (0, 3)
    edge_weights: Tuple[int, int] = (-2, -1)
    coefficients: Tuple[int, int] = (1, 4)

    def errors(self) -> List[str]:
        problems = []
        for name in ('vertices', 'edges', 'vertex_weights', 'edge_weights', 'coefficients'):
            lo, hi = getattr(self, name)
            if lo > hi:
                problems.append(f"{name} range is empty: {lo} > {hi}")
        if self.vertices[0] < 1:
            problems.append("at least one vertex is required")
        if self.edges[0] < 0:
            problems.append("edge counts are non-negative")
        if self.edges[0] > planar_edge_bound(self.vertices[0]):
            problems.append(
                f"edge minimum {self.edges[0]} exceeds the planar bound "
                f"{planar_edge_bound(self.vertices[0])} for {self.vertices[0]} vertices"
            )
        profile = Profile(self.profile)
        if profile in (Profile.THEOREM_ALTERNATING, Profile.BALANCED) and self.edge_weights[1] > -1:
            problems.append(f"profile {profile.value} needs negative edge weights")
        if profile in (Profile.THEOREM_ALTERNATING, Profile.AUGMENTED):
            if self.vertex_weights[0] < 0:
                problems.append(f"profile {profile.value} needs non-negative vertex weights")
            if self.vertex_weights[1] < 1:
                problems.append(f"profile {profile.value} needs room for a positive vertex weight")
        if profile is Profile.AUGMENTED and self.coefficients[0] < 1:
            problems.append("crossing-loop coefficients -c need c >= 1")
        return problems


def planar_edge_bound(vertex_count: int) -> int:
    """Largest edge count of a simple planar graph."""
    if vertex_count <= 2:
        return max(vertex_count - 1, 0)
    return 3 * vertex_count - 6


def _place_edges(rng: SplitMix64, names: List[str], target: int) -> List[Tuple[str, str]]:
    pairs = list(combinations(names, 2))
    rng.shuffle(pairs)
    simple = nx.Graph()
    simple.add_nodes_from(names)
    placed = []
    for u, v in pairs:
        if len(placed) == target:
            break
        simple.add_edge(u, v)
        if nx.check_planarity(simple)[0]:
            placed.append((u, v))
        else:
            simple.remove_edge(u, v)
            logger.debug(f"generator skipped non-planar pair {u}-{v}")
    return placed


def _ensure_positive(rng: SplitMix64, weights: dict, parts, low: int, high: int) -> None:
    for members in parts:
        if not any(weights[v] > 0 for v in members):
            weights[members[0]] = rng.randint(max(1, low), high)


def random_graph(params: GeneratorParams) -> Union[ChainmailGraph, AugmentedGraph]:
    problems = params.errors()
    if problems:
        raise InvalidInputError(f"unsatisfiable generator parameters: {problems[0]}", detail={'violations': problems})

    rng = SplitMix64(params.seed)
    profile = Profile(params.profile)
    count = rng.randint(*params.vertices)
    names = [f"v{i}" for i in range(1, count + 1)]
    target = rng.randint(params.edges[0], min(params.edges[1], planar_edge_bound(count)))
    pairs = _place_edges(rng, names, target)
    if len(pairs) < params.edges[0]:
        raise InvalidInputError(f"could only place {len(pairs)} planar edges, need {params.edges[0]}")

    if profile is Profile.BALANCED:
        weights = {name: 0 for name in names}
    else:
        weights = {name: rng.randint(*params.vertex_weights) for name in names}

    edges = {}
    for number, (u, v) in enumerate(pairs, start=1):
        epsilon = -1 if profile is Profile.AUGMENTED else rng.randint(*params.edge_weights)
        edges[f"e{number}"] = Edge(f"e{number}", (u, v), epsilon)

    coefficients = {}
    if profile is Profile.AUGMENTED:
        for edge_id in edges:
            if rng.chance(1, 2):
                coefficients[edge_id] = SurgeryCoefficient(-rng.randint(*params.coefficients))

    graph = ChainmailGraph(weights, edges, planar_rotations(weights, edges))
    if profile in (Profile.THEOREM_ALTERNATING, Profile.AUGMENTED):
        # components of G - A (a refinement of the components of G)
        kept = delete_edges(graph, coefficients)
        _ensure_positive(rng, weights, kept.components(), *params.vertex_weights)
        graph = ChainmailGraph(weights, edges, graph.rotations)

    if profile is Profile.AUGMENTED:
        return AugmentedGraph(graph, coefficients)
    return graph


def corpus(count: int, params: GeneratorParams = GeneratorParams()) -> List[Union[ChainmailGraph, AugmentedGraph]]:
    """`count` draws with seeds params.seed, params.seed + 1, ..."""
    return [random_graph(replace(params, seed=params.seed + i)) for i in range(count)]
