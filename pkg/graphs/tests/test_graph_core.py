from django.test import SimpleTestCase

from cli.generator import GeneratorParams, Profile, corpus
from core.exceptions import CapExceededError, InvalidInputError, PreconditionError
from graphs.embedding import planar_rotations, trace_faces, validate
from graphs.minors import apply_move, minor, normalize, simplify, split_parallel
from graphs.models import (
    ChainmailGraph, Dart, Edge, EraseLoop, EraseZeroEdge, MergeParallel, MinorKind, RemoveUnitLeaf,
)
from graphs.properties import (
    bridges, count_weighted_spanning_trees, enumerate_acyclic_orientations, graph_properties,
)

from .builders import cube, edge_graph, k5_sorted_rotation, path, single_loop, single_vertex, triangle


class ValidateTests(SimpleTestCase):

    def test_empty_graph_is_valid_with_no_components(self):
        report = validate(ChainmailGraph({}, {}, {}))
        self.assertTrue(report.valid)
        self.assertEqual(report.components, [])

    def test_single_loop_is_a_sphere(self):
        report = validate(single_loop())
        self.assertTrue(report.valid)
        component = report.components[0]
        self.assertEqual((component.V, component.E, component.F, component.euler), (1, 1, 2, 2))

    def test_isolated_vertex_counts_one_face(self):
        component = validate(single_vertex(4)).components[0]
        self.assertEqual((component.V, component.E, component.F), (1, 0, 1))

    def test_k5_rotation_has_lower_euler_characteristic(self):
        report = validate(k5_sorted_rotation())
        self.assertFalse(report.valid)
        self.assertLess(report.components[0].euler, 2)

    def test_missing_dart_is_reported_with_vertex(self):
        graph = ChainmailGraph(
            {'a': 0, 'b': 0},
            {'e1': Edge('e1', ('a', 'b'), -1)},
            {'a': [Dart('e1', 0)], 'b': []},
        )
        report = validate(graph)
        self.assertFalse(report.valid)
        self.assertIn("vertex 'b'", report.errors[0])

    def test_duplicated_dart_is_reported(self):
        graph = ChainmailGraph(
            {'a': 0, 'b': 0},
            {'e1': Edge('e1', ('a', 'b'), -1)},
            {'a': [Dart('e1', 0), Dart('e1', 0)], 'b': [Dart('e1', 1)]},
        )
        self.assertTrue(any('appears 2 times' in error for error in validate(graph).errors))

    def test_planar_rotations_reject_k5(self):
        graph = k5_sorted_rotation()
        with self.assertRaises(InvalidInputError):
            planar_rotations(graph.vertices, graph.edges)

    def test_computed_embeddings_are_spheres(self):
        params = GeneratorParams(seed=11, profile=Profile.ARBITRARY, vertices=(1, 8), edges=(0, 14),
                                 vertex_weights=(-2, 2), edge_weights=(-2, 2))
        for graph in corpus(60, params):
            self.assertTrue(validate(graph).valid)

    def test_triangle_has_two_faces(self):
        self.assertEqual(len(trace_faces(triangle())), 2)


class MinorTests(SimpleTestCase):

    def test_contract_sums_weights(self):
        contracted = minor(edge_graph(1, 2), 'e1', MinorKind.CONTRACT)
        self.assertEqual(dict(contracted.vertices), {'a': 3})
        self.assertEqual(len(contracted.edges), 0)

    def test_contract_triangle_edge_gives_double_edge(self):
        contracted = minor(triangle(), 'e2', MinorKind.CONTRACT)
        self.assertEqual(len(contracted.vertices), 2)
        self.assertEqual(len(contracted.edges_between('a', 'b')), 2)
        self.assertTrue(all(edge.weight == -1 for edge in contracted.edges.values()))

    def test_contract_loop_is_rejected(self):
        with self.assertRaises(PreconditionError):
            minor(single_loop(), 'e1', MinorKind.CONTRACT)

    def test_unknown_edge_is_rejected(self):
        with self.assertRaises(InvalidInputError):
            minor(triangle(), 'e9', MinorKind.DELETE)

    def test_contracting_a_parallel_edge_leaves_a_loop(self):
        doubled = split_parallel(edge_graph(1, 1, -2))
        contracted = minor(doubled, 'e1', MinorKind.CONTRACT)
        self.assertEqual(contracted.loops(), ['e1~1'])

    def test_minors_preserve_sphere_embeddings(self):
        params = GeneratorParams(seed=5, profile=Profile.ARBITRARY, vertices=(2, 8), edges=(1, 14),
                                 vertex_weights=(-2, 2), edge_weights=(-3, 3))
        for graph in corpus(80, params):
            doubled = split_parallel(graph)
            for edge_id in doubled.edge_ids:
                self.assertTrue(validate(minor(doubled, edge_id, MinorKind.DELETE)).valid)
                if not doubled.edges[edge_id].is_loop:
                    self.assertTrue(validate(minor(doubled, edge_id, MinorKind.CONTRACT)).valid)


class MoveTests(SimpleTestCase):

    def test_merge_parallel_sums_weights(self):
        graph = ChainmailGraph.build({'a': 0, 'b': 0}, [('e1', 'a', 'b', -1), ('e2', 'a', 'b', -2)])
        merged = apply_move(graph, MergeParallel('e1', 'e2'))
        self.assertEqual(list(merged.edges), ['e1'])
        self.assertEqual(merged.edges['e1'].weight, -3)

    def test_remove_unit_leaf(self):
        removed = apply_move(path([1, 0, 0]), RemoveUnitLeaf('c', 'e2'))
        self.assertEqual(dict(removed.vertices), {'a': 1, 'b': 0})
        self.assertEqual(list(removed.edges), ['e1'])

    def test_erase_loop(self):
        graph = ChainmailGraph(
            {'a': 1, 'b': 1},
            {'e1': Edge('e1', ('a', 'b'), -1), 'e2': Edge('e2', ('a', 'a'), -1)},
            {'a': [Dart('e1', 0), Dart('e2', 0), Dart('e2', 1)], 'b': [Dart('e1', 1)]},
        )
        self.assertEqual(apply_move(graph, EraseLoop('e2')), edge_graph(1, 1))

    def test_preconditions_name_the_failure(self):
        with self.assertRaisesMessage(PreconditionError, 'not 0'):
            apply_move(edge_graph(), EraseZeroEdge('e1'))
        with self.assertRaisesMessage(PreconditionError, 'is not a loop'):
            apply_move(edge_graph(), EraseLoop('e1'))
        with self.assertRaisesMessage(PreconditionError, 'weight 1, not 0'):
            apply_move(path([1, 0, 1]), RemoveUnitLeaf('c', 'e2'))
        with self.assertRaisesMessage(PreconditionError, 'do not share both endpoints'):
            apply_move(path([1, 0, 0]), MergeParallel('e1', 'e2'))


class SimplifyTests(SimpleTestCase):

    def test_zero_edge_is_erased(self):
        simplified = simplify(edge_graph(1, 1, 0))
        self.assertEqual(len(simplified.edges), 0)
        self.assertEqual(len(simplified.vertices), 2)

    def test_leaf_chain_collapses(self):
        simplified = simplify(path([1, 0, 0]))
        self.assertEqual(dict(simplified.vertices), {'a': 1})

    def test_fixpoint_is_unchanged(self):
        graph = triangle((1, 1, 1))
        self.assertEqual(simplify(graph), graph)

    def test_idempotent_on_corpus(self):
        params = GeneratorParams(seed=3, profile=Profile.ARBITRARY, vertices=(1, 7), edges=(0, 10),
                                 vertex_weights=(-1, 1), edge_weights=(-2, 2))
        for graph in corpus(100, params):
            once = simplify(split_parallel(graph))
            self.assertEqual(simplify(once), once)


class NormalizeTests(SimpleTestCase):

    def test_triple_edge_is_split(self):
        normalized = normalize(edge_graph(1, 1, -3))
        self.assertEqual(normalized.edge_ids, ['e1', 'e1~1', 'e1~2'])
        self.assertEqual(normalized.rotations['a'], (Dart('e1', 0), Dart('e1~1', 0), Dart('e1~2', 0)))
        self.assertEqual(normalized.rotations['b'], (Dart('e1~2', 1), Dart('e1~1', 1), Dart('e1', 1)))
        self.assertTrue(validate(normalized).valid)

    def test_copies_never_reuse_an_existing_edge_id(self):
        graph = ChainmailGraph.build({'a': 1, 'b': 1, 'c': 1}, [('e1', 'a', 'b', -3), ('e1~1', 'b', 'c', -1)])
        normalized = normalize(graph)
        self.assertEqual(len(normalized.edges), 4)
        self.assertEqual(normalized.edges['e1~1'].ends, ('b', 'c'))
        self.assertEqual(sorted(e for e, edge in normalized.edges.items() if edge.ends == ('a', 'b')),
                         ['e1', "e1~1'", 'e1~2'])
        self.assertTrue(validate(normalized).valid)

    def test_already_normal_is_identity(self):
        self.assertEqual(normalize(triangle()), triangle())

    def test_zero_weight_is_rejected(self):
        with self.assertRaises(PreconditionError):
            normalize(edge_graph(1, 1, 0))

    def test_loops_are_dropped(self):
        self.assertEqual(len(normalize(single_loop()).edges), 0)


class PropertyTests(SimpleTestCase):

    def test_triangle_is_not_an_asymmetry_candidate(self):
        report = graph_properties(triangle())
        self.assertTrue(report.bridge_free)
        self.assertFalse(report.triangle_free)
        self.assertFalse(report.asymmetry_candidate)
        self.assertTrue(any(v.startswith('triangle') for v in report.violations))

    def test_path_edges_are_bridges(self):
        report = graph_properties(path([0, 0, 0]))
        self.assertEqual(report.bridges, ['e1', 'e2'])
        self.assertEqual(report.leaves, ['a', 'c'])
        self.assertFalse(report.asymmetry_candidate)
        self.assertTrue(any('degree-2' in v for v in report.violations))
        self.assertTrue(any('bridge' in v for v in report.violations))

    def test_cube_is_an_asymmetry_candidate(self):
        report = graph_properties(cube())
        self.assertTrue(report.simplicial)
        self.assertTrue(report.triangle_free)
        self.assertTrue(report.min_degree_at_least_3)
        self.assertTrue(report.bridge_free)
        self.assertTrue(report.asymmetry_candidate)

    def test_parallel_edges_are_not_bridges(self):
        self.assertEqual(bridges(split_parallel(edge_graph(1, 1, -2))), [])


class OrientationTests(SimpleTestCase):

    def test_single_edge(self):
        orientations = enumerate_acyclic_orientations(edge_graph())
        self.assertEqual([dict(o.direction) for o in orientations], [{'e1': 'a'}, {'e1': 'b'}])

    def test_triangle_has_six(self):
        self.assertEqual(len(enumerate_acyclic_orientations(triangle())), 6)

    def test_edgeless_graph_has_the_empty_orientation(self):
        orientations = enumerate_acyclic_orientations(single_vertex())
        self.assertEqual(len(orientations), 1)
        self.assertEqual(dict(orientations[0].direction), {})

    def test_cap_and_loops(self):
        with self.assertRaises(CapExceededError):
            enumerate_acyclic_orientations(cube(), cap=5)
        with self.assertRaises(PreconditionError):
            enumerate_acyclic_orientations(single_loop())

    def test_every_orientation_has_a_sink_and_a_source(self):
        params = GeneratorParams(seed=21, profile=Profile.ARBITRARY, vertices=(2, 7), edges=(1, 10),
                                 vertex_weights=(0, 0), edge_weights=(-1, -1))
        for graph in corpus(40, params):
            doubled = split_parallel(graph)
            for orientation in enumerate_acyclic_orientations(doubled):
                self.assertTrue(orientation.sinks(doubled))
                self.assertTrue(orientation.sources(doubled))


class SpanningTreeTests(SimpleTestCase):

    def test_weighted_single_edge(self):
        self.assertEqual(count_weighted_spanning_trees(edge_graph(0, 0, -2)), 2)

    def test_triangle(self):
        self.assertEqual(count_weighted_spanning_trees(triangle()), 3)

    def test_tree_is_product_of_weights(self):
        graph = ChainmailGraph.build({'a': 0, 'b': 0, 'c': 0}, [('e1', 'a', 'b', -2), ('e2', 'b', 'c', -3)])
        self.assertEqual(count_weighted_spanning_trees(graph), 6)

    def test_disconnected_is_rejected(self):
        with self.assertRaises(PreconditionError):
            count_weighted_spanning_trees(edge_graph(0, 0, -1).evolve(
                vertices={'a': 0, 'b': 0, 'z': 0}))
