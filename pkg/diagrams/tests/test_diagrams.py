import xml.etree.ElementTree as ET

from django.test import SimpleTestCase, override_settings

from cli.generator import GeneratorParams, Profile, corpus
from core.exceptions import InvalidInputError, PreconditionError
from diagrams.models import ComponentKind, Crossing
from diagrams.services import (
    balanced_cover_check, build_chainmail_pd, diagram_invariants, medial_link_pd, parse_pd_text,
)
from diagrams.svg import render_svg
from graphs.minors import delete_edges
from graphs.models import AugmentedGraph, ChainmailGraph, SurgeryCoefficient
from graphs.properties import count_weighted_spanning_trees
from graphs.tests.builders import cube, edge_graph, k5_sorted_rotation, path, single_loop, single_vertex, triangle
from linalg.services import determinant
from surgery.services import balanced_laplacian, linking_matrix

SVG = '{http://www.w3.org/2000/svg}'

NEGATIVE = GeneratorParams(seed=4000, profile=Profile.THEOREM_ALTERNATING, vertices=(1, 7), edges=(0, 10),
                           edge_weights=(-2, -1))
MIXED = GeneratorParams(seed=4100, profile=Profile.ARBITRARY, vertices=(2, 6), edges=(1, 8),
                        vertex_weights=(-1, 2), edge_weights=(-2, 2))
BALANCED = GeneratorParams(seed=4200, profile=Profile.BALANCED, vertices=(1, 7), edges=(0, 11),
                           edge_weights=(-2, -1))


def clasp_components(graph):
    idle = [e for e, edge in graph.edges.items() if edge.is_loop or edge.weight == 0]
    return len(delete_edges(graph, idle).components())


def svg_tree(text):
    return ET.fromstring(text)


def gaps(root):
    return [g for g in root.iter(f'{SVG}g') if g.get('class') == 'crossing-gap']


class ChainmailDiagramTests(SimpleTestCase):

    def test_single_vertex_is_an_unknot(self):
        pd = build_chainmail_pd(single_vertex(3))
        self.assertEqual(pd.crossing_count, 0)
        self.assertEqual(len(pd.components), 1)
        self.assertEqual(pd.components[0].kind, ComponentKind.VERTEX)
        invariants = diagram_invariants(pd)
        self.assertEqual((invariants.seifert_circles, invariants.seifert_euler), (1, 1))
        self.assertEqual(invariants.goeritz_det, 1)
        self.assertEqual(invariants.seifert_genus, 0)

    def test_negative_hopf_link(self):
        pd = build_chainmail_pd(edge_graph(1, 1))
        self.assertEqual(
            pd.text(),
            "pd chainmail\ncomponent a vertex 1 2\ncomponent b vertex 3 4\nX[2,3,1,4]-\nX[4,1,3,2]-\n",
        )
        invariants = diagram_invariants(pd)
        self.assertEqual(invariants.crossing_count, 2)
        self.assertEqual(invariants.writhe, -2)
        self.assertEqual(invariants.lk, [[0, -1], [-1, 0]])
        self.assertTrue(invariants.alternating)
        self.assertEqual((invariants.seifert_circles, invariants.seifert_euler), (2, 0))
        self.assertEqual(invariants.goeritz_det, 2)
        self.assertEqual(invariants.seifert_genus, 0)

    def test_double_clasp(self):
        invariants = diagram_invariants(build_chainmail_pd(edge_graph(1, 1, -2)))
        self.assertEqual(invariants.crossing_count, 4)
        self.assertEqual(invariants.lk_between('a', 'b'), -2)
        self.assertEqual(invariants.seifert_circles, 4)
        self.assertTrue(invariants.alternating)

    def test_a_cycle_of_clasps_has_more_seifert_circles_than_vertices(self):
        invariants = diagram_invariants(build_chainmail_pd(triangle()))
        self.assertEqual(invariants.crossing_count, 6)
        self.assertEqual(invariants.seifert_circles, 5)

    def test_positive_clasp(self):
        pd = build_chainmail_pd(edge_graph(1, 1, 1))
        self.assertTrue(all(crossing.sign == 1 for crossing in pd.crossings))
        invariants = diagram_invariants(pd)
        self.assertEqual(invariants.lk_between('a', 'b'), 1)
        self.assertTrue(invariants.alternating)

    def test_mixed_signs_at_a_vertex_do_not_alternate(self):
        graph = ChainmailGraph.build({'a': 1, 'b': 1, 'c': 1}, [('e1', 'a', 'b', -1), ('e2', 'b', 'c', 1)])
        invariants = diagram_invariants(build_chainmail_pd(graph))
        self.assertFalse(invariants.alternating)
        self.assertEqual(invariants.lk_between('b', 'c'), 1)

    def test_loops_and_zero_edges_add_no_crossings(self):
        self.assertEqual(build_chainmail_pd(single_loop()).crossing_count, 0)
        invariants = diagram_invariants(build_chainmail_pd(edge_graph(1, 1, 0)))
        self.assertEqual(invariants.crossing_count, 0)
        self.assertTrue(invariants.split)
        self.assertEqual(invariants.goeritz_det, 0)
        self.assertIsNone(invariants.seifert_genus)

    def test_invalid_embedding(self):
        with self.assertRaises(InvalidInputError):
            build_chainmail_pd(k5_sorted_rotation())

    def test_matches_the_linking_matrix_on_corpus(self):
        for graph in corpus(150, NEGATIVE):
            pd = build_chainmail_pd(graph, with_layout=False)
            invariants = diagram_invariants(pd)
            matrix = linking_matrix(graph).matrix
            size = len(graph.vertex_ids)
            for i in range(size):
                for j in range(size):
                    if i != j:
                        self.assertEqual(invariants.lk[i][j], matrix[i, j])
            total = graph.total_weight()
            self.assertEqual(invariants.crossing_count, 2 * total)
            self.assertEqual(invariants.crossing_count, sum(abs(x) for row in invariants.lk for x in row))
            self.assertTrue(invariants.alternating)
            self.assertTrue(all(crossing.sign == -1 for crossing in pd.crossings))
            components = clasp_components(graph)
            self.assertEqual(invariants.seifert_circles, 2 * total - size + 2 * components)
            self.assertEqual(invariants.seifert_euler, 2 * components - size)

    def test_forests_have_one_seifert_circle_per_vertex(self):
        forests = 0
        for graph in corpus(200, NEGATIVE):
            simple = all(abs(edge.weight) == 1 for edge in graph.edges.values())
            if not simple or len(graph.edges) != len(graph.vertices) - len(graph.components()):
                continue
            forests += 1
            invariants = diagram_invariants(build_chainmail_pd(graph, with_layout=False))
            self.assertEqual(invariants.seifert_circles, len(graph.vertices))
            self.assertEqual(invariants.seifert_euler, len(graph.vertices) - 2 * graph.total_weight())
        self.assertGreater(forests, 0)

    def test_alternation_follows_the_signs(self):
        for graph in corpus(150, MIXED):
            invariants = diagram_invariants(build_chainmail_pd(graph, with_layout=False))
            signs = {edge.weight > 0 for edge in graph.edges.values() if edge.weight and not edge.is_loop}
            if len(signs) <= 1:
                self.assertTrue(invariants.alternating)
            shared = any(
                len({graph.edges[d.edge].weight > 0 for d in graph.rotations[v]
                     if graph.edges[d.edge].weight and not graph.edges[d.edge].is_loop}) == 2
                for v in graph.vertex_ids
            )
            if shared:
                self.assertFalse(invariants.alternating)


class MedialDiagramTests(SimpleTestCase):

    def test_single_edge_is_a_twisted_unknot(self):
        pd = medial_link_pd(edge_graph(0, 0))
        self.assertEqual(pd.crossings, (Crossing((1, 2, 2, 1), -1),))
        invariants = diagram_invariants(pd)
        self.assertEqual(len(invariants.component_ids), 1)
        self.assertEqual(invariants.goeritz_det, 1)

    def test_double_edge_is_a_hopf_link(self):
        invariants = diagram_invariants(medial_link_pd(edge_graph(0, 0, -2)))
        self.assertEqual(invariants.crossing_count, 2)
        self.assertEqual(len(invariants.component_ids), 2)
        self.assertEqual(invariants.goeritz_det, 2)
        self.assertEqual(abs(invariants.lk[0][1]), 1)

    def test_triangle_is_a_trefoil(self):
        invariants = diagram_invariants(medial_link_pd(triangle()))
        self.assertEqual(invariants.crossing_count, 3)
        self.assertEqual(len(invariants.component_ids), 1)
        self.assertTrue(invariants.alternating)
        self.assertEqual(invariants.goeritz_det, 3)
        self.assertEqual(invariants.seifert_genus, 1)

    def test_single_vertex(self):
        invariants = diagram_invariants(medial_link_pd(single_vertex(0)))
        self.assertEqual(invariants.crossing_count, 0)
        self.assertEqual(invariants.goeritz_det, 1)

    def test_disconnected_input(self):
        graph = ChainmailGraph.build({'a': 0, 'b': 0}, [])
        with self.assertRaises(PreconditionError):
            medial_link_pd(graph)

    def test_cube(self):
        invariants = diagram_invariants(medial_link_pd(cube()))
        self.assertEqual(invariants.crossing_count, 12)
        self.assertEqual(invariants.goeritz_det, count_weighted_spanning_trees(cube()))

    def test_matrix_tree_agreement_on_corpus(self):
        checked = 0
        for graph in corpus(120, BALANCED):
            if not graph.is_connected():
                continue
            checked += 1
            pd = medial_link_pd(graph, with_layout=False)
            invariants = diagram_invariants(pd)
            trees = count_weighted_spanning_trees(graph)
            laplacian = balanced_laplacian(graph)
            self.assertEqual(invariants.crossing_count, graph.total_weight())
            self.assertTrue(invariants.alternating)
            self.assertEqual(invariants.goeritz_det, trees)
            self.assertEqual(abs(determinant(laplacian.without(0))), trees)
            self.assertEqual(abs(determinant(laplacian.without(laplacian.rows - 1))), trees)
        self.assertGreater(checked, 20)


class PDTextTests(SimpleTestCase):

    def test_parse_written_text(self):
        for graph in (triangle(), edge_graph(1, 1, -2), single_vertex(1)):
            pd = build_chainmail_pd(graph)
            parsed = parse_pd_text(pd.text())
            self.assertEqual(parsed, pd)
            self.assertEqual(diagram_invariants(parsed).as_dict(), diagram_invariants(pd).as_dict())

    def test_external_trefoil(self):
        text = "pd external\n# left-handed trefoil\ncomponent K vertex 1 2 3 4 5 6\nX[1,4,2,5]-\nX[3,6,4,1]-\nX[5,2,6,3]-\n"
        invariants = diagram_invariants(parse_pd_text(text))
        self.assertEqual(invariants.crossing_count, 3)
        self.assertEqual(invariants.writhe, -3)
        self.assertEqual(invariants.seifert_genus, 1)
        self.assertTrue(invariants.alternating)
        self.assertEqual(invariants.goeritz_det, 3)

    def test_malformed_text(self):
        for text in (
            '',
            'component a vertex 1 2\n',
            'pd x\ncomponent a vertex 1 2\nX[1,2,2]-\n',
            'pd x\ncomponent a vertex 1 2\nX[2,3,1,4]-\n',
            'pd x\ncomponent a vertex 1 2\ncomponent b vertex 3 4\nX[2,3,1,4]-\n',
        ):
            with self.assertRaises(InvalidInputError):
                parse_pd_text(text)


class CoverCheckTests(SimpleTestCase):

    def test_triangle(self):
        report = balanced_cover_check(triangle())
        self.assertEqual(report.free_rank, 1)
        self.assertEqual((report.torsion_order, report.goeritz_det, report.spanning_trees), (3, 3, 3))
        self.assertTrue(report.holds)

    def test_preconditions(self):
        with self.assertRaises(PreconditionError):
            balanced_cover_check(triangle((1, 0, 0)))
        with self.assertRaises(PreconditionError):
            balanced_cover_check(ChainmailGraph.build({'a': 0, 'b': 0}, []))
        with self.assertRaises(PreconditionError):
            balanced_cover_check(edge_graph(0, 0, 1))

    def test_corpus(self):
        for graph in corpus(60, BALANCED):
            if graph.is_connected():
                self.assertTrue(balanced_cover_check(graph).holds)


class RenderSvgTests(SimpleTestCase):

    def test_unknot(self):
        root = svg_tree(render_svg(build_chainmail_pd(single_vertex(1))))
        self.assertEqual(len(list(root.iter(f'{SVG}path'))), 1)
        self.assertEqual(gaps(root), [])

    def test_hopf(self):
        root = svg_tree(render_svg(build_chainmail_pd(edge_graph(1, 1))))
        self.assertEqual(len(list(root.iter(f'{SVG}path'))), 2)
        self.assertEqual(len(gaps(root)), 2)
        colours = {p.get('stroke') for p in root.iter(f'{SVG}path')}
        self.assertEqual(len(colours), 2)

    def test_medial(self):
        root = svg_tree(render_svg(medial_link_pd(triangle())))
        self.assertEqual(len(list(root.iter(f'{SVG}path'))), 1)
        self.assertEqual(len(gaps(root)), 3)

    def test_augmented_annotations(self):
        augmented = AugmentedGraph(triangle((1, 1, 1)), {'e1': SurgeryCoefficient(-2)})
        root = svg_tree(render_svg(build_chainmail_pd(augmented)))
        labels = [t.text for t in root.iter(f'{SVG}text')]
        self.assertEqual(labels, ['-2'])
        self.assertEqual(len(list(root.iter(f'{SVG}circle'))), 1)

    def test_deterministic_and_configurable(self):
        pd = build_chainmail_pd(path([1, 0, 1]))
        self.assertEqual(render_svg(pd), render_svg(pd))
        with override_settings(CHAINMAIL_SVG_PALETTE=['#000000']):
            root = svg_tree(render_svg(pd))
        self.assertEqual({p.get('stroke') for p in root.iter(f'{SVG}path')}, {'#000000'})

    def test_corpus_is_well_formed(self):
        for graph in corpus(40, MIXED):
            root = svg_tree(render_svg(build_chainmail_pd(graph)))
            self.assertEqual(root.tag, f'{SVG}svg')
            self.assertEqual(len(gaps(root)), 2 * sum(
                abs(e.weight) for e in graph.edges.values() if not e.is_loop))

    def test_needs_layout(self):
        pd = parse_pd_text(build_chainmail_pd(edge_graph(1, 1)).text())
        with self.assertRaises(InvalidInputError):
            render_svg(pd)
