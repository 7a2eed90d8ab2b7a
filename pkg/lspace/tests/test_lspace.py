import json
from dataclasses import replace

from django.test import SimpleTestCase, override_settings

from cli.generator import GeneratorParams, Profile, corpus
from core.exceptions import CapExceededError, HypothesisError, InvalidInputError, PreconditionError
from graphs.minors import normalize
from graphs.models import AugmentedGraph, ChainmailGraph, SurgeryCoefficient
from graphs.tests.builders import edge_graph, path, single_vertex, triangle
from lspace.models import (
    Certificate, ChainmailBase, CoefficientTriangle, EdgeTriangle, LeafRemoval, LensBase, UnitBlowDown,
)
from lspace.serializers import certificate_from_data, certificate_to_data
from lspace.services import (
    alternating_hypotheses, certify, certify_generalized, orderability_obstruction, verify_certificate,
    verify_generalized_certificate,
)
from surgery.services import first_homology, linking_determinant

CERTIFIABLE = GeneratorParams(seed=500, profile=Profile.THEOREM_ALTERNATING, vertices=(1, 6), edges=(0, 10),
                              vertex_weights=(0, 1), edge_weights=(-1, -1))
AUGMENTED = GeneratorParams(seed=600, profile=Profile.AUGMENTED, vertices=(2, 5), edges=(1, 6),
                            vertex_weights=(0, 1), coefficients=(1, 4))


def augmented_edge(c):
    return AugmentedGraph(edge_graph(1, 1), {'e1': SurgeryCoefficient(-c)})


class HypothesisTests(SimpleTestCase):

    def test_violations_are_named(self):
        self.assertEqual(alternating_hypotheses(edge_graph(1, 1)), [])
        problems = alternating_hypotheses(edge_graph(0, 0))
        self.assertEqual(problems, ["component of 'a' has no positive vertex"])
        self.assertTrue(any("'e1'" in p for p in alternating_hypotheses(edge_graph(1, 1, 1))))
        self.assertTrue(any("'b'" in p for p in alternating_hypotheses(edge_graph(1, -1))))

    def test_certify_raises_on_unmet_hypotheses(self):
        with self.assertRaises(HypothesisError) as caught:
            certify(edge_graph(0, 0))
        self.assertEqual(caught.exception.exit_code, 1)


class CertifyTests(SimpleTestCase):

    def test_single_vertex_is_a_lens_base(self):
        certificate = certify(single_vertex(5))
        self.assertEqual(certificate.step, LensBase((5,)))
        self.assertEqual(certificate.det, 5)

    def test_single_edge(self):
        certificate = certify(edge_graph(1, 1))
        self.assertIsInstance(certificate.step, EdgeTriangle)
        self.assertEqual(certificate.det, 3)
        self.assertEqual(certificate.step.delete_child.det, 1)
        self.assertEqual(certificate.step.contract_child.step, LensBase((2,)))
        self.assertEqual(dict(certificate.step.slopes), {'node': '-1', 'delete': 'inf', 'contract': '0'})

    def test_path_removes_leaves(self):
        certificate = certify(path([1, 0, 0]))
        self.assertEqual(certificate.det, 1)
        self.assertEqual(certificate.step.vertex, 'c')
        child = certificate.step.child
        self.assertIsInstance(child.step, LeafRemoval)
        self.assertEqual(child.step.vertex, 'b')
        self.assertEqual(child.step.child.step, LensBase((1,)))

    def test_triangle_uses_non_bridge_edges_first(self):
        certificate = certify(triangle((1, 0, 0)))
        self.assertEqual(certificate.step.edge, 'e1')
        self.assertEqual(certificate.det, 3)

    def test_normalizes_first(self):
        certificate = certify(edge_graph(1, 1, -2))
        self.assertEqual(certificate.graph, normalize(edge_graph(1, 1, -2)))
        self.assertEqual(certificate.det, 5)

    def test_node_cap(self):
        with self.assertRaises(CapExceededError):
            certify(triangle((2, 2, 2)), max_nodes=3)
        with override_settings(CHAINMAIL_CERTIFICATE_MAX_NODES=2):
            with self.assertRaises(CapExceededError):
                certify(edge_graph(1, 1))

    def test_deterministic(self):
        graph = corpus(1, CERTIFIABLE)[0]
        first = json.dumps(certificate_to_data(certify(graph)), sort_keys=True)
        second = json.dumps(certificate_to_data(certify(graph)), sort_keys=True)
        self.assertEqual(first, second)

    def test_soundness_on_corpus(self):
        for graph in corpus(500, CERTIFIABLE):
            certificate = certify(graph)
            self.assertTrue(verify_certificate(certificate))
            self.assertEqual(certificate.det, linking_determinant(graph))
            self.assertEqual(certificate.det, certificate.lens_sum())
            self.assertEqual(first_homology(graph).order, certificate.det)


class VerifyCertificateTests(SimpleTestCase):

    def test_tampered_root(self):
        certificate = certify(edge_graph(1, 1))
        report = verify_certificate(replace(certificate, det=certificate.det + 1))
        self.assertFalse(report)
        self.assertEqual(report.path, 'root')

    def test_tampered_child_is_located(self):
        certificate = certify(edge_graph(1, 1))
        contract = certificate.step.contract_child
        step = replace(certificate.step, contract_child=replace(contract, det=contract.det + 1))
        report = verify_certificate(replace(certificate, step=step))
        self.assertFalse(report.ok)
        self.assertEqual(report.path, 'root.contract')

    def test_lens_base_with_zero_weight(self):
        graph = ChainmailGraph.build({'a': 0}, [])
        report = verify_certificate(Certificate(graph, 0, LensBase((0,))))
        self.assertFalse(report)

    def test_wrong_child_graph(self):
        certificate = certify(path([1, 0, 0]))
        wrong = replace(certificate.step, child=certify(single_vertex(1)))
        report = verify_certificate(replace(certificate, step=wrong))
        self.assertEqual(report.path, 'root')


class CertificateSerializerTests(SimpleTestCase):

    def test_json_layout(self):
        data = certificate_to_data(certify(edge_graph(1, 1)))
        self.assertEqual((data['format'], data['version'], data['root']), ('chainmail-certificate', 1, 0))
        self.assertEqual([node['kind'] for node in data['nodes']], ['edge-triangle', 'lens-base', 'lens-base'])
        self.assertEqual(data['nodes'][0]['det'], '3')
        self.assertEqual(data['nodes'][0]['children'], [1, 2])

    def test_rebuilt_certificate_verifies(self):
        for graph in corpus(20, CERTIFIABLE):
            data = json.loads(json.dumps(certificate_to_data(certify(graph))))
            self.assertTrue(verify_certificate(certificate_from_data(data)))

    def test_tampered_json_fails_verification(self):
        data = certificate_to_data(certify(triangle((1, 0, 0))))
        data['nodes'][1]['det'] = str(int(data['nodes'][1]['det']) + 1)
        report = verify_certificate(certificate_from_data(data))
        self.assertFalse(report)
        self.assertEqual(report.path, 'root.delete')

    def test_malformed_certificates(self):
        data = certificate_to_data(certify(edge_graph(1, 1)))
        data['nodes'][0]['children'] = [1]
        with self.assertRaises(InvalidInputError):
            certificate_from_data(data)
        data = certificate_to_data(certify(edge_graph(1, 1)))
        data['nodes'][0]['children'] = [1, 1]
        with self.assertRaises(InvalidInputError):
            certificate_from_data(data)
        with self.assertRaises(InvalidInputError):
            certificate_from_data({'format': 'chainmail-certificate', 'version': 1, 'root': 3, 'nodes': []})


class GeneralizedCertificateTests(SimpleTestCase):

    def test_unit_loop_blows_down(self):
        certificate = certify_generalized(augmented_edge(1))
        self.assertIsInstance(certificate.step, UnitBlowDown)
        self.assertEqual(certificate.det, -3)
        self.assertIsInstance(certificate.step.child.step, ChainmailBase)
        self.assertEqual(certificate.step.child.det, 3)

    def test_coefficient_steps(self):
        for c, erased in ((2, 1), (3, 1)):
            certificate = certify_generalized(augmented_edge(c))
            self.assertIsInstance(certificate.step, CoefficientTriangle)
            self.assertEqual(abs(certificate.det), c + 2)
            self.assertEqual(abs(certificate.step.shallower.det), c + 1)
            self.assertEqual(abs(certificate.step.erased.det), erased)

    def test_rational_coefficient_is_rejected(self):
        augmented = AugmentedGraph(edge_graph(1, 1), {'e1': SurgeryCoefficient(-1, 2)})
        with self.assertRaises(PreconditionError):
            certify_generalized(augmented)

    def test_unit_loop_over_a_zero_weight_vertex_certifies(self):
        certificate = certify_generalized(AugmentedGraph(edge_graph(1, 0), {'e1': SurgeryCoefficient(-1)}))
        self.assertIsInstance(certificate.step, UnitBlowDown)
        self.assertEqual(certificate.det, -1)
        self.assertIsInstance(certificate.step.child.step, ChainmailBase)
        self.assertEqual(certificate.step.child.det, 1)
        self.assertTrue(verify_generalized_certificate(certificate))

    def test_erasing_a_loop_needs_a_positive_vertex_on_each_side(self):
        augmented = AugmentedGraph(edge_graph(1, 0), {'e1': SurgeryCoefficient(-2)})
        with self.assertRaises(HypothesisError) as raised:
            certify_generalized(augmented)
        self.assertEqual(raised.exception.detail['edge'], 'e1')

    def test_corpus(self):
        for augmented in corpus(200, AUGMENTED):
            certificate = certify_generalized(augmented)
            self.assertTrue(verify_generalized_certificate(certificate))
            for node in certificate.walk():
                expected = -1 if node.crossing_loops % 2 else 1
                self.assertEqual(node.det > 0, expected > 0)
                if isinstance(node.step, CoefficientTriangle):
                    self.assertEqual(abs(node.det), abs(node.step.shallower.det) + abs(node.step.erased.det))
                if isinstance(node.step, UnitBlowDown):
                    self.assertEqual(node.det, -node.step.child.det)

    def test_tampered_generalized_certificate(self):
        certificate = certify_generalized(augmented_edge(2))
        erased = certificate.step.erased
        step = replace(certificate.step, erased=replace(erased, det=erased.det + 2))
        report = verify_generalized_certificate(replace(certificate, step=step))
        self.assertFalse(report)
        self.assertEqual(report.path, 'root.erased')

    def test_round_trip_through_json(self):
        certificate = certify_generalized(augmented_edge(2))
        data = json.loads(json.dumps(certificate_to_data(certificate)))
        self.assertEqual(data['nodes'][0]['kind'], 'coefficient-triangle')
        self.assertTrue(verify_generalized_certificate(certificate_from_data(data)))


class ObstructionTests(SimpleTestCase):

    def test_balanced_triangle(self):
        report = orderability_obstruction(triangle())
        self.assertEqual(report.orientation_count, 6)
        self.assertTrue(report.verdict)
        for record in report.records:
            self.assertTrue(record.sinks)
            self.assertTrue(record.sources)
            self.assertIsNotNone(record.witness)

    def test_single_edge(self):
        report = orderability_obstruction(edge_graph(1, 0))
        self.assertEqual(report.orientation_count, 2)
        self.assertEqual([r.witness for r in report.records], ['b', 'b'])
        self.assertEqual(report.positive_vertex, 'a')
        self.assertTrue(report.verdict)

    def test_two_positive_vertices(self):
        with self.assertRaises(HypothesisError):
            orderability_obstruction(edge_graph(1, 1))

    def test_cap(self):
        with self.assertRaises(CapExceededError):
            orderability_obstruction(triangle(), cap=2)

    def test_corpus(self):
        params = GeneratorParams(seed=900, profile=Profile.ARBITRARY, vertices=(1, 7), edges=(0, 10),
                                 vertex_weights=(0, 0), edge_weights=(-1, -1))
        for index, graph in enumerate(corpus(60, params)):
            if index % 2 and graph.vertex_ids:
                graph = graph.evolve(vertices={**graph.vertices, graph.vertex_ids[0]: 2})
            self.assertTrue(orderability_obstruction(graph).verdict)
