from django.test import SimpleTestCase

from core.exceptions import CapExceededError, GraphFileSyntaxError, HypothesisError, InvalidInputError
from core.responses import EXIT_INVALID_INPUT, EXIT_PROPERTY_FAILED, exception_response, success_response
from core.utils import SplitMix64, natural_min, natural_sorted, parse_range


class SplitMix64Tests(SimpleTestCase):

    def test_reference_output(self):
        self.assertEqual(SplitMix64(0).next_u64(), 0xE220A8397B1DCDAF)

    def test_same_seed_same_stream(self):
        a, b = SplitMix64(2024), SplitMix64(2024)
        self.assertEqual([a.next_u64() for _ in range(50)], [b.next_u64() for _ in range(50)])

    def test_randint_bounds(self):
        rng = SplitMix64(5)
        draws = [rng.randint(-3, 4) for _ in range(2000)]
        self.assertEqual(set(draws), set(range(-3, 5)))
        self.assertEqual(SplitMix64(5).randint(7, 7), 7)
        with self.assertRaises(ValueError):
            rng.randint(2, 1)

    def test_shuffle_is_a_permutation(self):
        items = list(range(20))
        SplitMix64(11).shuffle(items)
        self.assertEqual(sorted(items), list(range(20)))


class NaturalOrderTests(SimpleTestCase):

    def test_numeric_runs(self):
        self.assertEqual(natural_sorted(['e10', 'e2', 'e1', 'b', 'a3']), ['a3', 'b', 'e1', 'e2', 'e10'])
        self.assertEqual(natural_min(['v12', 'v9']), 'v9')
        self.assertEqual(natural_sorted(['e1~2', 'e1', 'e1~1']), ['e1', 'e1~1', 'e1~2'])


class ParseRangeTests(SimpleTestCase):

    def test_ranges(self):
        self.assertEqual(parse_range('2:5'), (2, 5))
        self.assertEqual(parse_range('-2:-1'), (-2, -1))
        self.assertEqual(parse_range('3'), (3, 3))

    def test_bad_ranges(self):
        for text in ('5:2', 'x', '1:y', ''):
            with self.assertRaises(InvalidInputError):
                parse_range(text, 'vertices')


class ResponseTests(SimpleTestCase):

    def test_exit_codes_follow_the_error(self):
        self.assertEqual(exception_response(InvalidInputError('bad')).exit_code, EXIT_INVALID_INPUT)
        self.assertEqual(exception_response(CapExceededError('too many')).exit_code, EXIT_INVALID_INPUT)
        failure = exception_response(HypothesisError('unmet'))
        self.assertEqual((failure.status, failure.exit_code), ('failure', EXIT_PROPERTY_FAILED))

    def test_syntax_error_envelope(self):
        envelope = exception_response(GraphFileSyntaxError('Expecting value', 3, 1)).envelope()
        self.assertEqual(envelope['status'], 'error')
        self.assertEqual(envelope['errors']['detail'], {'line': 3, 'column': 1})

    def test_success_envelope(self):
        self.assertEqual(success_response('ok', data={'det': '3'}).envelope(),
                         {'status': 'success', 'message': 'ok', 'data': {'det': '3'}})
