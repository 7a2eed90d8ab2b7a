from itertools import combinations
from math import gcd

import sympy
from django.test import SimpleTestCase

from core.exceptions import InvalidInputError
from core.utils import SplitMix64
from linalg.models import AbelianGroup, IntMatrix
from linalg.services import cokernel, determinant, is_positive_definite, smith_normal_form


def random_matrix(rng, n, m=None, low=-4, high=4):
    m = n if m is None else m
    return IntMatrix.from_rows([[rng.randint(low, high) for _ in range(m)] for _ in range(n)], cols=m)


def sympy_det(matrix):
    if matrix.rows == 0:
        return 1
    return int(sympy.Matrix(matrix.to_lists()).det())


def determinantal_diagonal(matrix):
    """Smith diagonal from gcds of k x k minors."""
    size = min(matrix.rows, matrix.cols)
    divisors = [1]
    for k in range(1, size + 1):
        g = 0
        for rows in combinations(range(matrix.rows), k):
            for cols in combinations(range(matrix.cols), k):
                g = gcd(g, sympy_det(matrix.submatrix(rows, cols)))
        divisors.append(g)
    diagonal = []
    for k in range(1, size + 1):
        diagonal.append(0 if divisors[k] == 0 else divisors[k] // divisors[k - 1])
    return diagonal


class IntMatrixTests(SimpleTestCase):

    def test_shape_is_checked(self):
        with self.assertRaises(InvalidInputError):
            IntMatrix(((1, 2), (3,)), 2, 2)

    def test_symmetric_flag_is_verified(self):
        with self.assertRaises(InvalidInputError):
            IntMatrix.from_rows([[1, 2], [3, 4]], symmetric=True)

    def test_labels_must_match(self):
        with self.assertRaises(InvalidInputError):
            IntMatrix.from_rows([[1]], labels=['a', 'b'])

    def test_product(self):
        a = IntMatrix.from_rows([[1, 2], [3, 4]])
        self.assertEqual((a @ IntMatrix.identity(2)), a)
        self.assertEqual((a @ a).to_lists(), [[7, 10], [15, 22]])


class DeterminantTests(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(determinant(IntMatrix.identity(3)), 1)
        self.assertEqual(determinant(IntMatrix.from_rows([[2, -1], [-1, 2]])), 3)
        self.assertEqual(determinant(IntMatrix.from_rows([], cols=0)), 1)

    def test_zero_leading_entry_needs_a_swap(self):
        self.assertEqual(determinant(IntMatrix.from_rows([[0, 1], [1, 0]])), -1)
        self.assertEqual(determinant(IntMatrix.from_rows([[0, 0], [1, 2]])), 0)

    def test_non_square_is_rejected(self):
        with self.assertRaises(InvalidInputError):
            determinant(IntMatrix.from_rows([[1, 2]]))

    def test_agrees_with_sympy(self):
        rng = SplitMix64(7)
        for _ in range(150):
            matrix = random_matrix(rng, rng.randint(1, 7))
            self.assertEqual(determinant(matrix), sympy_det(matrix))

    def test_large_entries_stay_exact(self):
        big = 10 ** 30
        matrix = IntMatrix.from_rows([[big, 1], [1, big]])
        self.assertEqual(determinant(matrix), big * big - 1)


class SmithNormalFormTests(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]])).diagonal, [1, 6])
        self.assertEqual(smith_normal_form(IntMatrix.from_rows([[7]])).diagonal, [7])
        self.assertEqual(smith_normal_form(IntMatrix.from_rows([[2, -1], [-1, 2]])).diagonal, [1, 3])

    def test_negative_scalar_is_normalized(self):
        self.assertEqual(smith_normal_form(IntMatrix.from_rows([[-5]])).diagonal, [5])

    def test_transforms_reproduce_the_diagonal(self):
        rng = SplitMix64(19)
        for _ in range(80):
            rows, cols = rng.randint(1, 5), rng.randint(1, 5)
            matrix = random_matrix(rng, rows, cols)
            form = smith_normal_form(matrix)
            self.assertEqual(form.left @ matrix @ form.right, form.diagonal_matrix(rows, cols))
            self.assertIn(determinant(form.left), (1, -1))
            self.assertIn(determinant(form.right), (1, -1))

    def test_matches_determinantal_divisors(self):
        rng = SplitMix64(23)
        for _ in range(60):
            matrix = random_matrix(rng, rng.randint(1, 4), low=-3, high=3)
            self.assertEqual(smith_normal_form(matrix).diagonal, determinantal_diagonal(matrix))

    def test_determinant_is_product_of_diagonal_up_to_sign(self):
        rng = SplitMix64(29)
        for _ in range(60):
            matrix = random_matrix(rng, rng.randint(1, 6))
            product = 1
            for entry in smith_normal_form(matrix).diagonal:
                product *= entry
            self.assertEqual(abs(determinant(matrix)), product)


class PositiveDefiniteTests(SimpleTestCase):

    def test_examples(self):
        self.assertTrue(is_positive_definite(IntMatrix.from_rows([[2, -1], [-1, 2]])))
        self.assertFalse(is_positive_definite(IntMatrix.from_rows([[0]])))
        laplacian = IntMatrix.from_rows([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
        self.assertFalse(is_positive_definite(laplacian))

    def test_non_symmetric_is_rejected(self):
        with self.assertRaises(InvalidInputError):
            is_positive_definite(IntMatrix.from_rows([[1, 2], [0, 1]]))

    def test_positive_definite_implies_positive_determinant(self):
        rng = SplitMix64(31)
        for _ in range(100):
            a = random_matrix(rng, rng.randint(1, 4), low=-2, high=2)
            gram = a.transpose() @ a
            if is_positive_definite(gram):
                self.assertGreater(determinant(gram), 0)


class CokernelTests(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(cokernel(IntMatrix.from_rows([[1, 0], [0, 3]])), AbelianGroup((3,), 0))
        self.assertEqual(cokernel(IntMatrix.from_rows([[0]])), AbelianGroup((), 1))
        triangle = IntMatrix.from_rows([[3, -1, -1], [-1, 2, -1], [-1, -1, 2]])
        self.assertEqual(str(cokernel(triangle)), 'Z/3')

    def test_order_matches_determinant(self):
        rng = SplitMix64(37)
        for _ in range(60):
            matrix = random_matrix(rng, rng.randint(1, 5))
            group = cokernel(matrix)
            det = determinant(matrix)
            if det:
                self.assertEqual(group.order, abs(det))
            else:
                self.assertGreaterEqual(group.free_rank, 1)

    def test_group_text(self):
        self.assertEqual(str(AbelianGroup()), '0')
        self.assertEqual(str(AbelianGroup((2, 4), 2)), 'Z^2 + Z/2 + Z/4')
        with self.assertRaises(InvalidInputError):
            AbelianGroup((2, 3), 0)
