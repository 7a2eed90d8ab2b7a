"""
Exact integer linear algebra: Bareiss determinants, Smith normal form with
its unimodular transforms, positive-definiteness and cokernels.

Pivot rule everywhere: first nonzero entry in column order.
"""
import logging
from dataclasses import dataclass
from typing import List

from core.exceptions import CertificateError, InvalidInputError

from .models import AbelianGroup, IntMatrix

logger = logging.getLogger(__name__)


def _require_square(matrix: IntMatrix, operation: str) -> None:
    if not matrix.is_square:
        raise InvalidInputError(f"{operation} needs a square matrix, got {matrix.rows}x{matrix.cols}")


def determinant(matrix: IntMatrix) -> int:
    """
    Fraction-free Gaussian elimination; every division is exact.
    """
    _require_square(matrix, 'determinant')
    n = matrix.rows
    if n == 0:
        return 1
    a = matrix.to_lists()
    sign = 1
    previous = 1
    for k in range(n - 1):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            return 0
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
            a[i][k] = 0
        previous = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """left @ matrix @ right == diag(diagonal), padded to the matrix shape."""

    diagonal: List[int]
    left: IntMatrix
    right: IntMatrix

    def diagonal_matrix(self, rows: int, cols: int) -> IntMatrix:
        return IntMatrix.from_rows(
            [[self.diagonal[i] if i == j and i < len(self.diagonal) else 0 for j in range(cols)] for i in range(rows)],
            cols=cols,
        )


class _Reducer:
    """Row/column operations applied to A together with the transforms."""

    def __init__(self, matrix: IntMatrix):
        self.a = matrix.to_lists()
        self.rows, self.cols = matrix.rows, matrix.cols
        self.left = IntMatrix.identity(self.rows).to_lists()
        self.right = IntMatrix.identity(self.cols).to_lists()

    def swap_rows(self, i, j):
        self.a[i], self.a[j] = self.a[j], self.a[i]
        self.left[i], self.left[j] = self.left[j], self.left[i]

    def swap_cols(self, i, j):
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        for row in self.right:
            row[i], row[j] = row[j], row[i]

    def add_row(self, target, source, factor):
        if factor:
            self.a[target] = [x + factor * y for x, y in zip(self.a[target], self.a[source])]
            self.left[target] = [x + factor * y for x, y in zip(self.left[target], self.left[source])]

    def add_col(self, target, source, factor):
        if factor:
            for row in self.a:
                row[target] += factor * row[source]
            for row in self.right:
                row[target] += factor * row[source]

    def negate_row(self, i):
        self.a[i] = [-x for x in self.a[i]]
        self.left[i] = [-x for x in self.left[i]]

    def clear_cross(self, t) -> bool:
        """One pass over column t and row t; True if the pivot moved."""
        moved = False
        for i in range(t + 1, self.rows):
            if self.a[i][t]:
                self.add_row(i, t, -(self.a[i][t] // self.a[t][t]))
                if self.a[i][t]:
                    self.swap_rows(t, i)
                    moved = True
        for j in range(t + 1, self.cols):
            if self.a[t][j]:
                self.add_col(j, t, -(self.a[t][j] // self.a[t][t]))
                if self.a[t][j]:
                    self.swap_cols(t, j)
                    moved = True
        return moved

    def cross_is_clear(self, t) -> bool:
        return (all(self.a[i][t] == 0 for i in range(t + 1, self.rows))
                and all(self.a[t][j] == 0 for j in range(t + 1, self.cols)))

    def non_divisible_row(self, t):
        pivot = self.a[t][t]
        for i in range(t + 1, self.rows):
            for j in range(t + 1, self.cols):
                if self.a[i][j] % pivot:
                    return i
        return None


def smith_normal_form(matrix: IntMatrix) -> SmithForm:
    reducer = _Reducer(matrix)
    size = min(matrix.rows, matrix.cols)
    for t in range(size):
        position = next(
            ((i, j) for j in range(t, matrix.cols) for i in range(t, matrix.rows) if reducer.a[i][j]),
            None,
        )
        if position is None:
            break
        i, j = position
        reducer.swap_rows(t, i)
        reducer.swap_cols(t, j)
        while True:
            if reducer.clear_cross(t) or not reducer.cross_is_clear(t):
                continue
            bad_row = reducer.non_divisible_row(t)
            if bad_row is None:
                break
            reducer.add_row(t, bad_row, 1)
        if reducer.a[t][t] < 0:
            reducer.negate_row(t)

    diagonal = [reducer.a[k][k] for k in range(size)]
    form = SmithForm(
        diagonal=diagonal,
        left=IntMatrix.from_rows(reducer.left, cols=matrix.rows),
        right=IntMatrix.from_rows(reducer.right, cols=matrix.cols),
    )
    _check_smith_form(matrix, form)
    return form


def _check_smith_form(matrix: IntMatrix, form: SmithForm) -> None:
    if abs(determinant(form.left)) != 1 or abs(determinant(form.right)) != 1:
        raise CertificateError("Smith normal form transforms are not unimodular")
    if form.left @ matrix @ form.right != form.diagonal_matrix(matrix.rows, matrix.cols):
        raise CertificateError("Smith normal form transforms do not reproduce the diagonal")
    for small, large in zip(form.diagonal, form.diagonal[1:]):
        if small < 0 or (small == 0 and large != 0) or (small and large % small):
            raise CertificateError(f"Smith diagonal {form.diagonal} is not in divisibility order")


def leading_minors(matrix: IntMatrix) -> List[int]:
    _require_square(matrix, 'leading minors')
    return [determinant(matrix.leading(k)) for k in range(1, matrix.rows + 1)]


def is_positive_definite(matrix: IntMatrix) -> bool:
    """Sylvester's criterion on the leading principal minors."""
    if not matrix.is_symmetric():
        raise InvalidInputError("positive definiteness needs a symmetric matrix")
    return all(minor > 0 for minor in leading_minors(matrix))


def cokernel(matrix: IntMatrix) -> AbelianGroup:
    _require_square(matrix, 'cokernel')
    diagonal = smith_normal_form(matrix).diagonal
    return AbelianGroup(
        invariant_factors=tuple(d for d in diagonal if d > 1),
        free_rank=sum(1 for d in diagonal if d == 0),
    )
