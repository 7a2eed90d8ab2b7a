"""
Exact integer matrices and finitely generated abelian groups.
"""
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, List, Optional, Sequence, Tuple

from core.exceptions import InvalidInputError


@dataclass(frozen=True)
class IntMatrix:
    """
    Arbitrary-precision integer matrix with optional row/column labels.

    `symmetric=True` is a claim checked at construction.
    """

    entries: Tuple[Tuple[int, ...], ...]
    rows: int
    cols: int
    row_labels: Optional[Tuple[str, ...]] = None
    col_labels: Optional[Tuple[str, ...]] = None
    symmetric: bool = False

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise InvalidInputError(f"entries do not form a {self.rows}x{self.cols} matrix")
        if self.row_labels is not None and len(self.row_labels) != self.rows:
            raise InvalidInputError(f"{len(self.row_labels)} row labels for {self.rows} rows")
        if self.col_labels is not None and len(self.col_labels) != self.cols:
            raise InvalidInputError(f"{len(self.col_labels)} column labels for {self.cols} columns")
        if self.symmetric and not self.is_symmetric():
            raise InvalidInputError("matrix flagged symmetric is not symmetric")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], labels: Optional[Sequence[str]] = None,
                  symmetric: bool = False, cols: Optional[int] = None) -> 'IntMatrix':
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        width = len(entries[0]) if entries else (cols or 0)
        label_tuple = tuple(labels) if labels is not None else None
        return cls(entries, len(entries), width, label_tuple, label_tuple, symmetric)

    @classmethod
    def identity(cls, n: int) -> 'IntMatrix':
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'IntMatrix':
        return cls.from_rows([[0] * cols for _ in range(rows)], cols=cols)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i][j]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]

    def transpose(self) -> 'IntMatrix':
        return IntMatrix.from_rows(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows
        )

    def __matmul__(self, other: 'IntMatrix') -> 'IntMatrix':
        if self.cols != other.rows:
            raise InvalidInputError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        rows = [
            [sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntMatrix.from_rows(rows, cols=other.cols)

    def submatrix(self, keep_rows: Sequence[int], keep_cols: Sequence[int]) -> 'IntMatrix':
        return IntMatrix.from_rows(
            [[self.entries[i][j] for j in keep_cols] for i in keep_rows], cols=len(keep_cols)
        )

    def leading(self, k: int) -> 'IntMatrix':
        return self.submatrix(range(k), range(k))

    def without(self, index: int) -> 'IntMatrix':
        """Principal submatrix with row and column `index` removed."""
        keep = [i for i in range(self.rows) if i != index]
        labels = None if self.row_labels is None else [self.row_labels[i] for i in keep]
        return IntMatrix.from_rows(
            [[self.entries[i][j] for j in keep] for i in keep], labels=labels, cols=len(keep)
        )

    def as_dict(self):
        payload = {'rows': self.rows, 'cols': self.cols, 'entries': self.to_lists()}
        if self.row_labels is not None:
            payload['labels'] = list(self.row_labels)
        return payload

    def format(self) -> str:
        if not self.rows or not self.cols:
            return f"({self.rows}x{self.cols} matrix)"
        cells = [[str(x) for x in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        lines = []
        labels = self.row_labels
        label_width = max((len(str(l)) for l in labels), default=0) if labels else 0
        if labels:
            header = ' ' * (label_width + 1) + ' '.join(str(l).rjust(width) for l in (self.col_labels or labels))
            lines.append(header)
        for index, row in enumerate(cells):
            prefix = f"{str(labels[index]).ljust(label_width)} " if labels else ''
            lines.append(prefix + ' '.join(c.rjust(width) for c in row))
        return '\n'.join(lines)


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank + Z/d1 + ... + Z/dk with 1 < d1 | d2 | ... | dk."""

    invariant_factors: Tuple[int, ...] = field(default_factory=tuple)
    free_rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'invariant_factors', tuple(int(d) for d in self.invariant_factors))
        if self.free_rank < 0:
            raise InvalidInputError("free rank must be non-negative")
        for factor in self.invariant_factors:
            if factor <= 1:
                raise InvalidInputError(f"invariant factor {factor} must exceed 1")
        for small, large in zip(self.invariant_factors, self.invariant_factors[1:]):
            if large % small:
                raise InvalidInputError(f"invariant factor {small} does not divide {large}")

    @property
    def order(self) -> Optional[int]:
        """|G|, or None when the group is infinite."""
        if self.free_rank:
            return None
        return prod(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return not self.free_rank and not self.invariant_factors

    def __str__(self):
        if self.is_trivial:
            return '0'
        parts = []
        if self.free_rank == 1:
            parts.append('Z')
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return ' + '.join(parts)

    def as_dict(self):
        return {
            'invariant_factors': list(self.invariant_factors),
            'free_rank': self.free_rank,
            'order': None if self.order is None else str(self.order),
            'group': str(self),
        }
