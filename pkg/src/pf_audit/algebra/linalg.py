"""Exact linear algebra over QQ(t).

All elimination goes through :class:`FractionFreeEchelon`: rows live in
ZZ[t] (denominators cleared on insertion), every elimination is a
cross-multiplication followed by division by the row content, and pivot
rows are kept mutually reduced. The QQ(t)-combination expressing each
pivot row in terms of the inserted vectors is tracked alongside, which is
what turns the echelon form into an ideal-membership or linear solver.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from sympy.polys.rings import PolyElement

from pf_audit.algebra.rational import ParameterField, ParamRat
from pf_audit.exceptions import AlgebraError

logger = logging.getLogger(__name__)

SparseVector = dict[int, Any]


@dataclass(frozen=True)
class ExactMatrix:
    field: ParameterField
    rows: int
    cols: int
    entries: tuple[tuple[ParamRat, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise AlgebraError(f"Matrix entries do not match the declared {self.rows}x{self.cols}.")

    @classmethod
    def from_rows(cls, field: ParameterField, rows: Sequence[Sequence[Any]]) -> ExactMatrix:
        entries = tuple(tuple(field.convert(v) for v in row) for row in rows)
        ncols = len(entries[0]) if entries else 0
        return cls(field, len(entries), ncols, entries)

    @classmethod
    def from_columns(
        cls, field: ParameterField, columns: Sequence[Sequence[Any]], nrows: int
    ) -> ExactMatrix:
        rows = [[column[i] for column in columns] for i in range(nrows)]
        entries = tuple(tuple(field.convert(v) for v in row) for row in rows)
        return cls(field, nrows, len(columns), entries)

    @classmethod
    def identity(cls, field: ParameterField, size: int) -> ExactMatrix:
        rows = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
        return cls.from_rows(field, rows)

    def column(self, index: int) -> SparseVector:
        return {i: row[index] for i, row in enumerate(self.entries) if row[index]}

    def apply(self, vector: Sequence[ParamRat]) -> list[ParamRat]:
        if len(vector) != self.cols:
            raise AlgebraError(
                f"Vector of length {len(vector)} for a matrix with {self.cols} columns."
            )
        out = []
        for row in self.entries:
            acc = self.field.zero
            for a, x in zip(row, vector):
                if a and x:
                    acc += a * x
            out.append(acc)
        return out


def _combine(a: Any, row: Mapping[int, Any], b: Any, other: Mapping[int, Any]) -> SparseVector:
    """a*row - b*other, dropping zeros."""
    out = {col: a * value for col, value in row.items()}
    for col, value in other.items():
        current = out.get(col)
        updated = -b * value if current is None else current - b * value
        if updated:
            out[col] = updated
        else:
            out.pop(col, None)
    return out


def _row_content(row: Mapping[int, PolyElement]) -> PolyElement | None:
    content = None
    for value in row.values():
        content = value if content is None else content.gcd(value)
        if content.degree() == 0 and abs(content.LC) == 1:
            return None
    return content


class FractionFreeEchelon:
    """Incremental reduced echelon form of a set of sparse QQ(t)-vectors."""

    def __init__(self, field: ParameterField) -> None:
        self.field = field
        self._rows: dict[int, SparseVector] = {}
        self._combos: dict[int, SparseVector] = {}
        self._field_rows: dict[int, SparseVector] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def insert(self, vector: Mapping[int, ParamRat], tag: int) -> int | None:
        """Add ``vector`` under ``tag``; return its pivot column, or None if dependent."""
        if not vector:
            return None
        row, scale = self._clear_denominators(vector)
        ops: list[tuple[int, PolyElement, PolyElement, PolyElement | None]] = []
        for pivot in [col for col in row if col in self._rows]:
            b = row.get(pivot)
            if not b:
                continue
            a = self._rows[pivot][pivot]
            row = _combine(a, row, b, self._rows[pivot])
            content = _row_content(row)
            if content is not None:
                row = {col: value.exquo(content) for col, value in row.items()}
            ops.append((pivot, a, b, content))
        if not row:
            return None

        combo: SparseVector = {tag: self.field.convert(scale)}
        for pivot, a, b, content in ops:
            a_field, b_field = self.field.convert(a), self.field.convert(b)
            combo = _combine(a_field, combo, b_field, self._combos[pivot])
            if content is not None:
                inverse = self.field.one / self.field.convert(content)
                combo = {g: value * inverse for g, value in combo.items()}

        new_pivot = min(row, key=lambda col: (row[col].degree(), col))
        if row[new_pivot].LC < 0:
            row = {col: -value for col, value in row.items()}
            combo = {g: -value for g, value in combo.items()}

        self._back_substitute(new_pivot, row, combo)
        self._rows[new_pivot] = row
        self._combos[new_pivot] = combo
        self._field_rows.clear()
        return new_pivot

    def _clear_denominators(
        self, vector: Mapping[int, ParamRat]
    ) -> tuple[SparseVector, PolyElement]:
        parts = {col: self.field.int_parts(value) for col, value in vector.items() if value}
        scale = self.field.int_ring.one
        for _, denom in parts.values():
            scale = scale.lcm(denom)
        row = {col: numer * scale.exquo(denom) for col, (numer, denom) in parts.items()}
        return row, scale

    def _back_substitute(self, pivot: int, row: SparseVector, combo: SparseVector) -> None:
        a = row[pivot]
        a_field = self.field.convert(a)
        for other_pivot, other in self._rows.items():
            b = other.get(pivot)
            if not b:
                continue
            updated = _combine(a, other, b, row)
            content = _row_content(updated)
            if content is not None:
                updated = {col: value.exquo(content) for col, value in updated.items()}
            other_combo = _combine(a_field, self._combos[other_pivot], self.field.convert(b), combo)
            if content is not None:
                inverse = self.field.one / self.field.convert(content)
                other_combo = {g: value * inverse for g, value in other_combo.items()}
            if updated[other_pivot].LC < 0:
                updated = {col: -value for col, value in updated.items()}
                other_combo = {g: -value for g, value in other_combo.items()}
            self._rows[other_pivot] = updated
            self._combos[other_pivot] = other_combo

    def _field_row(self, pivot: int) -> SparseVector:
        cached = self._field_rows.get(pivot)
        if cached is None:
            cached = {col: self.field.convert(v) for col, v in self._rows[pivot].items()}
            self._field_rows[pivot] = cached
        return cached

    def reduce(self, vector: Mapping[int, ParamRat]) -> tuple[SparseVector, SparseVector]:
        """Split ``vector`` as remainder + sum(coefficient[tag] * inserted[tag]).

        The remainder is supported on non-pivot columns only.
        """
        remainder: SparseVector = {col: v for col, v in vector.items() if v}
        coefficients: SparseVector = {}
        for pivot in [col for col in remainder if col in self._rows]:
            value = remainder.get(pivot)
            if not value:
                continue
            prow = self._field_row(pivot)
            factor = value / prow[pivot]
            for col, entry in prow.items():
                updated = remainder.get(col, self.field.zero) - factor * entry
                if updated:
                    remainder[col] = updated
                else:
                    remainder.pop(col, None)
            for tag, entry in self._combos[pivot].items():
                updated = coefficients.get(tag, self.field.zero) + factor * entry
                if updated:
                    coefficients[tag] = updated
                else:
                    coefficients.pop(tag, None)
        return remainder, coefficients


def solve_exact(matrix: ExactMatrix, rhs: Sequence[Any]) -> list[ParamRat] | None:
    """Exact solution of ``matrix @ x = rhs`` over QQ(t), or None if inconsistent.

    Free unknowns (non-pivot columns) are set to zero.
    """
    if len(rhs) != matrix.rows:
        raise AlgebraError(
            f"Right-hand side of length {len(rhs)} for a matrix with {matrix.rows} rows."
        )
    field = matrix.field
    echelon = FractionFreeEchelon(field)
    for j in range(matrix.cols):
        echelon.insert(matrix.column(j), tag=j)
    target = {i: field.convert(v) for i, v in enumerate(rhs) if v}
    remainder, coefficients = echelon.reduce(target)
    if remainder:
        return None
    return [coefficients.get(j, field.zero) for j in range(matrix.cols)]
