"""Sparse Gaussian elimination over the rationals.

Rows are {column: Fraction} maps with integer columns; absent keys are exact
zeros.  Pivots sit at the smallest column index of each row, so reductions
prefer lexicographically earliest pivots (the compensator solve and the
coboundary normalization rely on this).  Rows are processed short-and-small
first to keep rational coefficient growth down.
"""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)


def _bitsize(row) -> int:
    return max(
        (c.numerator.bit_length() + c.denominator.bit_length() for c in row.values()),
        default=0,
    )


def _row_order(rows):
    return sorted(range(len(rows)), key=lambda i: (len(rows[i]), _bitsize(rows[i])))


class Eliminator:
    """Incremental row-echelon accumulator with pivot coefficients normalized to 1."""

    def __init__(self):
        self.pivots = {}  # column -> reduced row {column: Fraction}, lead coeff 1

    def reduce(self, row):
        """Fully reduce a row against current pivots; returns a new sparse row."""
        row = {c: v for c, v in row.items() if v != 0}
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                return row
            factor = row[lead]
            for c, v in piv.items():
                new = row.get(c, _ZERO) - factor * v
                if new == 0:
                    row.pop(c, None)
                else:
                    row[c] = new
        return row

    def add(self, row) -> bool:
        """Reduce and register a row; True when it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        lead = min(row)
        inv = 1 / row[lead]
        self.pivots[lead] = {c: v * inv for c, v in row.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(rows) -> int:
    """Rank of a sparse row collection."""
    elim = Eliminator()
    for i in _row_order(rows):
        elim.add(rows[i])
    return elim.rank


def span_eliminator(rows) -> Eliminator:
    elim = Eliminator()
    for i in _row_order(rows):
        elim.add(rows[i])
    return elim


def reduce_mod_span(vector, rows):
    """Canonical representative of `vector` modulo the row span of `rows`.

    The representative is zero in every pivot column of the span; pivot
    columns are smallest-index leads, so low-index coordinates are
    eliminated preferentially.
    """
    return span_eliminator(rows).reduce(dict(vector))


def in_span(vector, rows) -> bool:
    return not reduce_mod_span(vector, rows)


def solve_sparse(equations, rhs, ncols):
    """Exact minimal-support solution of a sparse linear system.

    `equations` is a list of {column: Fraction} rows over columns 0..ncols-1
    and `rhs` a parallel list of Fractions.  Free variables are set to zero,
    pivots land at lexicographically earliest columns.  Returns a sparse
    {column: Fraction} solution, or None when the system is inconsistent.
    """
    aug = ncols  # augmented column, strictly larger than every unknown
    elim = Eliminator()
    for i in _row_order(equations):
        row = {c: v for c, v in equations[i].items() if v != 0}
        if rhs[i] != 0:
            row[aug] = rhs[i]
        row = elim.reduce(row)
        if not row:
            continue
        if min(row) == aug:
            return None  # 0 = nonzero
        lead = min(row)
        inv = 1 / row[lead]
        elim.pivots[lead] = {c: v * inv for c, v in row.items()}
    solution = {}
    for col in sorted(elim.pivots, reverse=True):
        row = elim.pivots[col]
        value = row.get(aug, _ZERO)
        for c, v in row.items():
            if c != col and c != aug:
                value -= v * solution.get(c, _ZERO)
        if value != 0:
            solution[col] = value
    return solution
