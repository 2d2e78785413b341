"""Truncated N-graded Lie algebras with one-dimensional homogeneous components.

The bracket is a sparse table of exact rational structure constants, stored
for index pairs i < j only and extended by antisymmetry.  A pair (i, j) is
evaluable only when every potentially nonzero result degree stays below the
truncation; beyond that the bracket is undefined (WindowError), never
silently zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import InvalidRescaleError, InvalidTruncationError, WindowError

Rational = Fraction


def rat(x) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {x!r}")


class GradedAlgebra:
    """Truncated graded Lie algebra with basis e_1 .. e_N."""

    __slots__ = ("truncation", "name", "weight_tag", "_table", "_max_weight")

    def __init__(self, truncation, entries, name=None, weight_tag=None):
        if truncation < 1:
            raise InvalidTruncationError("truncation degree must be positive")
        self.truncation = int(truncation)
        self.name = name
        self.weight_tag = weight_tag
        table = {}
        max_weight = 0
        for (i, j), column in entries.items():
            if not (1 <= i < j <= self.truncation):
                raise ValueError(f"bracket entry at ({i},{j}) out of range")
            col = {}
            for k, c in column.items():
                c = rat(c)
                if c == 0:
                    continue
                if not (1 <= k <= self.truncation):
                    raise ValueError(f"result degree {k} at ({i},{j}) out of range")
                col[k] = c
                max_weight = max(max_weight, k - i - j)
            if col:
                table[(i, j)] = col
        self._table = table
        self._max_weight = max_weight

    # -- bracket evaluation -------------------------------------------------

    def in_window(self, i, j) -> bool:
        """True when every possible result degree of [e_i, e_j] fits under N."""
        if not (1 <= i <= self.truncation and 1 <= j <= self.truncation):
            return False
        return i == j or i + j + self._max_weight <= self.truncation

    def bracket(self, i, j):
        """[e_i, e_j] as a sparse {degree: coefficient} map."""
        if not (1 <= i <= self.truncation and 1 <= j <= self.truncation):
            raise ValueError(f"basis index out of range: ({i},{j})")
        if i == j:
            return {}
        if i + j + self._max_weight > self.truncation:
            raise WindowError(
                f"bracket ({i},{j}) undefined at truncation {self.truncation}"
            )
        if i < j:
            return dict(self._table.get((i, j), {}))
        col = self._table.get((j, i), {})
        return {k: -c for k, c in col.items()}

    def bracket_vec(self, vec_a, vec_b):
        """Bracket of two sparse vectors {degree: coefficient}."""
        out = {}
        for i, a in vec_a.items():
            if a == 0:
                continue
            for j, b in vec_b.items():
                if b == 0:
                    continue
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, Fraction(0)) + a * b * c
        return {k: c for k, c in out.items() if c != 0}

    # -- structure ----------------------------------------------------------

    def entries(self):
        """Sorted iterator of (i, j, k, coefficient) over stored data."""
        for (i, j) in sorted(self._table):
            col = self._table[(i, j)]
            for k in sorted(col):
                yield i, j, k, col[k]

    def table(self):
        """Copy of the sparse bracket table keyed by (i, j), i < j."""
        return {pair: dict(col) for pair, col in self._table.items()}

    def __eq__(self, other):
        if not isinstance(other, GradedAlgebra):
            return NotImplemented
        return self.truncation == other.truncation and self._table == other._table

    def __hash__(self):
        return hash((self.truncation, tuple(self.entries())))

    def __repr__(self):
        label = self.name or "GradedAlgebra"
        return f"<{label} N={self.truncation} entries={sum(len(c) for c in self._table.values())}>"

    def check_weight_tag(self):
        """Verify every entry sits in degree i + j + weight_tag (named algebras)."""
        if self.weight_tag is None:
            return True
        for i, j, k, _ in self.entries():
            if k != i + j + self.weight_tag:
                return False
        return True

    # -- serialization ------------------------------------------------------

    def to_json_obj(self):
        return {
            "N": self.truncation,
            "entries": [
                {
                    "i": i,
                    "j": j,
                    "k": k,
                    "num": str(c.numerator),
                    "den": str(c.denominator),
                }
                for i, j, k, c in self.entries()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj, name=None, weight_tag=None):
        entries = {}
        for e in obj["entries"]:
            i, j, k = int(e["i"]), int(e["j"]), int(e["k"])
            c = Fraction(int(e["num"]), int(e["den"]))
            entries.setdefault((i, j), {})[k] = c
        return cls(int(obj["N"]), entries, name=name, weight_tag=weight_tag)

    @classmethod
    def from_json(cls, text, name=None, weight_tag=None):
        return cls.from_json_obj(json.loads(text), name=name, weight_tag=weight_tag)


@dataclass(frozen=True)
class BasisRescale:
    """Diagonal change of basis e~_i = scale(i) * e_i, all factors nonzero."""

    scale: dict

    def __post_init__(self):
        for i, s in self.scale.items():
            if rat(s) == 0:
                raise InvalidRescaleError(f"zero scale factor at index {i}")

    def factor(self, i) -> Fraction:
        try:
            return rat(self.scale[i])
        except KeyError:
            raise InvalidRescaleError(f"no scale factor for index {i}") from None

    def inverse(self) -> "BasisRescale":
        return BasisRescale({i: 1 / rat(s) for i, s in self.scale.items()})


def identity_rescale(n) -> BasisRescale:
    return BasisRescale({i: Fraction(1) for i in range(1, n + 1)})


def inverse_factorial_rescale(n) -> BasisRescale:
    """e~_i = e_i / (i-2)! for i >= 2 (and e~_1 = e_1).

    In this basis m0 reads [e~_1, e~_i] = (i-1) e~_{i+1}.
    """
    scale = {1: Fraction(1)}
    for i in range(2, n + 1):
        scale[i] = Fraction(1, factorial(i - 2))
    return BasisRescale(scale)


def rescale(algebra: GradedAlgebra, s: BasisRescale) -> GradedAlgebra:
    """Transform the structure constants into the rescaled basis."""
    entries = {}
    for i, j, k, c in algebra.entries():
        value = c * s.factor(i) * s.factor(j) / s.factor(k)
        entries.setdefault((i, j), {})[k] = value
    return GradedAlgebra(
        algebra.truncation,
        entries,
        name=f"{algebra.name}~" if algebra.name else None,
        weight_tag=algebra.weight_tag,
    )


# -- named constructors -----------------------------------------------------


def make_m0(n) -> GradedAlgebra:
    """m0: [e_1, e_i] = e_{i+1} for i >= 2, all other brackets zero."""
    if n < 3:
        raise InvalidTruncationError("m0 needs truncation degree >= 3")
    entries = {(1, i): {i + 1: Fraction(1)} for i in range(2, n)}
    return GradedAlgebra(n, entries, name="m0", weight_tag=0)


def make_m2(n) -> GradedAlgebra:
    """m2: the m0 relations plus [e_2, e_j] = e_{j+2} for j >= 3."""
    if n < 5:
        raise InvalidTruncationError("m2 needs truncation degree >= 5")
    entries = {(1, i): {i + 1: Fraction(1)} for i in range(2, n)}
    for j in range(3, n - 1):
        entries[(2, j)] = {j + 2: Fraction(1)}
    return GradedAlgebra(n, entries, name="m2", weight_tag=0)


def make_L1(n) -> GradedAlgebra:
    """L1 (positive Witt part): [e_i, e_j] = (j - i) e_{i+j}."""
    if n < 3:
        raise InvalidTruncationError("L1 needs truncation degree >= 3")
    entries = {}
    for i in range(1, n):
        for j in range(i + 1, n - i + 1):
            entries[(i, j)] = {i + j: Fraction(j - i)}
    return GradedAlgebra(n, entries, name="L1", weight_tag=0)


def jacobi_defect(algebra: GradedAlgebra, i, j, k):
    """[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j], sparse over degrees.

    Raises WindowError when a nested bracket leaves the truncation window,
    which is reported distinctly from a zero defect.
    """
    if len({i, j, k}) != 3:
        raise ValueError("jacobi_defect expects three distinct indices")
    total = {}
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        inner = algebra.bracket(a, b)
        for d, coeff in inner.items():
            for e, c2 in algebra.bracket(d, c).items():
                total[e] = total.get(e, Fraction(0)) + coeff * c2
    return {deg: c for deg, c in total.items() if c != 0}
