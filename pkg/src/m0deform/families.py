"""The k-families of 2-cocycles and the diagonal parametrization.

In the stable range a homogeneous 2-cochain a_{i,j} is a cocycle exactly
when a_{i+1,j} + a_{i,j+1} = a_{i,j}; seeding the diagonal pair
a_{k,k+1} = a_{k,k+2} = 1 (all other diagonals zero) determines the unique
"k-family".  The same recurrence driven by general diagonal values
u_2, u_3, ... gives the linear parametrization used by the obstruction
solver, with the closed-form coefficient

    a_{i,j} = sum_m (-1)^{m-i} u_m binom(j-m-1, m-i)

equivalent to the binomial expression proved for the m-family columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .cochains import HomCochain
from .errors import ContradictoryFamilyError
from .algebra import rat

_ZERO = Fraction(0)


@dataclass(frozen=True)
class FamilySpec:
    """k-family request: seed column k, weight, and coefficient window."""

    k: int
    weight: int
    max_index: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("family index k must be >= 2")
        if self.max_index < self.k + 2:
            raise ValueError("max_index too small to seed the family")


@dataclass(frozen=True)
class DiagonalParams:
    """Diagonal seed values u_2 = a_{2,3}, u_3 = a_{3,4}, ... (index base 2)."""

    u: tuple

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(rat(x) for x in self.u))

    def value(self, m) -> Fraction:
        n = m - 2
        if 0 <= n < len(self.u):
            return self.u[n]
        return _ZERO

    @property
    def last_index(self) -> int:
        return len(self.u) + 1

    def __add__(self, other):
        length = max(len(self.u), len(other.u))
        return DiagonalParams(
            tuple(
                self.value(m + 2) + other.value(m + 2) for m in range(length)
            )
        )


def validity_check(spec: FamilySpec):
    """(ok, reason): the k-family is contradictory at weight l <= -2k.

    At those weights the family carries a nonzero a_{i,j} on the line
    i + j = -l + 1, which the cocycle equations force to zero.
    """
    if spec.weight <= -2 * spec.k:
        return False, "2.2-contradiction"
    return True, None


def closed_form_coeff(m, r, k) -> Fraction:
    """Column coefficient a_{m-r,k} of the m-family: (-1)^r binom(k-m-1, r).

    Zero below the threshold k < m+r+1 (never evaluates factorials of
    negative arguments).
    """
    if not 0 <= r <= m - 2:
        raise ValueError(f"row offset r={r} out of range for the {m}-family")
    if k < m + r + 1:
        return _ZERO
    sign = -1 if r % 2 else 1
    return Fraction(sign * comb(k - m - 1, r))


def _rhs(weight, i, j, a_get, a1_get):
    """Right-hand side of the cocycle equation on the pair (i, j), i < j.

    a_{i+1,j} + a_{i,j+1} = a_{i,j} + [j+l=0] a_{1,j} - [i+l=0] a_{1,i}
    in the range i+j+l >= 2, and = 0 for i+j+l in {0, 1}.
    """
    s = i + j + weight
    if s >= 2:
        value = a_get(i, j)
        if j + weight == 0:
            value += a1_get(j)
        if i + weight == 0:
            value -= a1_get(i)
        return value
    return _ZERO


def complete_cocycle(weight, seeds, a1=None, max_index=40) -> HomCochain:
    """Unique cochain solving the recurrence from diagonal and a_{1,*} data.

    `seeds` maps m -> a_{m,m+1}; `a1` maps j -> a_{1,j}.  Coefficients with
    target degree <= 0 are forced to zero; whether the result actually is a
    cocycle (the 2.2 constraints can obstruct it in deep negative weight)
    is the caller's concern.
    """
    a1 = {int(j): rat(v) for j, v in (a1 or {}).items() if rat(v) != 0}
    seeds = {int(m): rat(v) for m, v in seeds.items()}
    table = {}

    def forced_zero(i, j):
        return i + j + weight <= 0

    def a_get(i, j):
        if i <= 0 or j <= 0 or i == j:
            return _ZERO
        if i > j:
            return -a_get(j, i)
        if i == 1:
            return a1.get(j, _ZERO) if 1 + j + weight > 0 else _ZERO
        return table.get((i, j), _ZERO)

    def a1_get(j):
        return a1.get(j, _ZERO) if 1 + j + weight > 0 else _ZERO

    # level d = j - i; d=1 seeds, d=2 from the (i, i+1) equations, then upward
    for i in range(2, max_index):
        if not forced_zero(i, i + 1):
            v = seeds.get(i, _ZERO)
            if v != 0:
                table[(i, i + 1)] = v
    for d in range(2, max_index - 1):
        for i in range(2, max_index + 1 - d):
            j = i + d
            if forced_zero(i, j):
                continue
            # from the equation on (i, j-1): a_{i,j} = rhs(i,j-1) - a_{i+1,j-1}
            value = _rhs(weight, i, j - 1, a_get, a1_get) - a_get(i + 1, j - 1)
            if value != 0:
                table[(i, j)] = value
    coeffs = {(1, j): v for j, v in a1.items() if j <= max_index}
    coeffs.update({pos: v for pos, v in table.items()})
    return HomCochain(2, weight, max_index, coeffs)


def k_family(spec: FamilySpec, allow_contradictory=False) -> HomCochain:
    """The k-family cocycle generated by the recurrence from its seed pair."""
    ok, reason = validity_check(spec)
    if not ok and not allow_contradictory:
        raise ContradictoryFamilyError(
            f"the {spec.k}-family is contradictory at weight {spec.weight} ({reason})"
        )
    return complete_cocycle(
        spec.weight, {spec.k: Fraction(1)}, a1=None, max_index=spec.max_index
    )


def from_diagonal(params: DiagonalParams, weight, max_index) -> HomCochain:
    """Closed-form evaluation of the diagonal parametrization.

    All a_{1,*} vanish; forbidden coefficients (target degree <= 0) are
    forced to zero afterward, which matters only for weight <= -3.
    """
    coeffs = {}
    for i in range(2, max_index):
        for j in range(i + 1, max_index + 1):
            if i + j + weight <= 0:
                continue
            value = _ZERO
            for m in range(i, (i + j - 1) // 2 + 1):
                u = params.value(m)
                if u == 0:
                    continue
                sign = -1 if (m - i) % 2 else 1
                value += sign * u * comb(j - m - 1, m - i)
            if value != 0:
                coeffs[(i, j)] = value
    return HomCochain(2, weight, max_index, coeffs)


def diagonal_coefficient(m, i, j) -> Fraction:
    """Coefficient of u_m in a_{i,j} under the diagonal parametrization."""
    if i > j:
        return -diagonal_coefficient(m, j, i)
    if i < 2 or i == j or m < i or j - 2 * m + i - 1 < 0:
        return _ZERO
    sign = -1 if (m - i) % 2 else 1
    return Fraction(sign * comb(j - m - 1, m - i))
