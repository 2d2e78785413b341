"""Massey squares and cubes of homogeneous 2-cocycles, and compensation.

The Massey square of a weight-l 2-cochain with coefficients a_{i,j} is the
3-cochain

    M_{ijk} = a_{i,j} a_{i+j+l,k} + a_{j,k} a_{j+k+l,i} + a_{k,i} a_{k+i+l,j}

sitting in weight 2l.  Squares M_{ijk} with a pair sum i+j, j+k or i+k equal
to 1-2l (indices >= 2, weight l <= -2) can be killed by a 3-coboundary; all
others obstruct.  The cube pairs the cocycle with a compensator alpha of its
square:

    N_{ijk} = a_{i,j} b_{i+j+l,k} + b_{i,j} a_{i+j+2l,k} + cyclic.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import linalg
from .algebra import make_m0
from .cochains import HomCochain, _canonical, _d_terms, differential_at
from .errors import InvalidCompensatorError, ObstructedError, WindowError

_ZERO = Fraction(0)


def _pair(cochain, r, s) -> Fraction:
    """Coefficient lookup with nonpositive indices treated as exact zero."""
    if r <= 0 or s <= 0:
        return _ZERO
    return cochain.coeff(r, s)


def massey_square(omega, i, j, k) -> Fraction:
    """Exact Massey-square coefficient M_{ijk}; alternating in the indices.

    Raises WindowError when the target degree i+j+k+2l is below 1 or a
    needed coefficient lies beyond the cochain window.
    """
    weight = omega.weight
    if i + j + k + 2 * weight < 1:
        raise WindowError("Massey square target degree below the window")
    return (
        _pair(omega, i, j) * _pair(omega, i + j + weight, k)
        + _pair(omega, j, k) * _pair(omega, j + k + weight, i)
        + _pair(omega, k, i) * _pair(omega, k + i + weight, j)
    )


def square_triple_in_window(omega, i, j, k) -> bool:
    """True when every coefficient M_{ijk} needs lies inside the window."""
    weight = omega.weight
    m = omega.max_index
    if max(i, j, k) > m:
        return False
    for a, b in ((i, j), (j, k), (k, i)):
        shifted = a + b + weight
        if shifted > m:  # nonpositive shifted indices read as exact zeros
            return False
    return True


def iter_window_triples(omega, window=None):
    """Ordered triples i<j<k whose Massey square is fully in-window."""
    top = min(window or omega.max_index, omega.max_index)
    for i, j, k in combinations(range(1, top + 1), 3):
        if i + j + k + 2 * omega.weight < 1:
            continue
        if square_triple_in_window(omega, i, j, k):
            yield i, j, k


def all_squares_zero(omega, window=None):
    """Exhaustive in-window check; returns (ok, first witness).

    Requires a cocycle as input only in spirit; the check itself is blind to
    the cocycle property.
    """
    for i, j, k in iter_window_triples(omega, window):
        if massey_square(omega, i, j, k) != 0:
            return False, (i, j, k)
    return True, None


def square_cochain(omega, window=None) -> HomCochain:
    """The Massey square as a weight-2l 3-cochain on the in-window triples."""
    coeffs = {}
    top = min(window or omega.max_index, omega.max_index)
    for i, j, k in iter_window_triples(omega, window=top):
        value = massey_square(omega, i, j, k)
        if value != 0:
            coeffs[(i, j, k)] = value
    return HomCochain(3, 2 * omega.weight, top, coeffs)


def compensable(i, j, k, weight) -> bool:
    """True iff M_{ijk} can be killed by a 3-coboundary at this weight.

    Needs ordered indices i<j<k, all >= 2; one pair sum must equal 1-2l and
    the weight must be <= -2 (never possible for weight >= -1).
    """
    if not (2 <= i < j < k):
        raise ValueError("compensable expects ordered indices 2 <= i < j < k")
    if weight >= -1:
        return False
    target = 1 - 2 * weight
    return i + j == target or j + k == target or i + k == target


def noncompensable_squares_zero(omega, window=None):
    """Check the squares that no 3-coboundary can kill; (ok, witness).

    Triples containing the index 1 are left to the compensator solve:
    d(alpha)(e_1, e_j, e_k) has its own nonzero channels, so such squares
    are never obstructions by themselves.
    """
    weight = omega.weight
    for i, j, k in iter_window_triples(omega, window):
        if i == 1:
            continue
        if compensable(i, j, k, weight):
            continue
        if massey_square(omega, i, j, k) != 0:
            return False, (i, j, k)
    return True, None


def try_compensate(omega, window=None, algebra=None):
    """Weight-2l 2-cochain alpha with d(alpha) = Massey square on the window.

    Raises ObstructedError when a non-compensable square is nonzero; returns
    None when the linear system is inconsistent.  The solution is the
    minimal-support one (lexicographically earliest pivots), which for the
    weight -2 3-family is the bare b_{2,3} compensator.
    """
    ok, witness = noncompensable_squares_zero(omega, window)
    if not ok:
        raise ObstructedError(
            f"non-compensable Massey square at {witness} is nonzero", witness=witness
        )
    top = min(window or omega.max_index, omega.max_index)
    target_weight = 2 * omega.weight
    algebra = algebra or make_m0(3 * top + abs(target_weight) + 4)
    positions = [
        (r, s)
        for r in range(1, top + 1)
        for s in range(r + 1, top + 1)
        if r + s + target_weight >= 1
    ]
    index = {pos: n for n, pos in enumerate(positions)}

    def lookup(indices):
        if any(p <= 0 for p in indices):
            return {}
        key, sign = _canonical(indices)
        if sign == 0:
            return {}
        if key[-1] > top:
            raise WindowError("compensator reference beyond window")
        if sum(key) + target_weight <= 0:
            return {}
        return {key: Fraction(sign)}

    equations, rhs = [], []
    for i, j, k in iter_window_triples(omega, window=top):
        row = {}
        try:
            for mult, form in _d_terms(algebra, target_weight, (i, j, k), lookup):
                for pos, sgn in form.items():
                    new = row.get(pos, _ZERO) + mult * sgn
                    if new == 0:
                        row.pop(pos, None)
                    else:
                        row[pos] = new
        except WindowError:
            continue
        value = massey_square(omega, i, j, k)
        if not row and value == 0:
            continue
        equations.append({index[pos]: v for pos, v in row.items()})
        rhs.append(value)
    solution = linalg.solve_sparse(equations, rhs, len(positions))
    if solution is None:
        return None
    coeffs = {positions[n]: v for n, v in solution.items()}
    return HomCochain(2, target_weight, top, coeffs)


class CubeInput:
    """A 2-cocycle omega with a verified compensator alpha of its square."""

    __slots__ = ("omega", "alpha")

    def __init__(self, omega, alpha, window=None, algebra=None, verify=True):
        if alpha.weight != 2 * omega.weight:
            raise InvalidCompensatorError("compensator weight must be 2l")
        if verify:
            top = min(window or alpha.max_index, alpha.max_index, omega.max_index)
            algebra = algebra or make_m0(3 * top + abs(alpha.weight) + 4)
            for i, j, k in iter_window_triples(omega, window=top - 1):
                try:
                    lhs = differential_at(alpha, (i, j, k), algebra)
                    rhs = massey_square(omega, i, j, k)
                except WindowError:
                    continue
                if lhs != rhs:
                    raise InvalidCompensatorError(
                        f"d(alpha) != Massey square at {(i, j, k)}"
                    )
        self.omega = omega
        self.alpha = alpha


def massey_cube(cube: CubeInput, i, j, k) -> Fraction:
    """Exact Massey-cube coefficient N_{ijk}.

    Index shifts are weight-general: i+j+l for omega-arguments fed to alpha,
    i+j+2l for alpha-arguments fed to omega.
    """
    a, b = cube.omega, cube.alpha
    l = cube.omega.weight
    total = _ZERO
    for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
        total += _pair(a, x, y) * _pair(b, x + y + l, z)
        total += _pair(b, x, y) * _pair(a, x + y + 2 * l, z)
    return total


def all_cubes_zero(cube: CubeInput, window=None):
    """(ok, witness) over in-window triples for the cube."""
    omega, alpha = cube.omega, cube.alpha
    top = min(window or omega.max_index, omega.max_index, alpha.max_index)
    for i, j, k in combinations(range(1, top + 1), 3):
        try:
            value = massey_cube(cube, i, j, k)
        except WindowError:
            continue
        if value != 0:
            return False, (i, j, k)
    return True, None


def relation_defect(omega, i, j, k) -> Fraction:
    """M_{ijk} + M_{i(j-1)(k+1)} + M_{(i+1)(j-1)k} - M_{i(j-1)k}.

    Identically zero for every cocycle; the identity only uses the stable
    recurrence, so indices must satisfy i,k >= 2, j >= 3 with all four
    triples in the window.
    """
    if i < 2 or k < 2 or j < 3:
        raise ValueError("relation_defect needs i,k >= 2 and j >= 3")
    return (
        massey_square(omega, i, j, k)
        + massey_square(omega, i, j - 1, k + 1)
        + massey_square(omega, i + 1, j - 1, k)
        - massey_square(omega, i, j - 1, k)
    )


def bilinear_square(omega, eta, i, j, k) -> Fraction:
    """Polarization B(omega, eta)_{ijk} with M(w+e) = M(w) + B(w,e) + M(e)."""
    l = omega.weight
    if eta.weight != l:
        raise ValueError("bilinear_square needs equal weights")
    total = _ZERO
    for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
        total += _pair(omega, x, y) * _pair(eta, x + y + l, z)
        total += _pair(eta, x, y) * _pair(omega, x + y + l, z)
    return total
