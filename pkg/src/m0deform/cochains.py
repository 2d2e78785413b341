"""Homogeneous cochains on m0 and the Chevalley-Eilenberg differential.

A homogeneous cochain of degree q and weight l sends (e_{i_1}, .., e_{i_q})
to a rational multiple of e_{i_1+..+i_q+l}.  Coefficients are stored on
strictly increasing index tuples and extended antisymmetrically; positions
whose target degree i_1+..+i_q+l is <= 0 are forbidden (forced zero).

Sign convention for the differential (matching the adjoint-module complex):

    (dc)(x_1,..,x_{q+1}) = sum_{r<s} (-1)^{r+s-1} c([x_r,x_s], ..rest..)
                         + sum_r    (-1)^r [x_r, c(..rest..)]
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import linalg
from .algebra import GradedAlgebra, make_m0, rat
from .errors import (
    InvalidTruncationError,
    NotACocycleError,
    UnsupportedDegreeError,
    WindowError,
)

_ZERO = Fraction(0)


def _canonical(indices):
    """Sort an index tuple; returns (sorted tuple, sign) or (None, 0) if repeated."""
    n = len(indices)
    if n == 1:
        return tuple(indices), 1
    if len(set(indices)) != n:
        return None, 0
    order = sorted(range(n), key=lambda p: indices[p])
    # parity of the sorting permutation
    sign = 1
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        p = start
        while not seen[p]:
            seen[p] = True
            p = order[p]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return tuple(indices[p] for p in order), sign


class HomCochain:
    """Sparse homogeneous cochain of degree q in {0,1,2,3} and weight l."""

    __slots__ = ("degree", "weight", "max_index", "coeffs")

    def __init__(self, degree, weight, max_index, coeffs=None):
        if degree not in (0, 1, 2, 3):
            raise UnsupportedDegreeError(f"unsupported cochain degree {degree}")
        if max_index < 1:
            raise ValueError("max_index must be positive")
        self.degree = int(degree)
        self.weight = int(weight)
        self.max_index = int(max_index)
        clean = {}
        for pos, value in (coeffs or {}).items():
            pos = tuple(int(i) for i in pos)
            value = rat(value)
            if value == 0:
                continue
            if len(pos) != max(degree, 1):
                raise ValueError(f"position {pos} has wrong arity for degree {degree}")
            if any(p < 1 for p in pos) or list(pos) != sorted(set(pos)):
                raise ValueError(f"position {pos} is not strictly increasing")
            if pos[-1] > self.max_index:
                raise ValueError(f"position {pos} exceeds max_index {self.max_index}")
            if degree == 0 and pos[0] != self.weight:
                raise ValueError("degree-0 cochain of weight l lives at index l")
            if degree >= 1 and sum(pos) + self.weight <= 0:
                raise ValueError(f"forbidden coefficient at {pos} (target degree <= 0)")
            clean[pos] = value
        self.coeffs = clean

    # -- coefficient access ---------------------------------------------------

    def coeff(self, *indices) -> Fraction:
        """Coefficient at an arbitrary index tuple.

        Nonpositive indices and repeated indices give exact zero, as do
        forbidden positions; indices beyond max_index raise WindowError.
        """
        if any(p <= 0 for p in indices):
            return _ZERO
        pos, sign = _canonical(indices)
        if sign == 0:
            return _ZERO
        if pos[-1] > self.max_index:
            raise WindowError(f"coefficient {indices} beyond window {self.max_index}")
        if self.degree >= 1 and sum(pos) + self.weight <= 0:
            return _ZERO
        return sign * self.coeffs.get(pos, _ZERO)

    def items(self):
        for pos in sorted(self.coeffs):
            yield pos, self.coeffs[pos]

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- arithmetic -------------------------------------------------------

    def _assert_compatible(self, other):
        if self.degree != other.degree or self.weight != other.weight:
            raise ValueError("cochain degree/weight mismatch")

    def __add__(self, other):
        self._assert_compatible(other)
        out = dict(self.coeffs)
        for pos, v in other.coeffs.items():
            out[pos] = out.get(pos, _ZERO) + v
        return HomCochain(
            self.degree, self.weight, min(self.max_index, other.max_index), out
        )

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        scalar = rat(scalar)
        return HomCochain(
            self.degree,
            self.weight,
            self.max_index,
            {pos: scalar * v for pos, v in self.coeffs.items()},
        )

    def __neg__(self):
        return (-1) * self

    def __eq__(self, other):
        if not isinstance(other, HomCochain):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.weight == other.weight
            and self.max_index == other.max_index
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.degree, self.weight, self.max_index, tuple(self.items())))

    def __repr__(self):
        return (
            f"<HomCochain q={self.degree} l={self.weight} "
            f"window={self.max_index} nnz={len(self.coeffs)}>"
        )

    def agrees_with(self, other) -> bool:
        """Coefficient equality on the common index window."""
        self._assert_compatible(other)
        window = min(self.max_index, other.max_index)
        mine = {p: v for p, v in self.coeffs.items() if p[-1] <= window}
        theirs = {p: v for p, v in other.coeffs.items() if p[-1] <= window}
        return mine == theirs

    def restricted(self, max_index) -> "HomCochain":
        return HomCochain(
            self.degree,
            self.weight,
            max_index,
            {p: v for p, v in self.coeffs.items() if p[-1] <= max_index},
        )

    # -- serialization ------------------------------------------------------

    def to_json_obj(self):
        return {
            "q": self.degree,
            "l": self.weight,
            "max_index": self.max_index,
            "coeffs": [
                {"idx": list(pos), "num": str(v.numerator), "den": str(v.denominator)}
                for pos, v in self.items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj):
        coeffs = {
            tuple(e["idx"]): Fraction(int(e["num"]), int(e["den"]))
            for e in obj["coeffs"]
        }
        return cls(int(obj["q"]), int(obj["l"]), int(obj["max_index"]), coeffs)

    @classmethod
    def from_json(cls, text):
        return cls.from_json_obj(json.loads(text))


@dataclass(frozen=True)
class NamedGenerator:
    """A named H^1 generator with its explicit cochain representative."""

    name: str
    weight: int
    cochain: HomCochain


@dataclass(frozen=True)
class CohomologyReport:
    degree: int
    weight: int
    truncation: int
    dim_window: int
    stable: bool
    probe_dims: tuple

    def to_json_obj(self):
        return {
            "q": self.degree,
            "l": self.weight,
            "N": self.truncation,
            "dim": self.dim_window,
            "stable": self.stable,
            "probe_dims": list(self.probe_dims),
        }


# -- differential ------------------------------------------------------------


def _default_algebra(cochain) -> GradedAlgebra:
    # Evaluating d on a (q+1)-tuple needs adjoint argument degrees up to
    # q * max_index + weight, so the ambient m0 must extend well past the
    # coefficient window.
    size = (cochain.degree + 1) * cochain.max_index + abs(cochain.weight) + 4
    return make_m0(max(size, 8))


def _require_weight0(algebra):
    if algebra.weight_tag == 0:
        return
    for i, j, k, _ in algebra.entries():
        if k != i + j:
            raise ValueError("differential needs a pure weight-0 graded base algebra")


def _d_terms(algebra, weight, tpl, lookup):
    """Yield (rational multiplier, lookup value) term pairs of (dc)(e_tpl)."""
    n = len(tpl)
    for r in range(n):
        for s in range(r + 1, n):
            sign = 1 if (r + s) % 2 == 1 else -1
            rest = tpl[:r] + tpl[r + 1 : s] + tpl[s + 1 :]
            for d, cb in algebra.bracket(tpl[r], tpl[s]).items():
                yield sign * cb, lookup((d,) + rest)
    for r in range(n):
        sign = -1 if r % 2 == 0 else 1
        rest = tpl[:r] + tpl[r + 1 :]
        target = sum(rest) + weight
        if target < 1:
            continue
        value = lookup(rest)
        if not value:
            continue
        if target > algebra.truncation:
            raise WindowError(f"adjoint argument degree {target} beyond truncation")
        for _, cb in algebra.bracket(tpl[r], target).items():
            yield sign * cb, value


def differential_at(cochain, indices, algebra=None) -> Fraction:
    """Exact coefficient of d(cochain) at one index tuple (any degree <= 3).

    Raises WindowError when the evaluation needs out-of-window data.
    """
    algebra = algebra or _default_algebra(cochain)
    _require_weight0(algebra)
    pos, outer_sign = _canonical(indices)
    if outer_sign == 0:
        return _ZERO
    acc = _ZERO
    lookup = lambda idx: cochain.coeff(*idx)
    for mult, value in _d_terms(algebra, cochain.weight, pos, lookup):
        acc += mult * value
    return outer_sign * acc


def differential(cochain, algebra=None, max_index=None) -> HomCochain:
    """Chevalley-Eilenberg differential; degree q -> q+1, same weight.

    The output window is reduced to max_index - 1 so every coefficient is
    fully determined by in-window data.
    """
    if cochain.degree >= 3:
        raise UnsupportedDegreeError("differential supports cochain degrees 0..2")
    algebra = algebra or _default_algebra(cochain)
    _require_weight0(algebra)
    out_window = max_index if max_index is not None else cochain.max_index - 1
    out_window = min(out_window, algebra.truncation)
    if out_window < 1:
        raise InvalidTruncationError("window too small for a differential")
    coeffs = {}
    if cochain.degree == 0:
        # d(x)(y) = [x, y]
        for (i,), v in cochain.coeffs.items():
            for j in range(1, out_window + 1):
                if i == j:
                    continue
                if i + j > algebra.truncation:
                    break
                for k, cb in algebra.bracket(i, j).items():
                    if k == j + cochain.weight:
                        coeffs[(j,)] = coeffs.get((j,), _ZERO) + v * cb
        return HomCochain(1, cochain.weight, out_window, coeffs)

    arity = cochain.degree + 1
    top = out_window
    for tpl in combinations(range(1, out_window + 1), arity):
        if tpl[-1] > top or sum(tpl) + cochain.weight <= 0:
            continue
        try:
            value = differential_at(cochain, tpl, algebra)
        except WindowError:
            # Honest truncation: shrink the window past the first unreachable tuple.
            top = max(tpl[-1] - 1, 1)
            continue
        if value != 0:
            coeffs[tpl] = value
    coeffs = {p: v for p, v in coeffs.items() if p[-1] <= top}
    return HomCochain(cochain.degree + 1, cochain.weight, top, coeffs)


class CocycleCheck(tuple):
    """(ok, witness) pair that is truthy exactly when the check passed."""

    __slots__ = ()

    def __new__(cls, ok, witness=None):
        return super().__new__(cls, (bool(ok), witness))

    @property
    def ok(self):
        return self[0]

    @property
    def witness(self):
        return self[1]

    def __bool__(self):
        return self[0]


def is_cocycle(cochain, algebra=None, window=None) -> CocycleCheck:
    """True iff the differential vanishes on every in-window tuple.

    On failure the witness is the first violating tuple in lexicographic
    order.  Tuples needing out-of-window data are skipped, not treated as
    violations.
    """
    if cochain.degree not in (1, 2):
        raise UnsupportedDegreeError("is_cocycle supports degrees 1 and 2")
    algebra = algebra or _default_algebra(cochain)
    _require_weight0(algebra)
    top = window if window is not None else cochain.max_index - 1
    top = min(top, algebra.truncation)
    for tpl in combinations(range(1, top + 1), cochain.degree + 1):
        try:
            value = differential_at(cochain, tpl, algebra)
        except WindowError:
            continue
        if value != 0:
            return CocycleCheck(False, tpl)
    return CocycleCheck(True, None)


# -- cohomology dimensions ----------------------------------------------------


def _positions(q, weight, window):
    """Coefficient positions of C^q_weight with all indices <= window."""
    if q == 1:
        return [(i,) for i in range(1, window + 1) if i + weight >= 1]
    if q == 2:
        return [
            (i, j)
            for i in range(1, window + 1)
            for j in range(i + 1, window + 1)
            if i + j + weight >= 1
        ]
    raise UnsupportedDegreeError(f"no coefficient window for degree {q}")


def _symbolic_rows(algebra, q, weight, window):
    """Rows of d: C^q -> C^{q+1} as sparse {position: Fraction} maps.

    Rows are indexed by (q+1)-tuples whose references stay within `window`.
    """
    rows = []

    def lookup(indices):
        if any(p <= 0 for p in indices):
            return {}
        pos, sign = _canonical(indices)
        if sign == 0:
            return {}
        if pos[-1] > window:
            raise WindowError(f"reference {pos} beyond variable window")
        if sum(pos) + weight <= 0:
            return {}
        return {pos: Fraction(sign)}

    for tpl in combinations(range(1, window), q + 1):
        if sum(tpl) + weight <= 0:
            continue
        row = {}
        try:
            for mult, form in _d_terms(algebra, weight, tpl, lookup):
                for pos, sgn in form.items():
                    new = row.get(pos, _ZERO) + mult * sgn
                    if new == 0:
                        row.pop(pos, None)
                    else:
                        row[pos] = new
        except WindowError:
            continue
        if row:
            rows.append(row)
    return rows


def _coboundary_columns(algebra, q, weight, window):
    """d of a basis of C^{q-1} (one window step wider), restricted to C^q window."""
    columns = []
    if q == 1:
        if weight >= 1 and weight <= algebra.truncation:
            source = HomCochain(0, weight, weight, {(weight,): 1})
            image = differential(source, algebra, max_index=window)
            columns.append(dict(image.coeffs))
        return columns
    if q == 2:
        for s in range(max(1, 1 - weight), window + 2):
            if s > algebra.truncation:
                break
            # window+2 declares the cochain zero (not undefined) past its support
            source = HomCochain(1, weight, max(window + 2, s), {(s,): 1})
            image = differential(source, algebra, max_index=window)
            if image.coeffs:
                columns.append(dict(image.coeffs))
        return columns
    raise UnsupportedDegreeError(f"no coboundary columns for degree {q}")


def _index_rows(rows, positions):
    index = {pos: n for n, pos in enumerate(positions)}
    out = []
    for row in rows:
        out.append({index[pos]: v for pos, v in row.items()})
    return out


def _dim_at(q, weight, truncation):
    window = truncation - abs(weight) - 2
    # ambient large enough that no equation on the coefficient window is
    # dropped at the truncation boundary (avoids spurious boundary classes)
    algebra = make_m0((q + 1) * window + abs(weight) + 4)
    positions = _positions(q, weight, window)
    rows = _index_rows(_symbolic_rows(algebra, q, weight, window), positions)
    kernel = len(positions) - linalg.rank(rows)
    image = _index_rows(
        [
            {p: v for p, v in col.items() if p in set(positions)}
            for col in _coboundary_columns(algebra, q, weight, window)
        ],
        positions,
    )
    return kernel - linalg.rank(image)


def cohomology_dim(q, weight, truncation) -> CohomologyReport:
    """Window dimension of H^q_weight(m0, m0), with a stability probe.

    The dimension is recomputed at truncation+5 and truncation+10; `stable`
    means all three agree.
    """
    if q not in (1, 2):
        raise UnsupportedDegreeError("cohomology_dim supports q in {1, 2}")
    if truncation < max(10, 3 * abs(weight) + 10):
        raise InvalidTruncationError(
            f"truncation {truncation} too small for weight {weight}"
        )
    probes = tuple(_dim_at(q, weight, truncation + step) for step in (0, 5, 10))
    return CohomologyReport(
        degree=q,
        weight=weight,
        truncation=truncation,
        dim_window=probes[0],
        stable=len(set(probes)) == 1,
        probe_dims=probes,
    )


# -- explicit generators and the degree-1 bracket ------------------------------


def h1_generators(weight, max_index=32):
    """Explicit representatives of H^1_weight per the closed formulas.

    Weight 0 carries omega1, omega2; weight 1 the surviving generator gamma;
    weight >= 2 the shift alpha_l (free scalars normalized to 1); negative
    weights have no cohomology.
    """
    if weight <= -1:
        return []
    if weight == 0:
        omega1 = HomCochain(
            1,
            0,
            max_index,
            {(1,): 1, **{(k,): k - 2 for k in range(3, max_index + 1)}},
        )
        omega2 = HomCochain(
            1, 0, max_index, {(k,): 1 for k in range(2, max_index + 1)}
        )
        return [
            NamedGenerator("omega1", 0, omega1),
            NamedGenerator("omega2", 0, omega2),
        ]
    if weight == 1:
        gamma = HomCochain(1, 1, max_index, {(1,): 1})
        return [NamedGenerator("gamma", 1, gamma)]
    alpha = HomCochain(
        1, weight, max_index, {(k,): 1 for k in range(2, max_index + 1)}
    )
    return [NamedGenerator(f"alpha_{weight}", weight, alpha)]


def nr_bracket_deg1(a, b) -> HomCochain:
    """Commutator bracket [a,b](x) = a(b(x)) - b(a(x)) on degree-1 cochains."""
    if a.degree != 1 or b.degree != 1:
        raise UnsupportedDegreeError("nr_bracket_deg1 needs two degree-1 cochains")
    weight = a.weight + b.weight
    window = min(a.max_index, b.max_index) - max(a.weight, b.weight, 0)
    coeffs = {}
    for k in range(1, window + 1):
        value = a.coeff(k + b.weight) * b.coeff(k) - b.coeff(k + a.weight) * a.coeff(k)
        if value != 0 and k + weight >= 1:
            coeffs[(k,)] = value
    return HomCochain(1, weight, window, coeffs)


# -- coboundary normalization ---------------------------------------------------


def coboundary_basis(weight, window, algebra=None, keep_linked=False):
    """The 2-coboundaries d(delta_s) restricted to the window, as cochains.

    For weight <= -2 the basis vector at s = 1-weight trades the a_{1,-l}
    coefficient against the whole (-l+1)-column (it cannot zero both), so it
    is excluded from the normalization unless keep_linked is set.
    """
    algebra = algebra or make_m0(2 * window + abs(weight) + 4)
    out = []
    for s in range(max(1, 1 - weight), window + 2):
        if s > algebra.truncation:
            break
        if not keep_linked and weight <= -2 and s == 1 - weight:
            continue
        source = HomCochain(1, weight, max(window + 2, s), {(s,): 1})
        image = differential(source, algebra, max_index=window)
        if not image.is_zero():
            out.append(image)
    return out


def reduce_mod_coboundary(cochain, algebra=None) -> HomCochain:
    """Canonical representative of a cocycle's class, per the a_{1,i} gauge.

    Degree 2: every a_{1,i} with i >= max(2, 1-l) is zeroed (the linked
    coefficient a_{1,-l} at weight l <= -2 is preserved).  Degree 1 with
    weight >= 1: the single coboundary direction is removed.
    """
    check = is_cocycle(cochain, algebra=algebra)
    if not check:
        raise NotACocycleError("input is not a cocycle", witness=check.witness)
    window = cochain.max_index
    if cochain.degree == 1:
        if cochain.weight < 1:
            return cochain
        algebra = algebra or make_m0(2 * window + abs(cochain.weight) + 4)
        source = HomCochain(0, cochain.weight, cochain.weight, {(cochain.weight,): 1})
        basis = [differential(source, algebra, max_index=window)]
    else:
        basis = coboundary_basis(cochain.weight, window, algebra=algebra)
    positions = sorted(set().union(*(b.coeffs for b in basis), cochain.coeffs))
    index = {pos: n for n, pos in enumerate(positions)}
    rows = [{index[p]: v for p, v in b.coeffs.items()} for b in basis]
    vec = {index[p]: v for p, v in cochain.coeffs.items()}
    reduced = linalg.reduce_mod_span(vec, rows)
    back = {positions[n]: v for n, v in reduced.items()}
    return HomCochain(cochain.degree, cochain.weight, window, back)
