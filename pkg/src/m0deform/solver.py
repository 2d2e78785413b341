"""Homogeneous quadratic Massey-vanishing systems and their exact solution.

Equations are Massey squares M_{ijk} expanded through the diagonal
parametrization into quadratic forms in u_2, u_3, ... and ordered by level
i+j+k.  The solver case-splits on the first nonzero variable (projective
chart), then runs exact propagation: each level is linear in its newest
variable given the earlier ones, so a single symbolic parameter plus
rational root extraction on the consistency polynomials enumerates every
rational branch.  Pairwise resultants are the fallback when the triangular
structure fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DepthExceededError
from .families import DiagonalParams, diagonal_coefficient
from .qpoly import Poly, QuadExpr, RatFunc, resultant_in_x, var_names

_ZERO = Fraction(0)
_ZERO_EXPR = QuadExpr()


# -- equation generation ------------------------------------------------------


def _aij_form(i, j, weight, var_cap) -> QuadExpr:
    """a_{i,j} as a linear form in u_2..u_{var_cap} (a_{1,*} = 0)."""
    if i <= 0 or j <= 0 or i == j:
        return _ZERO_EXPR
    lo, hi = (i, j) if i < j else (j, i)
    sign = 1 if i < j else -1
    if lo < 2 or lo + hi + weight <= 0:
        return _ZERO_EXPR
    coeffs = {}
    for m in range(lo, min(var_cap, (lo + hi - 1) // 2) + 1):
        c = diagonal_coefficient(m, lo, hi)
        if c != 0:
            coeffs[m] = sign * c
    return QuadExpr.linear(coeffs) if coeffs else _ZERO_EXPR


def massey_expr(i, j, k, weight, var_cap) -> QuadExpr:
    """M_{ijk} as a quadratic form in the diagonal variables."""
    total = _ZERO_EXPR
    for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
        left = _aij_form(x, y, weight, var_cap)
        if left.is_zero():
            continue
        right = _aij_form(x + y + weight, z, weight, var_cap)
        if right.is_zero():
            continue
        total = total + left * right
    return total


def _triples_at_level(level, equation_set):
    """Ordered source triples of the given level for an equation set."""
    out = []
    if equation_set == "m23k":
        k = level - 5
        if k > 3:
            out.append((2, 3, k))
        return out
    if equation_set != "all-m2rs":
        raise ValueError(f"unknown equation set {equation_set!r}")
    for r in range(3, (level - 2 + 1) // 2 + 1):
        s = level - 2 - r
        if s > r:
            out.append((2, r, s))
    return out


@dataclass(frozen=True)
class QuadEquation:
    level: int
    source: tuple
    raw: QuadExpr
    reduced: QuadExpr

    def to_json_obj(self, names=None):
        return {
            "level": self.level,
            "source": list(self.source),
            "raw": _expr_json(self.raw),
            "reduced": _expr_json(self.reduced),
            "rendered": self.reduced.render(names),
        }


def _expr_json(expr):
    return [
        {
            "monomial": list(key),
            "num": str(c.numerator),
            "den": str(c.denominator),
        }
        for key, c in sorted(expr.terms.items())
    ]


@dataclass(frozen=True)
class QuadraticSystem:
    weight: int
    var_count: int
    level_max: int
    equation_set: str
    equations: tuple

    @property
    def variables(self):
        return list(range(2, self.var_count + 2))

    @property
    def names(self):
        return var_names(self.var_count)

    def nonredundant(self):
        return [e for e in self.equations if not e.reduced.is_zero()]

    def to_json_obj(self):
        return {
            "weight": self.weight,
            "vars": self.var_count,
            "level_max": self.level_max,
            "equation_set": self.equation_set,
            "variable_names": {str(m): n for m, n in self.names.items()},
            "equations": [e.to_json_obj(self.names) for e in self.equations],
        }


def build_system(weight, var_count, level_max, equation_set="all-m2rs") -> QuadraticSystem:
    """Assemble the quadratic system up to a Massey level.

    Equations are reduced against earlier ones (echelon over the monomials,
    matching the forms the hierarchy is usually written in); the raw
    expansions are retained alongside.
    """
    if var_count < 1:
        raise ValueError("need at least one diagonal variable")
    if level_max < 9 + weight:
        raise ValueError(f"level_max below the first Massey level {9 + weight}")
    var_cap = var_count + 1  # variables u_2 .. u_{var_count+1}
    reducers = []  # (lead monomial, reduced QuadExpr with lead coeff 1)
    equations = []
    for level in range(9, level_max + 1):
        for source in _triples_at_level(level, equation_set):
            raw = massey_expr(*source, weight, var_cap)
            reduced = raw
            changed = True
            while changed and not reduced.is_zero():
                changed = False
                for lead, other in reducers:
                    c = reduced.terms.get(lead)
                    if c:
                        reduced = reduced - other.scale(c)
                        changed = True
            equations.append(QuadEquation(level, source, raw, reduced))
            if not reduced.is_zero():
                lead = min(reduced.terms)
                reducers.append((lead, reduced.scale(1 / reduced.terms[lead])))
    return QuadraticSystem(
        weight=weight,
        var_count=var_count,
        level_max=level_max,
        equation_set=equation_set,
        equations=tuple(equations),
    )


# -- branch engine -------------------------------------------------------------


@dataclass(frozen=True)
class SolutionBranch:
    """A projective solution with exact rational coordinates."""

    assignments: dict
    normalization: int | None
    verified_level: int
    free_vars: tuple = ()
    notes: tuple = ()

    def vector(self, var_count):
        return tuple(
            self.assignments.get(m, _ZERO) for m in range(2, var_count + 2)
        )

    def params(self, var_count) -> DiagonalParams:
        return DiagonalParams(self.vector(var_count))

    def to_json_obj(self, names=None):
        return {
            "assignments": {
                (names or {}).get(m, f"u{m}"): f"{v.numerator}/{v.denominator}"
                for m, v in sorted(self.assignments.items())
            },
            "normalization": self.normalization,
            "verified_level": self.verified_level,
            "free_vars": list(self.free_vars),
            "notes": list(self.notes),
        }


class _Dead(Exception):
    pass


class _StopSearch(Exception):
    pass


class _Budget:
    def __init__(self, limit, stop_after=None):
        self.limit = limit
        self.stop_after = stop_after
        self.used = 0
        self.results = []

    def spend(self):
        self.used += 1
        if self.used > self.limit:
            raise DepthExceededError(
                f"branch budget {self.limit} exceeded", partial=self.results
            )

    def record(self, item):
        self.results.append(item)
        if self.stop_after is not None and len(self.results) >= self.stop_after:
            raise _StopSearch


def _root_order(roots):
    """Zero first, then small values: the canonical branch is explored first."""
    return sorted(roots, key=lambda r: (r != 0, abs(r), r < 0))


_SPECIALIZE_TRIALS = [Fraction(n) for n in (0, 1, -1, 2, -2, 3, -3, 5, -5, 7)]


def _specialize(assign, symbol, nonzero, value):
    """Evaluate every assignment at t = value; None when assumptions break."""
    for p in nonzero:
        if p(value) == 0:
            return None
    out = {}
    for var, rf in assign.items():
        try:
            out[var] = RatFunc(rf.eval(value))
        except ZeroDivisionError:
            return None
    return out


def _finalize(equations, variables, assign, symbol, nonzero, notes, budget):
    free = []
    assign = dict(assign)
    if symbol is not None and symbol in assign and not assign[symbol].is_constant():
        # a genuinely free one-parameter family; record it and take the
        # first admissible specialization as the canonical representative
        for value in _SPECIALIZE_TRIALS:
            spec = _specialize(assign, symbol, nonzero, value)
            if spec is not None:
                assign = spec
                free.append(symbol)
                notes = notes + (f"free parameter u{symbol} specialized to {value}",)
                break
        else:
            raise DepthExceededError("no admissible specialization found")
    values = {}
    for var in variables:
        if var in assign:
            if not assign[var].is_constant():
                # depends on a free symbol that was itself assigned later
                raise AssertionError("unresolved symbolic assignment")
            values[var] = assign[var].constant()
        else:
            free.append(var)
            values[var] = _ZERO
    for eq in equations:
        if eq.evaluate(values) != 0:
            raise _Dead
    budget.record((values, tuple(sorted(free)), notes))


def _search(equations, variables, assign, symbol, nonzero, notes, budget):
    budget.spend()
    equations = list(equations)
    while True:
        pending = []
        restart = False
        for eq in equations:
            kind = eq.analyze(assign)
            if kind[0] == "univar" and kind[2].is_zero() and kind[3].is_zero():
                kind = ("const", kind[4])  # the unknown cancelled out
            tag = kind[0]
            if tag == "const":
                value = kind[1]
                if value.is_zero():
                    continue
                if value.is_constant():
                    raise _Dead
                for root in _root_order(value.num.rational_roots()):
                    spec = _specialize(assign, symbol, nonzero, root)
                    if spec is None:
                        continue
                    try:
                        _search(
                            [e for e in equations if e is not eq],
                            variables,
                            spec,
                            symbol,
                            [],
                            notes,
                            budget,
                        )
                    except _Dead:
                        pass
                raise _Dead  # this state only survives through its roots
            if tag == "univar":
                _, x, A, B, C = kind
                if A.is_zero() and B.is_constant():
                    assign = dict(assign)
                    assign[x] = -C / B
                    equations = [e for e in equations if e is not eq]
                    restart = True
                    break
                pending.append((eq, kind))
                continue
            pending.append((eq, kind))
        if restart:
            continue

        # no direct assignment possible: factor, split, symbolize, or finish
        for eq, _kind in pending:
            pair = eq.try_factor()
            if pair is None:
                continue
            def _factor_key(f):
                keys = sorted(f.terms)
                bare = len(f.terms) == 1 and len(keys[0]) == 1
                lowest = min((k[0] for k in keys if k), default=1 << 30)
                # canonical branches zero the high seeds: explore bare
                # variables, then short homogeneous factors, first
                return (not bare, len(f.terms), -lowest)
            for factor in sorted(pair, key=_factor_key):
                try:
                    _search(
                        [factor if e is eq else e for e in equations],
                        variables,
                        assign,
                        symbol,
                        nonzero,
                        notes,
                        budget,
                    )
                except _Dead:
                    pass
            raise _Dead

        linear_splits = [
            (eq, kind)
            for eq, kind in pending
            if kind[0] == "univar" and kind[2].is_zero() and not kind[3].is_zero()
        ]
        if linear_splits:
            eq, (_, x, A, B, C) = linear_splits[0]
            rest = [e for e in equations if e is not eq]
            # branch 1: B != 0, solve for x
            try:
                a1 = dict(assign)
                a1[x] = -C / B
                _search(rest, variables, a1, symbol, nonzero + [B.num], notes, budget)
            except _Dead:
                pass
            # branch 2: B == 0 (roots of its numerator), x still open
            for root in _root_order(B.num.rational_roots()):
                spec = _specialize(assign, symbol, nonzero, root)
                if spec is None:
                    continue
                try:
                    _search(equations, variables, spec, symbol, [], notes, budget)
                except _Dead:
                    pass
            raise _Dead

        quad_consts = [
            (eq, kind)
            for eq, kind in pending
            if kind[0] == "univar"
            and not kind[2].is_zero()
            and kind[2].is_constant()
            and kind[3].is_constant()
            and kind[4].is_constant()
        ]
        if quad_consts:
            eq, (_, x, A, B, C) = quad_consts[0]
            a, b, c = A.constant(), B.constant(), C.constant()
            disc = b * b - 4 * a * c
            roots = []
            if disc == 0:
                roots = [-b / (2 * a)]
            elif disc > 0:
                root = _sqrt_fraction(disc)
                if root is not None:
                    roots = [(-b - root) / (2 * a), (-b + root) / (2 * a)]
                else:
                    notes = notes + (f"irrational roots dropped at {eq.terms}",)
            rest = [e for e in equations if e is not eq]
            for root in _root_order(roots):
                try:
                    a1 = dict(assign)
                    a1[x] = RatFunc(root)
                    _search(rest, variables, a1, symbol, nonzero, notes, budget)
                except _Dead:
                    pass
            raise _Dead

        unassigned = [v for v in variables if v not in assign]
        if pending and symbol is None and unassigned:
            assign = dict(assign)
            symbol = unassigned[0]
            assign[symbol] = RatFunc.t()
            continue

        if pending:
            _resultant_fallback(
                equations, pending, variables, assign, symbol, nonzero, notes, budget
            )
            raise _Dead

        _finalize(equations, variables, assign, symbol, nonzero, notes, budget)
        raise _Dead


def _sqrt_fraction(value):
    """Exact square root of a nonnegative rational, or None."""
    from math import isqrt

    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _resultant_fallback(equations, pending, variables, assign, symbol, nonzero, notes, budget):
    """Eliminate one variable between two stuck equations via a resultant."""
    univars = [k for k in pending if k[1][0] == "univar"]
    if len(univars) < 2:
        raise _Dead
    (eq1, (_, x1, a1, b1, c1)) = univars[0]
    partner = next((k for k in univars[1:] if k[1][1] == x1), None)
    if partner is None:
        raise _Dead
    (eq2, (_, _, a2, b2, c2)) = partner

    def as_polys(a, b, c):
        den = a.den * b.den * c.den
        return [
            (c.num * a.den * b.den),
            (b.num * a.den * c.den),
            (a.num * b.den * c.den),
        ]

    res = resultant_in_x(as_polys(a1, b1, c1), as_polys(a2, b2, c2))
    if res.is_zero():
        raise _Dead  # common component; cannot enumerate here
    notes = notes + ("resultant fallback",)
    for root in _root_order(res.rational_roots()):
        spec = _specialize(assign, symbol, nonzero, root)
        if spec is None:
            continue
        try:
            _search(equations, variables, spec, symbol, [], notes, budget)
        except _Dead:
            pass


def solve_quadratic(equations, variables, preset=None, max_branches=64, stop_after=None):
    """Rational solution branches of quadratic equations, case-split style.

    `preset` maps variables to fixed Fractions (a chart).  Returns a list of
    (values, free_vars, notes) with every variable assigned exactly; with
    `stop_after` the search stops early, canonical (zero-rich) branches
    being explored first.
    """
    budget = _Budget(max_branches, stop_after)
    assign = {m: RatFunc(v) for m, v in (preset or {}).items()}
    try:
        _search(list(equations), list(variables), assign, None, [], (), budget)
    except (_Dead, _StopSearch):
        pass
    seen, unique = set(), []
    for values, free, notes in budget.results:
        key = tuple(sorted(values.items()))
        if key not in seen:
            seen.add(key)
            unique.append((values, free, notes))
    return unique


def solve_projective(system: QuadraticSystem, max_branches=32):
    """Enumerate projective solution branches by first-nonzero-chart splitting.

    Branches forcing every variable to zero are never produced (each chart
    normalizes its first variable to one); output is deduplicated and sorted
    by chart variable.
    """
    exprs = [e.raw for e in system.equations if not e.raw.is_zero()]
    branches = []
    seen = set()
    for chart in system.variables:
        lower = {m for m in system.variables if m < chart}
        if all(e.restrict_zero(lower).is_zero() for e in exprs):
            # The system has no equation touching this chart yet: every point
            # of the subspace solves it, a pure truncation tail, not a branch.
            continue
        preset = {m: _ZERO for m in lower}
        preset[chart] = Fraction(1)
        for values, free, notes in solve_quadratic(
            exprs, system.variables, preset, max_branches
        ):
            key = tuple(values[m] for m in system.variables)
            if key in seen:
                continue
            seen.add(key)
            branches.append(
                SolutionBranch(
                    assignments=values,
                    normalization=chart,
                    verified_level=system.level_max,
                    free_vars=free,
                    notes=notes,
                )
            )
    return branches


@dataclass(frozen=True)
class ExtendResult:
    ok: bool
    assignments: dict
    level_reached: int
    reason: str | None = None

    def __bool__(self):
        return self.ok


def extend_check(branch: SolutionBranch, system: QuadraticSystem, next_levels) -> ExtendResult:
    """Push a branch through the next Massey levels.

    New levels bring new diagonal variables in which the equations are
    linear; inconsistency kills the branch.  Variables never pinned stay
    zero (the all-higher-variables-zero continuation).
    """
    start = branch.verified_level
    stop = start + next_levels
    var_cap = max((stop + system.weight - 1) // 2, system.var_count + 1)
    variables = list(range(2, var_cap + 1))
    exprs = []
    for level in range(9, stop + 1):
        for source in _triples_at_level(level, system.equation_set):
            expr = massey_expr(*source, system.weight, var_cap)
            if not expr.is_zero():
                exprs.append(expr)
    preset = {m: branch.assignments.get(m, _ZERO) for m in range(2, system.var_count + 2)}
    results = solve_quadratic(exprs, variables, preset, max_branches=64)
    if not results:
        return ExtendResult(False, dict(branch.assignments), start, "inconsistent at a later level")
    values, free, notes = results[0]
    return ExtendResult(True, values, stop, None)


def dimension_probe(system: QuadraticSystem, branches=None, max_branches=32):
    """Max over branches of V - (exact Jacobian rank at the branch point).

    Purely experimental output: the affine-cone dimension estimate at the
    sampled points; homogeneity makes it >= 1 at any nonzero solution.
    """
    from . import linalg

    if branches is None:
        branches = solve_projective(system, max_branches)
    best = 0
    per_branch = []
    for branch in branches:
        values = {m: branch.assignments.get(m, _ZERO) for m in system.variables}
        rows = []
        for eq in system.equations:
            row = {}
            for pos, m in enumerate(system.variables):
                d = eq.raw.partial(m).evaluate(values)
                if d != 0:
                    row[pos] = d
            if row:
                rows.append(row)
        rank = linalg.rank(rows)
        dim = system.var_count - rank
        per_branch.append((branch, dim))
        best = max(best, dim)
    return best, per_branch
