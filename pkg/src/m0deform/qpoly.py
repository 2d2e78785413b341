"""Exact univariate polynomials, rational functions, and quadratic forms.

Just enough symbolic machinery for the obstruction solver: the Massey
systems are quadratic in the diagonal variables, and during a branch solve
at most one variable stays symbolic, so values are rational functions in a
single parameter t.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .algebra import rat

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Poly(tuple):
    """Univariate polynomial over Q, coefficients low-to-high, trimmed."""

    __slots__ = ()

    def __new__(cls, coeffs=()):
        coeffs = [rat(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return super().__new__(cls, coeffs)

    @classmethod
    def const(cls, c):
        return cls((rat(c),))

    @classmethod
    def t(cls):
        return cls((_ZERO, _ONE))

    @property
    def degree(self) -> int:
        return len(self) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self

    def is_constant(self) -> bool:
        return len(self) <= 1

    def constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self[0] if self else _ZERO

    def __add__(self, other):
        n = max(len(self), len(other))
        return Poly(
            [
                (self[i] if i < len(self) else _ZERO)
                + (other[i] if i < len(other) else _ZERO)
                for i in range(n)
            ]
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly([-c for c in self])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self])
        if not self or not other:
            return Poly()
        out = [_ZERO] * (len(self) + len(other) - 1)
        for i, a in enumerate(self):
            if a == 0:
                continue
            for j, b in enumerate(other):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, value) -> Fraction:
        acc = _ZERO
        for c in reversed(self):
            acc = acc * value + c
        return acc

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self)
        quo = [_ZERO] * max(len(self) - len(other) + 1, 0)
        d = other.degree
        lead = other[-1]
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            shift = len(rem) - 1 - d
            factor = rem[-1] / lead
            quo[shift] = factor
            for i, c in enumerate(other):
                rem[shift + i] -= factor * c
        return Poly(quo), Poly(rem)

    def gcd(self, other) -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a * (1 / a[-1])  # monic

    def primitive_int(self):
        """(sign-normalized integer coefficient list, content removed)."""
        if self.is_zero():
            return []
        denom = 1
        for c in self:
            denom = denom * c.denominator // gcd(denom, c.denominator)
        ints = [int(c * denom) for c in self]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return ints

    def rational_roots(self):
        """All rational roots, each once, ascending."""
        if self.is_zero():
            raise ValueError("zero polynomial has every root")
        ints = self.primitive_int()
        roots = set()
        # factor out powers of t
        low = 0
        while ints[low] == 0:
            roots.add(_ZERO)
            low += 1
        ints = ints[low:]
        if len(ints) > 1:
            a0, an = abs(ints[0]), abs(ints[-1])
            for p in _divisors(a0):
                for q in _divisors(an):
                    for cand in (Fraction(p, q), Fraction(-p, q)):
                        if self(cand) == 0:
                            roots.add(cand)
        return sorted(roots)


def _divisors(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


class RatFunc:
    """Reduced fraction of polynomials; the workhorse value type."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction)):
            num = Poly.const(num)
        if den is None:
            den = Poly.const(1)
        elif isinstance(den, (int, Fraction)):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = Poly.const(1)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lead = den[-1]
            if lead != 1:
                num = num * (1 / lead)
                den = den * (1 / lead)
        self.num = num
        self.den = den

    @classmethod
    def t(cls):
        return cls(Poly.t())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant(self) -> Fraction:
        return self.num.constant() / self.den.constant()

    def __add__(self, other):
        other = _coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __mul__(self, other):
        other = _coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        other = _coerce(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"RatFunc({list(self.num)!r} / {list(self.den)!r})"

    def eval(self, value) -> Fraction:
        d = self.den(value)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {value}")
        return self.num(value) / d


def _coerce(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc(x)


class QuadExpr:
    """Polynomial of total degree <= 2 in integer-indexed variables.

    Monomial keys: () constant, (m,) linear, (m, n) with m <= n quadratic.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, c in (terms or {}).items():
            c = rat(c)
            if c == 0:
                continue
            key = tuple(sorted(key))
            if len(key) > 2:
                raise ValueError("QuadExpr supports total degree <= 2")
            clean[key] = clean.get(key, _ZERO) + c
        self.terms = {k: v for k, v in clean.items() if v != 0}

    @classmethod
    def constant(cls, c):
        return cls({(): rat(c)})

    @classmethod
    def linear(cls, coeffs, const=0):
        terms = {(m,): c for m, c in coeffs.items()}
        terms[()] = rat(const)
        return cls(terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, _ZERO) + v
        return QuadExpr(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, _ZERO) - v
        return QuadExpr(out)

    def __neg__(self):
        return QuadExpr({k: -v for k, v in self.terms.items()})

    def scale(self, c):
        c = rat(c)
        return QuadExpr({k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                key = tuple(sorted(k1 + k2))
                if len(key) > 2:
                    raise ValueError("product exceeds degree 2")
                out[key] = out.get(key, _ZERO) + v1 * v2
        return QuadExpr(out)

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self):
        out = set()
        for key in self.terms:
            out.update(key)
        return out

    def restrict_zero(self, zeroed) -> "QuadExpr":
        """Drop every monomial touching one of the zeroed variables."""
        return QuadExpr(
            {k: v for k, v in self.terms.items() if not any(m in zeroed for m in k)}
        )

    def try_factor(self):
        """Split into a product of two linear factors over Q, or None.

        The zero set of the expression is then the union of two hyperplanes,
        which is what the case-split solver branches on.  Verified by exact
        multiplication before returning.
        """
        quad_vars = sorted({m for k in self.terms if len(k) == 2 for m in k})
        if not quad_vars:
            return None
        x = quad_vars[0]
        alpha = self.terms.get((x, x), _ZERO)
        ell = {}  # linear form: x's partner coefficients, () for the constant
        for key, c in self.terms.items():
            if len(key) == 2 and x in key and key != (x, x):
                other = key[0] if key[1] == x else key[1]
                ell[(other,)] = c
            elif key == (x,):
                ell[()] = c
        rest = QuadExpr(
            {
                k: c
                for k, c in self.terms.items()
                if x not in k
            }
        )
        if alpha != 0:
            # 4a Q = (2a x + L)^2 - (L^2 - 4a R); factors iff the bracket is
            # a perfect square of a linear form
            lin = QuadExpr(ell)
            bracket = lin * lin - rest.scale(4 * alpha)
            square_root = _linear_sqrt(bracket)
            if square_root is None:
                return None
            head = QuadExpr({(x,): 2 * alpha}) + lin
            f1 = head + square_root
            f2 = head - square_root
            if not (f1 * f2 - self.scale(4 * alpha)).is_zero():
                return None
            return f1, f2
        if not ell:
            return None
        lin = QuadExpr(ell)
        if rest.is_zero():
            return QuadExpr({(x,): 1}), lin
        quotient = _linear_quotient(rest, ell)
        if quotient is None:
            return None
        f1 = QuadExpr({(x,): 1}) + quotient
        if not (f1 * lin - self).is_zero():
            return None
        return f1, lin


    def evaluate(self, values) -> Fraction:
        total = _ZERO
        for key, c in self.terms.items():
            prod = c
            for m in key:
                prod *= values[m]
            total += prod
        return total

    def partial(self, m) -> "QuadExpr":
        """Formal partial derivative with respect to u_m."""
        out = {}
        for key, c in self.terms.items():
            if m not in key:
                continue
            if key == (m, m):
                out[(m,)] = out.get((m,), _ZERO) + 2 * c
            elif len(key) == 2:
                other = key[0] if key[1] == m else key[1]
                out[(other,)] = out.get((other,), _ZERO) + c
            else:
                out[()] = out.get((), _ZERO) + c
        return QuadExpr(out)

    def analyze(self, assign):
        """Classify against a partial assignment {var: RatFunc}.

        Returns one of
          ("const", C)            -- fully evaluated, C a RatFunc
          ("univar", x, A, B, C)  -- A x^2 + B x + C with RatFunc coefficients
          ("multi", frozenset)    -- two or more unassigned variables interact
        """
        unassigned = sorted(v for v in self.variables() if v not in assign)
        if len(unassigned) > 1:
            # genuinely multi only if some monomial mixes two unassigned vars
            # or distinct unassigned vars appear at all (cannot isolate one)
            return ("multi", frozenset(unassigned))
        zero = RatFunc(0)
        A = B = C = zero

        def val(m):
            return assign[m]

        for key, c in self.terms.items():
            if not key:
                C = C + RatFunc(c)
            elif len(key) == 1:
                (m,) = key
                if m in assign:
                    C = C + RatFunc(c) * val(m)
                else:
                    B = B + RatFunc(c)
            else:
                m, n = key
                mi, ni = m in assign, n in assign
                if mi and ni:
                    C = C + RatFunc(c) * val(m) * val(n)
                elif mi:
                    B = B + RatFunc(c) * val(m)
                elif ni:
                    B = B + RatFunc(c) * val(n)
                elif m == n:
                    A = A + RatFunc(c)
                else:  # unreachable: two distinct unassigned handled above
                    raise AssertionError
        if not unassigned:
            return ("const", C)
        return ("univar", unassigned[0], A, B, C)

    def render(self, names=None) -> str:
        """Human-readable form like '3b^2 - bc - 2ac'."""
        if not self.terms:
            return "0"

        def name(m):
            if names and m in names:
                return names[m]
            return f"u{m}"

        parts = []
        for key in sorted(self.terms):
            c = self.terms[key]
            if not key:
                mono = ""
            elif len(key) == 1:
                mono = name(key[0])
            elif key[0] == key[1]:
                mono = f"{name(key[0])}^2"
            else:
                mono = f"{name(key[0])}{name(key[1])}"
            mag = abs(c)
            coeff = "" if (mag == 1 and mono) else str(mag)
            text = f"{coeff}{mono}" or str(mag)
            parts.append((("- " if c < 0 else "+ "), text))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "- " else "") + head
        for sign, text in parts[1:]:
            out += f" {sign}{text}"
        return out


def _linear_sqrt(expr):
    """Linear form whose square is `expr`, or None (expr quadratic or const)."""
    if expr.is_zero():
        return QuadExpr()
    from math import isqrt

    def sqrt_frac(value):
        if value < 0:
            return None
        rn, rd = isqrt(value.numerator), isqrt(value.denominator)
        if rn * rn == value.numerator and rd * rd == value.denominator:
            return Fraction(rn, rd)
        return None

    square_vars = [k[0] for k in expr.terms if len(k) == 2 and k[0] == k[1]]
    if not square_vars:
        if set(expr.terms) == {()}:
            root = sqrt_frac(expr.terms[()])
            return None if root is None else QuadExpr({(): root})
        return None
    y = sorted(square_vars)[0]
    gy = sqrt_frac(expr.terms[(y, y)])
    if gy is None or gy == 0:
        return None
    coeffs = {(y,): gy}
    for key, c in expr.terms.items():
        if len(key) == 2 and y in key and key != (y, y):
            other = key[0] if key[1] == y else key[1]
            coeffs[(other,)] = c / (2 * gy)
    if (y,) in expr.terms:
        coeffs[()] = expr.terms[(y,)] / (2 * gy)
    candidate = QuadExpr(coeffs)
    if (candidate * candidate - expr).is_zero():
        return candidate
    return None


def _linear_quotient(rest, ell):
    """Linear M with M * L = rest, for the linear form L given by `ell`."""
    from . import linalg

    candidates = {()}
    for key in rest.terms:
        candidates.update((v,) for v in key)
    for key in ell:
        candidates.update([key] if key else [()])
    unknown_keys = sorted(candidates)
    index = {key: n for n, key in enumerate(unknown_keys)}
    rows = {}
    for ukey in unknown_keys:
        for lkey, lc in ell.items():
            mono = tuple(sorted(ukey + lkey))
            row = rows.setdefault(mono, {})
            row[index[ukey]] = row.get(index[ukey], _ZERO) + lc
    monomials = sorted(set(rows) | set(rest.terms))
    equations, rhs = [], []
    for mono in monomials:
        equations.append(rows.get(mono, {}))
        rhs.append(rest.terms.get(mono, _ZERO))
    solution = linalg.solve_sparse(equations, rhs, len(unknown_keys))
    if solution is None:
        return None
    return QuadExpr({unknown_keys[n]: v for n, v in solution.items()})

def var_names(count):
    """a, b, c, ... naming for u_2, u_3, ... (wraps to a1, b1, ... beyond z)."""
    out = {}
    letters = "abcdefghijklmnopqrstuvwxyz"
    for n in range(count):
        m = n + 2
        if n < 26:
            out[m] = letters[n]
        else:
            out[m] = f"{letters[n % 26]}{n // 26}"
    return out


def resultant_in_x(p_coeffs, q_coeffs):
    """Sylvester resultant of two polynomials in x with Poly coefficients.

    `p_coeffs`/`q_coeffs` list coefficients of x^0, x^1, ... (degree <= 2).
    Returns a Poly in t.
    """

    def trim(cs):
        cs = list(cs)
        while cs and cs[-1].is_zero():
            cs.pop()
        return cs

    p, q = trim(p_coeffs), trim(q_coeffs)
    if not p or not q:
        return Poly()
    dp, dq = len(p) - 1, len(q) - 1
    if dp == 0:
        return _poly_pow(p[0], dq)
    if dq == 0:
        return _poly_pow(q[0], dp)
    size = dp + dq
    rows = []
    for shift in range(dq):
        row = [Poly() for _ in range(size)]
        for i, c in enumerate(reversed(p)):
            row[shift + i] = c
        rows.append(row)
    for shift in range(dp):
        row = [Poly() for _ in range(size)]
        for i, c in enumerate(reversed(q)):
            row[shift + i] = c
        rows.append(row)
    return _det_poly(rows)


def _poly_pow(p, n):
    out = Poly.const(1)
    for _ in range(n):
        out = out * p
    return out


def _det_poly(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Poly()
    for col in range(n):
        entry = rows[0][col]
        if entry.is_zero():
            continue
        minor = [
            [rows[r][c] for c in range(n) if c != col] for r in range(1, n)
        ]
        sub = _det_poly(minor)
        term = entry * sub
        total = total + (term if col % 2 == 0 else -term)
    return total
