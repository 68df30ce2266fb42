"""Exact scalars and a small affine constraint solver.

Everything downstream is rational: braiding exponents (q = e^{i pi e}),
lattice Gram entries and the free parameters r, r', r'', r'''.
Roots of unity never touch floating point here.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce as _fold
from typing import Iterable, Mapping

from .errors import ParseError, UnboundParameter, UndeclaredParameter

Rational = Fraction

PARAMS = ("r", "r'", "r''", "r'''")

_PRIME_FOLD = {"′": "'", "″": "''", "‴": "'''", "−": "-"}


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(_fold_unicode(x).strip().replace(" ", ""))
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(x)


def format_rational(x) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _fold_unicode(text: str) -> str:
    for k, v in _PRIME_FOLD.items():
        text = text.replace(k, v)
    return text


def reduce_mod2(e) -> Fraction:
    e = as_rational(e)
    return e - 2 * math.floor(e / 2)


def lcm(*xs: int) -> int:
    return _fold(lambda a, b: a * b // math.gcd(a, b), xs, 1)


@dataclass(frozen=True)
class UnitRoot:
    """q = e^{i pi e}, with e kept in [0, 2)."""

    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", reduce_mod2(self.exponent))

    @property
    def order(self) -> int:
        return unit_root_order(self)

    def is_one(self) -> bool:
        return self.exponent == 0

    def __mul__(self, other: "UnitRoot") -> "UnitRoot":
        return UnitRoot(self.exponent + other.exponent)

    def __truediv__(self, other: "UnitRoot") -> "UnitRoot":
        return UnitRoot(self.exponent - other.exponent)

    def __pow__(self, k: int) -> "UnitRoot":
        return UnitRoot(self.exponent * k)

    def inverse(self) -> "UnitRoot":
        return UnitRoot(-self.exponent)

    def __complex__(self) -> complex:
        return complex(math.cos(math.pi * self.exponent), math.sin(math.pi * self.exponent))

    def __str__(self) -> str:
        return f"e^(i*pi*{format_rational(self.exponent)})"


def unit_root_order(u) -> int:
    e = u.exponent if isinstance(u, UnitRoot) else reduce_mod2(u)
    p, q = e.numerator, e.denominator
    return 2 * q // math.gcd(p, 2 * q)


# ---------------------------------------------------------------------------
# affine expressions

_NAT = re.compile(r"(\d+)")


def name_key(name: str):
    """Declared parameters first, in declared order, then natural order."""
    if name in PARAMS:
        return (0, PARAMS.index(name), ())
    parts = tuple((0, int(p)) if p.isdigit() else (1, p) for p in _NAT.split(name) if p)
    return (1, 0, parts)


class AffineExpr:
    """c + sum_k a_k x_k over the rationals. Immutable and hashable."""

    __slots__ = ("constant", "_terms", "_hash")

    def __init__(self, constant=0, coeffs: Mapping[str, object] | None = None):
        self.constant = as_rational(constant)
        terms = {}
        for name, c in (coeffs or {}).items():
            c = as_rational(c)
            if c:
                terms[name] = c
        self._terms = tuple(sorted(terms.items(), key=lambda kv: name_key(kv[0])))
        self._hash = None

    @classmethod
    def var(cls, name: str, coeff=1) -> "AffineExpr":
        return cls(0, {name: coeff})

    @classmethod
    def lift(cls, x) -> "AffineExpr":
        if isinstance(x, AffineExpr):
            return x
        if isinstance(x, str):
            return parse_affine(x, params=None)
        return cls(x)

    @property
    def coeffs(self) -> dict:
        return dict(self._terms)

    @property
    def variables(self) -> tuple:
        return tuple(k for k, _ in self._terms)

    def coefficient(self, name: str) -> Fraction:
        for k, v in self._terms:
            if k == name:
                return v
        return Fraction(0)

    def is_constant(self) -> bool:
        return not self._terms

    def is_zero(self) -> bool:
        return not self._terms and self.constant == 0

    def __add__(self, other):
        other = AffineExpr.lift(other)
        d = dict(self._terms)
        for k, v in other._terms:
            d[k] = d.get(k, 0) + v
        return AffineExpr(self.constant + other.constant, d)

    __radd__ = __add__

    def __neg__(self):
        return AffineExpr(-self.constant, {k: -v for k, v in self._terms})

    def __sub__(self, other):
        return self + (-AffineExpr.lift(other))

    def __rsub__(self, other):
        return AffineExpr.lift(other) - self

    def __mul__(self, k):
        if isinstance(k, AffineExpr):
            if k.is_constant():
                k = k.constant
            elif self.is_constant():
                return k * self.constant
            else:
                raise TypeError("product of two non-constant affine expressions")
        k = as_rational(k)
        return AffineExpr(self.constant * k, {n: v * k for n, v in self._terms})

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1 / as_rational(k))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, str)):
            other = AffineExpr.lift(other)
        if not isinstance(other, AffineExpr):
            return NotImplemented
        return self.constant == other.constant and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.constant, self._terms))
        return self._hash

    def evaluate(self, assignment: Mapping[str, object]) -> Fraction:
        total = self.constant
        for k, v in self._terms:
            if k not in assignment:
                raise UnboundParameter(f"parameter {k!r} is not bound")
            total += v * as_rational(assignment[k])
        return total

    def substitute(self, mapping: Mapping[str, object]) -> "AffineExpr":
        out = AffineExpr(self.constant)
        keep = {}
        for k, v in self._terms:
            if k in mapping:
                out = out + AffineExpr.lift(mapping[k]) * v
            else:
                keep[k] = v
        return out + AffineExpr(0, keep)

    def rename(self, mapping: Mapping[str, str]) -> "AffineExpr":
        d = {}
        for k, v in self._terms:
            n = mapping.get(k, k)
            d[n] = d.get(n, 0) + v
        return AffineExpr(self.constant, d)

    def __str__(self):
        return format_affine(self)

    def __repr__(self):
        return f"AffineExpr({format_affine(self)!r})"


def format_affine(e: AffineExpr) -> str:
    parts = []
    for name, c in e._terms:
        mag = abs(c)
        sep = "" if name in PARAMS else "*"
        body = name if mag == 1 else f"{format_rational(mag)}{sep}{name}"
        parts.append(("-" if c < 0 else "+", body))
    if e.constant or not parts:
        parts.append(("-" if e.constant < 0 else "+", format_rational(abs(e.constant))))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<num>\d+(?:/\d+)?)\s*\*?\s*)?"
    r"(?P<name>[A-Za-z][A-Za-z0-9_,]*'*)?"
    r"(?:\s*/\s*(?P<div>\d+))?\s*"
)


def parse_affine(text: str, params: Iterable[str] | None = PARAMS, line: int = 1, offset: int = 0) -> AffineExpr:
    """Parse "2r' - 1/3", "-r/2 + 1", "1/2r''" and the like.

    With ``params`` given, names outside it raise UndeclaredParameter.
    """
    src = _fold_unicode(text)
    if not src.strip():
        raise ParseError("empty expression", line, offset + 1)
    pos = 0
    out = AffineExpr(0)
    first = True
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos]!r}", line, offset + pos + 1)
        sign, num, name, div = m.group("sign"), m.group("num"), m.group("name"), m.group("div")
        if num is None and name is None:
            if m.end() == len(src) and sign is None:
                break
            raise ParseError("expected a number or a parameter", line, offset + m.end() + 1)
        if sign is None and not first:
            raise ParseError("missing '+' or '-' between terms", line, offset + pos + 1)
        coef = Fraction(num) if num else Fraction(1)
        if div:
            if int(div) == 0:
                raise ParseError("division by zero", line, offset + m.start("div") + 1)
            coef /= int(div)
        if sign == "-":
            coef = -coef
        if name is None:
            out = out + coef
        else:
            if params is not None and name not in params:
                raise UndeclaredParameter(f"undeclared parameter {name!r} at line {line}, column {offset + m.start('name') + 1}")
            out = out + AffineExpr.var(name, coef)
        pos = m.end()
        first = False
    return out


# ---------------------------------------------------------------------------
# dense rational linear algebra

def rref(rows, ncols=None):
    """Reduced row echelon form of a list of Fraction rows. Returns (R, pivots)."""
    a = [[as_rational(x) for x in row] for row in rows]
    if not a:
        return [], []
    ncols = len(a[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(rows, ncols):
    """Basis of {x : A x = 0} as Fraction vectors."""
    R, piv = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve_matrix(A, b):
    """Solve A x = b for square nonsingular A; returns None when singular."""
    n = len(A)
    aug = [[as_rational(x) for x in row] + [as_rational(bi)] for row, bi in zip(A, b)]
    R, piv = rref(aug, n)
    if piv != list(range(n)):
        return None
    return [R[i][n] for i in range(n)]


def determinant(A) -> Fraction:
    a = [[as_rational(x) for x in row] for row in A]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def solve_integer_system(A, b):
    """Integer z with A z = b (A, b integral), or None.

    Goes through the Smith normal form S = U A V.
    """
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_decomp

    p = len(A)
    q = len(A[0]) if p else 0
    if q == 0:
        return [] if all(x == 0 for x in b) else None
    M = Matrix(p, q, lambda i, j: int(A[i][j]))
    S, U, V = smith_normal_decomp(M, domain=ZZ)
    ub = U * Matrix(p, 1, [int(x) for x in b])
    y = [0] * q
    for i in range(p):
        s = S[i, i] if i < q else 0
        if s == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % s:
                return None
            y[i] = ub[i] // s
    z = V * Matrix(q, 1, y)
    return [int(z[i]) for i in range(q)]


# ---------------------------------------------------------------------------
# constraint sets

@dataclass(frozen=True)
class ConstraintSet:
    """Solved-form linear equalities plus congruence and exclusion metadata.

    ``solved`` maps each pivot variable to an expression in the remaining
    (free) variables. The pivot of a row is its last variable in the
    declared order, so earlier parameters stay free.
    """

    params: tuple = PARAMS
    solved: tuple = ()
    infeasible: bool = False
    congruences: tuple = ()
    exclusions: tuple = ()

    @property
    def pivots(self) -> dict:
        return dict(self.solved)

    def is_feasible(self) -> bool:
        return not self.infeasible

    def reduce(self, expr) -> AffineExpr:
        return AffineExpr.lift(expr).substitute(self.pivots)

    def equalities(self) -> list:
        return [AffineExpr.var(p) - e for p, e in self.solved]

    def free_variables(self, universe: Iterable[str]) -> list:
        piv = self.pivots
        return [v for v in universe if v not in piv]

    def with_equalities(self, exprs: Iterable) -> "ConstraintSet":
        if self.infeasible:
            return self
        order = {v: i for i, v in enumerate(self.params)}
        piv = dict(self.solved)
        for e in exprs:
            e = AffineExpr.lift(e)
            for v in e.variables:
                if v not in order:
                    raise UndeclaredParameter(f"undeclared parameter {v!r}")
            e = e.substitute(piv)
            if e.is_constant():
                if e.constant != 0:
                    return ConstraintSet(self.params, tuple(piv.items()), True, self.congruences, self.exclusions)
                continue
            v = max(e.variables, key=order.__getitem__)
            c = e.coefficient(v)
            sol = -(e - AffineExpr.var(v, c)) / c
            piv = {p: x.substitute({v: sol}) for p, x in piv.items()}
            piv[v] = sol
        items = tuple(sorted(piv.items(), key=lambda kv: order[kv[0]]))
        return ConstraintSet(self.params, items, False, self.congruences, self.exclusions)

    def with_congruence(self, expr, modulus=2) -> "ConstraintSet":
        return ConstraintSet(self.params, self.solved, self.infeasible,
                             self.congruences + ((AffineExpr.lift(expr), as_rational(modulus)),), self.exclusions)

    def with_exclusion(self, expr, forbidden) -> "ConstraintSet":
        return ConstraintSet(self.params, self.solved, self.infeasible, self.congruences,
                             self.exclusions + ((AffineExpr.lift(expr), tuple(forbidden)),))

    def satisfied_by(self, assignment: Mapping[str, object]) -> bool:
        if self.infeasible:
            return False
        for e in self.equalities():
            if e.evaluate(assignment) != 0:
                return False
        for e, mod in self.congruences:
            v = e.evaluate(assignment)
            if (v / mod).denominator != 1:
                return False
        for e, forbidden in self.exclusions:
            v = e.evaluate(assignment)
            for f in forbidden:
                if isinstance(f, tuple):
                    res, mod = (as_rational(x) for x in f)
                    if ((v - res) / mod).denominator == 1:
                        return False
                elif v == as_rational(f):
                    return False
        return True

    def describe(self) -> list:
        if self.infeasible:
            return ["infeasible"]
        out = [f"{p} = {format_affine(e)}" for p, e in self.solved]
        out += [f"{format_affine(e)} = 0 mod {format_rational(m)}" for e, m in self.congruences]
        for e, forbidden in self.exclusions:
            vals = ", ".join(
                f"{format_rational(f[0])} mod {format_rational(f[1])}" if isinstance(f, tuple) else format_rational(f)
                for f in forbidden)
            out.append(f"{format_affine(e)} not in {{{vals}}}")
        return out


def solve_linear(equalities: Iterable, params: Iterable[str] = PARAMS) -> ConstraintSet:
    return ConstraintSet(tuple(params)).with_equalities(equalities)


def check_congruence(expr, target, assignment: Mapping[str, object], modulus=2) -> bool:
    v = AffineExpr.lift(expr).evaluate(assignment)
    return ((v - as_rational(target)) / as_rational(modulus)).denominator == 1


def solve_congruences(forms, targets, modulus=2):
    """Rational point t with forms[i](t) = targets[i] (mod modulus), or None.

    Writes L t = (targets - c) + modulus*z. Solvability over Q pins z to
    an integer lattice problem Y (w + modulus z) = 0 for an integral left
    null basis Y of L, which is settled exactly by Smith normal form.
    """
    forms = [AffineExpr.lift(f) for f in forms]
    names = sorted({v for f in forms for v in f.variables}, key=name_key)
    modulus = as_rational(modulus)
    w = [as_rational(t) - f.constant for f, t in zip(forms, targets)]
    if not names:
        return {} if all((x / modulus).denominator == 1 for x in w) else None
    L = [[f.coefficient(v) for v in names] for f in forms]
    p, k = len(L), len(names)
    Lt = [[L[i][j] for i in range(p)] for j in range(k)]
    Y = nullspace(Lt, p)
    Yi = []
    for y in Y:
        den = lcm(*(x.denominator for x in y))
        Yi.append([int(x * den) for x in y])
    if Yi:
        A = [[yi[j] * modulus for j in range(p)] for yi in Yi]
        rhs = [-sum(yi[j] * w[j] for j in range(p)) for yi in Yi]
        scale = lcm(*(x.denominator for row in A for x in row), *(x.denominator for x in rhs))
        A = [[int(x * scale) for x in row] for row in A]
        rhs_i = [x * scale for x in rhs]
        if any(x.denominator != 1 for x in rhs_i):
            return None
        z = solve_integer_system(A, [int(x) for x in rhs_i])
        if z is None:
            return None
    else:
        z = [0] * p
    target = [w[i] + modulus * z[i] for i in range(p)]
    aug = [L[i] + [target[i]] for i in range(p)]
    R, piv = rref(aug, k)
    t = [Fraction(0)] * k
    for i, c in enumerate(piv):
        t[c] = R[i][k]
    sol = dict(zip(names, t))
    assert all(((f.evaluate(sol) - tg) / modulus).denominator == 1 for f, tg in zip(forms, targets))
    return sol


def lattice_steps(forms, modulus=2) -> dict:
    """Per-variable step N_v such that t -> t + N_v e_v preserves every congruence."""
    forms = [AffineExpr.lift(f) for f in forms]
    names = sorted({v for f in forms for v in f.variables}, key=name_key)
    modulus = as_rational(modulus)
    out = {}
    for v in names:
        dens = [(f.coefficient(v) / modulus).denominator for f in forms if f.coefficient(v)]
        out[v] = Fraction(lcm(*dens)) if dens else Fraction(1)
    return out
