"""Smallness criteria, the Selberg structure constants, relation reports.

A product of screenings Z_{v_1} ... Z_{v_n} acting on a module of weight
lambda is controlled by the numbers m_i = (v_i, lambda) and m_ij = (v_i, v_j).
Relations of the Nichols algebra transfer to the screenings when these
numbers are small, or, by analytic continuation, whenever the Selberg
integral behind the structure constants has no uncancelled pole.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath

from .braiding import BraidingDiagram, cartan_matrix
from .charge import concrete_matrix
from .errors import ConstraintViolated
from .exact import as_rational, format_rational, reduce_mod2, unit_root_order
from .groupoid import DEFAULT_BUDGET, enumerate_groupoid, positive_roots

POLE_TOL = 1e-9

SUBSETS = "subsets"
SUBMULTISETS = "submultisets"


@dataclass(frozen=True)
class WeightContext:
    m: tuple
    weights: tuple = ()

    @classmethod
    def of(cls, m, weights=()):
        return cls(concrete_matrix(m), tuple(as_rational(w) for w in weights))


# ---------------------------------------------------------------------------
# smallness

def _small_at(m, d, J) -> bool:
    lhs = Fraction(0)
    for a, i in enumerate(J):
        lhs += Fraction(d[i] * (d[i] - 1), 2) * m[i][i]
        for j in J[a + 1:]:
            lhs += d[i] * d[j] * m[i][j]
    return lhs > 1 - sum(d[i] for i in J)


def smallness_holds(ctx, d: Sequence[int], mode: str = SUBSETS) -> bool:
    """Smallness of the degree d monomials.

    Index sets J (or sub-degrees d' <= d) of total degree 1 are single
    screenings and count as small.
    """
    m = ctx.m if isinstance(ctx, WeightContext) else concrete_matrix(ctx)
    d = tuple(int(x) for x in d)
    if any(x < 0 for x in d):
        raise ValueError("degree vector must be non-negative")
    support = [i for i, x in enumerate(d) if x]
    if mode == SUBSETS:
        for size in range(1, len(support) + 1):
            for J in itertools.combinations(support, size):
                if sum(d[i] for i in J) > 1 and not _small_at(m, d, J):
                    return False
        return True
    if mode == SUBMULTISETS:
        for sub in itertools.product(*(range(x + 1) for x in d)):
            if sum(sub) > 1 and not _small_at(m, sub, [i for i, x in enumerate(sub) if x]):
                return False
        return True
    raise ValueError(f"unknown smallness mode {mode!r}")


def in_minus_n(x) -> bool:
    """x in {-1, -2, -3, ...}."""
    x = as_rational(x)
    return x.denominator == 1 and x <= -1


def continued_smallness_a(m_vv, n: int) -> bool:
    if n < 1:
        raise ValueError("n must be at least 1")
    m_vv = as_rational(m_vv)
    return not any(in_minus_n(k * m_vv / 2) for k in range(1, n + 1))


def continued_smallness_b(m_1j, m_ij, n: int) -> bool:
    if n < 2:
        raise ValueError("n must be at least 2")
    m_1j, m_ij = as_rational(m_1j), as_rational(m_ij)
    if any(in_minus_n(k * m_ij / 2) for k in range(1, n)):
        return False
    return not any(in_minus_n(m_1j + k * m_ij / 2) for k in range(n - 1))


# ---------------------------------------------------------------------------
# Selberg integral

@dataclass(frozen=True)
class Pole:
    argument: object
    where: str

    def __str__(self):
        return f"pole: Gamma argument {self.argument} ({self.where})"


@dataclass(frozen=True)
class Finite:
    value: complex
    note: str = ""


def _nonpositive_int(x) -> bool:
    if isinstance(x, Fraction) or isinstance(x, int):
        x = Fraction(x)
        return x.denominator == 1 and x <= 0
    x = float(x)
    return x < POLE_TOL and abs(x - round(x)) < POLE_TOL


def _args(a, b, c, n):
    num, den = [], []
    for k in range(n):
        num += [(a + k * c, "a+kc", k), (b + k * c, "b+kc", k), (1 + (k + 1) * c, "1+(k+1)c", k)]
        den += [(a + b + (n + k - 1) * c, "a+b+(n+k-1)c", k), (1 + c, "1+c", k)]
    return num, den


def _exact(x):
    return as_rational(x) if isinstance(x, (int, Fraction, str)) else x


def selberg(a, b, c, n: int):
    """Ordered-simplex Selberg integral Sel(a-1, b-1, 2c).

    The region 1 > z_1 > ... > z_n > 0 is one of n! orderings, hence the
    Gamma product divided by n!.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    a, b, c = _exact(a), _exact(b), _exact(c)
    num, den = _args(a, b, c, n)
    for x, where, k in num:
        if _nonpositive_int(x):
            return Pole(x, f"{where}, k={k}")
    if any(_nonpositive_int(x) for x, _, _ in den):
        return mpmath.mpf(0)
    return _gamma_ratio([x for x, _, _ in num], [x for x, _, _ in den]) / math.factorial(n)


def _mpf(x):
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _gamma_ratio(num, den):
    # log-Gamma is complex on the negative axis, which carries the sign
    s = sum((mpmath.loggamma(_mpf(x)) for x in num), mpmath.mpc(0))
    s -= sum((mpmath.loggamma(_mpf(x)) for x in den), mpmath.mpc(0))
    v = mpmath.exp(s)
    return v.real if abs(v.imag) <= 1e-12 * max(1, abs(v.real)) else v


def f_tilde(m_vl, m_vv, n: int):
    """Prefactor times Sel(m_vl; 0; m_vv), i.e. a = m_vl + 1, b = 1, c = m_vv / 2.

    Poles at a + k c are cancelled by the k-th prefactor; they are
    resolved as the limit along m_vl.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    m_vl, m_vv = as_rational(m_vl), as_rational(m_vv)
    a, b, c = m_vl + 1, Fraction(1), m_vv / 2
    num, den = _args(a, b, c, n)
    for x, where, k in num:
        if where != "a+kc" and _nonpositive_int(x):
            return Pole(x, f"{where}, k={k}")
    order = 0
    coeff = mpmath.mpc(1)
    for s in range(n):
        if reduce_mod2(s * m_vv + 2 * m_vl) == 0:
            order += 1
            coeff *= 2j * mpmath.pi
        else:
            coeff *= mpmath.expjpi(_mpf(s * m_vv + 2 * m_vl)) - 1
    keep_num, keep_den = [], []
    cancelled = 0
    for x, where, _ in num:
        if where == "a+kc" and _nonpositive_int(x):
            j = -int(x)
            order -= 1
            cancelled += 1
            coeff *= (-1) ** j / mpmath.factorial(j)
        else:
            keep_num.append(x)
    for x, where, _ in den:
        if _nonpositive_int(x):
            j = -int(x)
            order += 1
            coeff *= (-1) ** j * mpmath.factorial(j)
        else:
            keep_den.append(x)
    note = f"{cancelled} pole(s) cancelled by the prefactor" if cancelled else ""
    if order < 0:
        return Pole(a, "a+kc, uncancelled")
    if order > 0:
        return Finite(0j, note)
    value = coeff * _gamma_ratio(keep_num, keep_den) / math.factorial(n)
    return Finite(complex(value), note)


def predicted_pole(m_vv, n: int) -> bool:
    """Exact prediction: an uncancelled pole exists iff continued smallness (a) fails."""
    return not continued_smallness_a(m_vv, n)


# ---------------------------------------------------------------------------
# relations

class Kind(enum.Enum):
    TRUNCATION = "Truncation"
    SERRE = "Serre"
    EXTRA = "Extra"


EXTRA_TAGS = ("A3_qm1", "B2_qi_or_zeta3", "B3_qi_or_zeta3", "G2_zeta6_or_i_1", "G2_zeta6_or_i_2",
              "G2_zeta6_or_i_3", "G2_zeta6_or_i_4", "Super_A_D_mid", "Super_B11", "Super_B21")


@dataclass(frozen=True)
class RelationSpec:
    kind: Kind
    degree: tuple
    root: tuple = ()          # truncations
    power: int = 0            # truncation order or Serre exponent
    pair: tuple = ()          # Serre (i, j), 0-based
    tag: str = ""             # extra relations
    simple: bool = False
    redundant: bool = False   # Serre with q_ii^(1-a_ij) = 1: implied, not defining

    def describe(self) -> str:
        if self.kind is Kind.TRUNCATION:
            return f"truncation x_{_label(self.root)}^{self.power}"
        if self.kind is Kind.SERRE:
            i, j = self.pair
            return f"Serre (ad x{i + 1})^{self.power} x{j + 1}"
        return f"extra {self.tag}"

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "degree": list(self.degree), "description": self.describe()}
        if self.kind is Kind.TRUNCATION:
            out.update(root=list(self.root), power=self.power, simple=self.simple)
        elif self.kind is Kind.SERRE:
            out.update(pair=[self.pair[0] + 1, self.pair[1] + 1], power=self.power, redundant=self.redundant)
        else:
            out.update(tag=self.tag)
        return out


def _label(v) -> str:
    return "".join(str(i + 1) * x for i, x in enumerate(v)) if all(x >= 0 for x in v) else str(v)


def _unit(n, *pairs):
    d = [0] * n
    for i, x in pairs:
        d[i] += x
    return tuple(d)


def _is(e, target) -> bool:
    return reduce_mod2(e - as_rational(target)) == 0


def _extras(q: BraidingDiagram, a) -> list:
    """Listed subdiagrams carrying relations beyond truncation and Serre."""
    n = q.rank
    out = []
    node = [q.node(i) for i in range(n)]
    edge = lambda i, j: q.edge(i, j)

    def paths():
        for j in range(n):
            for i, k in itertools.combinations(range(n), 2):
                if j in (i, k) or q.connected(i, k):
                    continue
                if q.connected(i, j) and q.connected(j, k):
                    yield i, j, k

    seen = set()
    for i, j, k in paths():
        # middle node -1 with two neighbours
        if not _is(node[j], 1):
            continue
        if all(_is(x, 1) for x in (node[i], node[k], edge(i, j), edge(j, k))):
            tag = "A3_qm1"
        else:
            tag = "Super_A_D_mid"
        key = (tag, j, frozenset((i, k)))
        if key not in seen:
            seen.add(key)
            out.append(RelationSpec(Kind.EXTRA, _unit(n, (i, 1), (j, 2), (k, 1)), tag=tag))
    for i in range(n):
        for j in range(n):
            if i == j or not q.connected(i, j):
                continue
            qi = node[i]
            order = unit_root_order(qi)
            b2 = order in (3, 4) and _is(node[j], 2 * qi) and _is(edge(i, j), -2 * qi)
            if b2:
                out.append(RelationSpec(Kind.EXTRA, _unit(n, (i, 3), (j, 2)), tag="B2_qi_or_zeta3"))
            elif _is(node[j], 1) and a[i][j] == -2:
                out.append(RelationSpec(Kind.EXTRA, _unit(n, (i, 3), (j, 2)), tag="Super_B11"))
            if order in (4, 6) and _is(node[j], 3 * qi) and _is(edge(i, j), -3 * qi):
                for t, d in enumerate(((5, 2), (4, 2), (4, 3), (5, 3)), 1):
                    out.append(RelationSpec(Kind.EXTRA, _unit(n, (i, d[0]), (j, d[1])), tag=f"G2_zeta6_or_i_{t}"))
    for i, j, k in paths():
        for x, z in ((i, k), (k, i)):
            qx = node[x]
            order = unit_root_order(qx)
            b3 = (order in (3, 4) and _is(node[j], 2 * qx) and _is(node[z], 2 * qx)
                  and _is(edge(x, j), -2 * qx) and _is(edge(j, z), -2 * qx))
            if b3:
                out.append(RelationSpec(Kind.EXTRA, _unit(n, (x, 3), (j, 2), (z, 1)), tag="B3_qi_or_zeta3"))
            elif _is(node[j], 1) and a[x][j] == -2:
                out.append(RelationSpec(Kind.EXTRA, _unit(n, (x, 3), (j, 2), (z, 1)), tag="Super_B21"))
    return out


def defining_relations(q: BraidingDiagram, *, include_redundant: bool = False,
                       budget: int = DEFAULT_BUDGET, graph=None) -> list:
    """Truncations, Serre relations and listed extra relations of a concrete chamber."""
    n = q.rank
    a = cartan_matrix(q)
    graph = graph or enumerate_groupoid(q, budget)
    out = []
    for root in positive_roots(graph).positive_roots:
        ell = unit_root_order(pullback_root(q, root))
        if ell > 1:
            out.append(RelationSpec(Kind.TRUNCATION, tuple(ell * x for x in root), root=tuple(root),
                                    power=ell, simple=sum(root) == 1))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if a[i][j] == 0 and j < i:
                continue
            p = 1 - a[i][j]
            redundant = reduce_mod2(p * q.node(i)) == 0
            if redundant and not include_redundant:
                continue
            out.append(RelationSpec(Kind.SERRE, _unit(n, (i, p), (j, 1)), power=p, pair=(i, j),
                                    redundant=redundant))
    return out + _extras(q, a)


def pullback_root(q: BraidingDiagram, root) -> Fraction:
    """Node exponent of q at an arbitrary root (the exponent of q_{gamma gamma})."""
    n = q.rank
    total = Fraction(0)
    for s in range(n):
        total += root[s] * root[s] * q.node(s)
        for t in range(s + 1, n):
            total += root[s] * root[t] * q.edge(s, t)
    return reduce_mod2(total)


# ---------------------------------------------------------------------------
# relation statuses

class Status(enum.Enum):
    HOLDS_BY_SMALLNESS = "HoldsBySmallness"
    HOLDS_BY_CONTINUED_SMALLNESS = "HoldsByContinuedSmallness"
    HOLDS_BY_IDENTITY = "HoldsByIdentity"
    EXPECTED_FAIL = "ExpectedFail"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class RelationStatus:
    status: Status
    condition: str = ""
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status.value.startswith("Holds")

    def to_json(self) -> dict:
        return {"status": self.status.value, "condition": self.condition, "note": self.note}


CONJECTURE_NOTE = ("conjecture: non-simple truncations hold for positive norm; "
                   "not implied by the smallness criteria")
LOCAL_SCREENING_NOTE = "(Z)^n = Z_{n v} is a local screening; the algebra extends the Nichols algebra"


def braiding_of(m) -> BraidingDiagram:
    """The braiding q_ij = e^{i pi m_ij} of a concrete Gram matrix."""
    m = concrete_matrix(m)
    n = len(m)
    return BraidingDiagram(n, tuple(m[i][i] for i in range(n)),
                           tuple(tuple(0 if i == j else 2 * m[i][j] for j in range(n)) for i in range(n)))


def _norm(m, v) -> Fraction:
    n = len(m)
    return sum((v[i] * v[j] * m[i][j] for i in range(n) for j in range(n)), Fraction(0))


def status_of(rel: RelationSpec, m, mode: str = SUBSETS) -> RelationStatus:
    ctx = WeightContext(m)
    deg = ",".join(str(x) for x in rel.degree)
    if smallness_holds(ctx, rel.degree, mode):
        return RelationStatus(Status.HOLDS_BY_SMALLNESS, f"small in degree ({deg}), {mode}")
    if rel.kind is Kind.TRUNCATION:
        norm = _norm(m, rel.root)
        cond = f"m_vv = {format_rational(norm)}, n = {rel.power}"
        if not rel.simple:
            return RelationStatus(Status.UNDETERMINED, cond, CONJECTURE_NOTE)
        if continued_smallness_a(norm, rel.power):
            return RelationStatus(Status.HOLDS_BY_CONTINUED_SMALLNESS, cond)
        return RelationStatus(Status.EXPECTED_FAIL, cond, LOCAL_SCREENING_NOTE)
    if rel.kind is Kind.SERRE:
        i, j = rel.pair
        n = rel.power + 1
        cond = f"m_1j = {format_rational(m[i][j])}, m_ij = {format_rational(m[i][i])}, n = {n}"
        if continued_smallness_b(m[i][j], m[i][i], n):
            return RelationStatus(Status.HOLDS_BY_CONTINUED_SMALLNESS, cond)
        if unit_root_order(m[i][i]) == rel.power and m[i][i] < 0:
            return RelationStatus(Status.HOLDS_BY_IDENTITY, cond,
                                  f"[(Z_{i + 1})^{rel.power}, Z_{j + 1}] = [Z_{rel.power}v{i + 1}, Z_{j + 1}] = 0")
        return RelationStatus(Status.UNDETERMINED, cond, "continued smallness fails; no identity applies")
    return RelationStatus(Status.UNDETERMINED, f"degree ({deg})", "extra relation outside the continued criteria")


def relation_report(family, assignment: Mapping | None = None, basis=None, *, mode: str = SUBSETS,
                    budget: int = DEFAULT_BUDGET) -> list:
    """(RelationSpec, RelationStatus) for every relation of the chamber with the given basis."""
    from .realise import congruent

    constraints = getattr(family, "constraints", None)
    if constraints is not None and assignment is not None and not constraints.satisfied_by(assignment):
        raise ConstraintViolated("assignment does not satisfy the family constraints")
    m = concrete_matrix(family, assignment)
    if basis is not None:
        m = concrete_matrix(congruent(m, basis))
    q = braiding_of(m)
    rels = defining_relations(q, include_redundant=True, budget=budget)
    return [(r, status_of(r, m, mode)) for r in rels]
