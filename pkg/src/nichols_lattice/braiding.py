"""Diagonal braiding diagrams, generalized Cartan matrices, root classes.

Only the node exponents e_ii and the symmetrized edge exponents e_ij
(for q_ij q_ji) are stored. That is all the Cartan matrix, the root
classes and the reflections ever look at.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import Inconsistent, NotFiniteType, ParseError
from .exact import (PARAMS, AffineExpr, ConstraintSet, format_affine, parse_affine,
                    reduce_mod2, unit_root_order)


class RootClass(enum.Enum):
    CARTAN_ONLY = "CartanOnly"
    TRUNCATION_ONLY = "TruncationOnly"
    BOTH = "Both"
    # Cartan towards some neighbours and truncation towards the others.
    MIXED = "Mixed"

    def __str__(self):
        return self.value


def _canon(e) -> AffineExpr:
    e = AffineExpr.lift(e)
    return AffineExpr(reduce_mod2(e.constant), e.coeffs)


@dataclass(frozen=True)
class BraidingDiagram:
    rank: int
    diag: tuple
    edges: tuple
    validity: ConstraintSet = field(default_factory=ConstraintSet, compare=False)

    def __post_init__(self):
        n = self.rank
        if len(self.diag) != n or len(self.edges) != n or any(len(row) != n for row in self.edges):
            raise ValueError("diagram shape does not match its rank")
        diag = tuple(_canon(x) for x in self.diag)
        edges = tuple(tuple(AffineExpr(0) if i == j else _canon(self.edges[i][j]) for j in range(n)) for i in range(n))
        for i in range(n):
            for j in range(i):
                if edges[i][j] != edges[j][i]:
                    raise ValueError(f"edge matrix not symmetric at ({j + 1},{i + 1})")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_exponents(cls, diag: Sequence, edges: Mapping | Sequence, validity=None) -> "BraidingDiagram":
        """Build from node exponents and either a full matrix or {(i, j): e} with 0-based keys."""
        n = len(diag)
        if isinstance(edges, Mapping):
            mat = [[0] * n for _ in range(n)]
            for (i, j), e in edges.items():
                mat[i][j] = mat[j][i] = e
        else:
            mat = edges
        return cls(n, tuple(diag), tuple(tuple(row) for row in mat), validity or ConstraintSet())

    @property
    def parameters(self) -> tuple:
        names = {v for e in self.diag for v in e.variables}
        names |= {v for row in self.edges for e in row for v in e.variables}
        return tuple(p for p in PARAMS if p in names) + tuple(sorted(names - set(PARAMS)))

    def is_concrete(self) -> bool:
        return not self.parameters

    def node(self, i: int) -> Fraction:
        e = self.diag[i]
        if not e.is_constant():
            raise ValueError("diagram is not concrete")
        return e.constant

    def edge(self, i: int, j: int) -> Fraction:
        e = self.edges[i][j]
        if not e.is_constant():
            raise ValueError("diagram is not concrete")
        return e.constant

    def connected(self, i: int, j: int) -> bool:
        return i != j and not self.edges[i][j].is_zero()

    def instantiate(self, assignment: Mapping) -> "BraidingDiagram":
        return BraidingDiagram(self.rank, tuple(AffineExpr(e.evaluate(assignment)) for e in self.diag),
                               tuple(tuple(AffineExpr(e.evaluate(assignment)) for e in row) for row in self.edges))

    def key(self) -> tuple:
        return (self.diag, tuple(self.edges[i][j] for i in range(self.rank) for j in range(i + 1, self.rank)))

    def permuted(self, perm: Sequence[int]) -> "BraidingDiagram":
        """Node k of the result is node perm[k] of self."""
        n = self.rank
        return BraidingDiagram(n, tuple(self.diag[perm[k]] for k in range(n)),
                               tuple(tuple(self.edges[perm[a]][perm[b]] for b in range(n)) for a in range(n)),
                               self.validity)

    def __str__(self):
        return format_diagram(self)


def pullback(d: BraidingDiagram, basis: Sequence[Sequence[int]]) -> BraidingDiagram:
    """Braiding of the chamber whose k-th simple root is column k of ``basis``."""
    n = d.rank
    cols = [[basis[s][k] for s in range(n)] for k in range(n)]

    def self_pair(x):
        out = AffineExpr(0)
        for s in range(n):
            if x[s]:
                out = out + d.diag[s] * (x[s] * x[s])
            for t in range(s + 1, n):
                if x[s] and x[t]:
                    out = out + d.edges[s][t] * (x[s] * x[t])
        return out

    def double_pair(x, y):
        out = AffineExpr(0)
        for s in range(n):
            if x[s] and y[s]:
                out = out + d.diag[s] * (2 * x[s] * y[s])
            for t in range(n):
                if s != t and x[s] and y[t]:
                    out = out + d.edges[s][t] * (x[s] * y[t])
        return out

    diag = tuple(self_pair(cols[k]) for k in range(n))
    edges = [[AffineExpr(0)] * n for _ in range(n)]
    for k in range(n):
        for l in range(k + 1, n):
            edges[k][l] = edges[l][k] = double_pair(cols[k], cols[l])
    return BraidingDiagram(n, diag, tuple(tuple(row) for row in edges), d.validity)


def cartan_matrix(d: BraidingDiagram) -> tuple:
    n = d.rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        qii = d.node(i)
        order = unit_root_order(qii)
        for j in range(n):
            if i == j:
                continue
            e = d.edge(i, j)
            if e == 0:
                continue
            if order == 1:
                raise NotFiniteType(f"q_{i + 1}{i + 1} = 1 with a nontrivial edge to node {j + 1}")
            for m in range(order):
                if reduce_mod2(-m * qii) == e or reduce_mod2((1 + m) * qii) == 0:
                    a[i][j] = -m
                    break
    return tuple(tuple(row) for row in a)


def pair_choices(d: BraidingDiagram, a, i: int, j: int) -> frozenset:
    """Which of "A" (q-Cartan) and "B" (q-truncation) hold for the pair (i, j)."""
    qii = d.node(i)
    out = set()
    if reduce_mod2(a[i][j] * qii) == d.edge(i, j):
        out.add("A")
    if reduce_mod2((1 - a[i][j]) * qii) == 0:
        out.add("B")
    return frozenset(out)


def classify_root(d: BraidingDiagram, a, i: int) -> RootClass:
    """Quantified over the neighbours of i; isolated and rank-1 roots are Both."""
    pairs = [pair_choices(d, a, i, j) for j in range(d.rank) if d.connected(i, j)]
    if any(not p for p in pairs):
        raise Inconsistent(f"root {i + 1} is neither q-Cartan nor q-truncation towards some neighbour")
    cart = all("A" in p for p in pairs)
    trunc = all("B" in p for p in pairs)
    if cart and trunc:
        return RootClass.BOTH
    if cart:
        return RootClass.CARTAN_ONLY
    if trunc:
        return RootClass.TRUNCATION_ONLY
    return RootClass.MIXED


def classify_all(d: BraidingDiagram, a=None) -> tuple:
    a = cartan_matrix(d) if a is None else a
    return tuple(classify_root(d, a, i) for i in range(d.rank))


# ---------------------------------------------------------------------------
# text form

_RANK = re.compile(r"\s*rank\s*=\s*(\d+)\s*$")
_ENTRY = re.compile(r"\s*q\s*\[\s*(\d+)\s*(?:,\s*(\d+)\s*)?\]\s*=(.*)$", re.S)


def parse_diagram(text: str, params=PARAMS) -> BraidingDiagram:
    stmts = []
    line, col = 1, 1
    start = (1, 1)
    buf = ""
    for ch in text:
        if ch in ";\n":
            stmts.append((buf, start))
            buf = ""
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
            start = (line, col)
            continue
        buf += ch
        col += 1
    stmts.append((buf, start))
    stmts = [(s, pos) for s, pos in stmts if s.strip() and not s.strip().startswith("#")]
    if not stmts:
        raise ParseError("empty diagram", 1, 1)
    s, (ln, cl) = stmts[0]
    m = _RANK.match(s)
    if not m:
        raise ParseError("diagram must start with 'rank=<n>'", ln, cl)
    n = int(m.group(1))
    if n < 1:
        raise ParseError("rank must be positive", ln, cl)
    diag = [None] * n
    edges = {}
    for s, (ln, cl) in stmts[1:]:
        m = _ENTRY.match(s)
        if not m:
            raise ParseError(f"cannot parse statement {s.strip()!r}", ln, cl)
        i = int(m.group(1))
        j = m.group(2)
        expr = parse_affine(m.group(3), params=params, line=ln, offset=cl - 1 + m.start(3))
        if not 1 <= i <= n or (j is not None and not 1 <= int(j) <= n):
            raise ParseError(f"index out of range 1..{n}", ln, cl)
        if j is None:
            if diag[i - 1] is not None:
                raise ParseError(f"node {i} given twice", ln, cl)
            diag[i - 1] = expr
        else:
            j = int(j)
            if i == j:
                raise ParseError("edge with equal endpoints; use q[i] for nodes", ln, cl)
            key = (min(i, j) - 1, max(i, j) - 1)
            if key in edges:
                raise ParseError(f"edge {key[0] + 1},{key[1] + 1} given twice", ln, cl)
            edges[key] = expr
    missing = [k + 1 for k, e in enumerate(diag) if e is None]
    if missing:
        raise ParseError(f"missing node exponent(s) {missing}", 1, 1)
    return BraidingDiagram.from_exponents(diag, edges)


def format_diagram(d: BraidingDiagram) -> str:
    parts = [f"rank={d.rank}"]
    parts += [f"q[{i + 1}]={format_affine(e)}" for i, e in enumerate(d.diag)]
    for i in range(d.rank):
        for j in range(i + 1, d.rank):
            if not d.edges[i][j].is_zero():
                parts.append(f"q[{i + 1},{j + 1}]={format_affine(d.edges[i][j])}")
    return "; ".join(parts)
