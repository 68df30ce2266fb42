"""Realising lattices: condition (7), m-transport and the realisation solver.

A realising m-matrix is a symmetric rational Gram matrix with
e^{i pi m_ij} = q_ij whose images under every chamber change of basis
satisfy, root by root, either the m-Cartan identity 2 m_ij = a_ij m_ii
or the m-truncation identity (1 - a_ij) m_ii = 2.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .braiding import BraidingDiagram, RootClass, pair_choices
from .errors import BudgetExceeded, DivisionByZero, MalformedDatum, NotSymmetrizable
from .exact import (AffineExpr, ConstraintSet, as_rational, format_affine, format_rational,
                    lattice_steps, lcm, name_key, reduce_mod2, solve_congruences)
from .groupoid import Chamber, GroupoidGraph, enumerate_groupoid, reflection_matrix

DEFAULT_BRANCH_CAP = 2 ** 16


# ---------------------------------------------------------------------------
# matrices of affine expressions

def affine_matrix(rows) -> tuple:
    return tuple(tuple(AffineExpr.lift(x) for x in row) for row in rows)


def congruent(m, B) -> tuple:
    """B^T m B for an integer matrix B."""
    n = len(B)
    cols = [[B[s][k] for s in range(n)] for k in range(n)]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = AffineExpr(0)
            x, y = cols[i], cols[j]
            for s in range(n):
                if not x[s]:
                    continue
                for t in range(n):
                    if y[t]:
                        acc = acc + m[s][t] * (x[s] * y[t])
            out[i][j] = out[j][i] = acc
    return tuple(tuple(row) for row in out)


def bilinear(m, x, y) -> AffineExpr:
    acc = AffineExpr(0)
    for s, xs in enumerate(x):
        if xs:
            for t, yt in enumerate(y):
                if yt:
                    acc = acc + m[s][t] * (xs * yt)
    return acc


def substitute_matrix(m, mapping) -> tuple:
    return tuple(tuple(e.substitute(mapping) for e in row) for row in m)


def evaluate_matrix(m, assignment) -> tuple:
    return tuple(tuple(AffineExpr.lift(e).evaluate(assignment) for e in row) for row in m)


def format_matrix(m) -> list:
    return [[format_affine(AffineExpr.lift(e)) for e in row] for row in m]


# ---------------------------------------------------------------------------
# families

@dataclass(frozen=True)
class MFamily:
    """Symmetric affine m-matrix plus constraints on its parameters."""

    entries: tuple
    constraints: ConstraintSet = field(default_factory=ConstraintSet)
    chamber: Chamber | None = None
    label: str = ""
    notes: tuple = ()

    def __post_init__(self):
        m = affine_matrix(self.entries)
        n = len(m)
        if any(len(row) != n for row in m):
            raise ValueError("m-matrix must be square")
        for i in range(n):
            for j in range(i):
                if m[i][j] != m[j][i]:
                    raise ValueError(f"m-matrix not symmetric at ({j + 1},{i + 1})")
        object.__setattr__(self, "entries", m)

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def parameters(self) -> tuple:
        names = {v for row in self.entries for e in row for v in e.variables}
        return tuple(sorted(names, key=name_key))

    def at(self, assignment) -> tuple:
        return evaluate_matrix(self.entries, assignment)

    def transported(self, B) -> "MFamily":
        return MFamily(congruent(self.entries, B), self.constraints, None, self.label, self.notes)

    def to_json(self) -> dict:
        return {"m": format_matrix(self.entries), "constraints": self.constraints.describe(),
                "label": self.label, "notes": list(self.notes)}


def _entries(m):
    return m.entries if isinstance(m, MFamily) else affine_matrix(m)


def pair_residual(m, a, i: int, j: int, choice: str) -> AffineExpr:
    """Residual of condition (7) for the pair (i, j).

    Disconnected pairs (a_ij = 0) only ask for m_ij = 0 under either choice.
    """
    m = _entries(m)
    if a[i][j] == 0:
        return m[i][j]
    if choice == "A":
        return m[i][j] * 2 - m[i][i] * a[i][j]
    if choice == "B":
        return m[i][i] * (1 - a[i][j]) - 2
    raise ValueError(f"choice must be 'A' or 'B', got {choice!r}")


def cond7_residuals(m, a, i: int, choice: str) -> list:
    n = len(a)
    return [pair_residual(m, a, i, j, choice) for j in range(n) if j != i]


def m_reflect(m, a, k: int):
    """R^T m R with the reflection matrix of the groupoid."""
    R = reflection_matrix(a, k)
    if isinstance(m, MFamily):
        return MFamily(congruent(m.entries, R), m.constraints, None, m.label, m.notes)
    return congruent(affine_matrix(m), R)


def is_m_cartan(m, a, i: int) -> bool:
    return all(r.is_zero() for r in cond7_residuals(m, a, i, "A"))


def is_m_truncation(m, a, i: int) -> bool:
    return all(r.is_zero() for r in cond7_residuals(m, a, i, "B"))


def realisation_failures(q: BraidingDiagram, m, graph: GroupoidGraph | None = None,
                         budget: int = 10_000) -> list:
    """Why a concrete m fails to realise q; empty when it does.

    Checks e^{i pi m} = q and, in every chamber, condition (7) pair by pair.
    """
    m = evaluate_matrix(affine_matrix(m), {})
    n = q.rank
    out = []
    for i in range(n):
        if reduce_mod2(m[i][i] - q.node(i)):
            out.append(f"m{i + 1}{i + 1} = {format_rational(m[i][i])} does not give q_{i + 1}{i + 1}")
        for j in range(i + 1, n):
            if reduce_mod2(2 * m[i][j] - q.edge(i, j)):
                out.append(f"2 m{i + 1}{j + 1} = {format_rational(2 * m[i][j])} does not give q_{i + 1}{j + 1} q_{j + 1}{i + 1}")
    if out:
        return out
    graph = graph or enumerate_groupoid(q, budget)
    for ci, c in enumerate(graph.chambers):
        m_c = congruent(m, c.basis)
        for i in range(n):
            for j in range(n):
                if i != j and not any(pair_residual(m_c, c.cartan, i, j, ch).is_zero() for ch in "AB"):
                    out.append(f"chamber {ci}, pair ({i + 1},{j + 1}): neither A nor B holds")
    return out


# ---------------------------------------------------------------------------
# solver

@dataclass(frozen=True)
class Witness:
    kind: str                  # "conflict", "congruence" or "infeasible"
    chambers: tuple
    values: tuple
    entry: tuple = ()
    note: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "chambers": list(self.chambers),
                "values": [format_rational(v) for v in self.values],
                "entry": [i + 1 for i in self.entry], "note": self.note}


@dataclass
class RealisationReport:
    verdict: str                                # "Solutions" or "NoSolution"
    families: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    graph: GroupoidGraph | None = None
    notes: list = field(default_factory=list)

    @property
    def solvable(self) -> bool:
        return self.verdict == "Solutions"

    def to_json(self) -> dict:
        return {"verdict": self.verdict,
                "families": [f.to_json() for f in self.families],
                "witnesses": [w.to_json() for w in self.witnesses],
                "notes": list(self.notes)}


def unknown_names(n: int) -> list:
    return [f"m{i + 1},{j + 1}" for i in range(n) for j in range(i, n)]


def symbolic_m(n: int) -> tuple:
    return tuple(tuple(AffineExpr.var(f"m{min(i, j) + 1},{max(i, j) + 1}") for j in range(n)) for i in range(n))


def _options(chamber: Chamber, m_c, i: int) -> list:
    """Residual lists for every admissible choice at root i of a chamber."""
    a, d = chamber.cartan, chamber.braiding
    n = d.rank
    cls = chamber.classes[i]
    disc = [m_c[i][j] for j in range(n) if j != i and a[i][j] == 0]
    conn = [j for j in range(n) if j != i and a[i][j] != 0]
    if cls == RootClass.MIXED:
        per_pair = [sorted(pair_choices(d, a, i, j)) for j in conn]
        out = []
        for combo in itertools.product(*per_pair):
            out.append(disc + [pair_residual(m_c, a, i, j, c) for j, c in zip(conn, combo)])
        return out
    choices = {RootClass.CARTAN_ONLY: "A", RootClass.TRUNCATION_ONLY: "B", RootClass.BOTH: "AB"}[cls]
    return [disc + [pair_residual(m_c, a, i, j, c) for j in conn] for c in choices]


def _items(graph: GroupoidGraph):
    n = graph.rank
    M = symbolic_m(n)
    items = []
    for ci, c in enumerate(graph.chambers):
        m_c = congruent(M, c.basis)
        for i in range(n):
            items.append((ci, i, _options(c, m_c, i)))
    # forced items first keeps the branching frontier small
    items.sort(key=lambda it: len(it[2]))
    return M, items


def _congruence_forms(M, d: BraidingDiagram):
    n = d.rank
    forms, targets, where = [], [], []
    for i in range(n):
        for j in range(i, n):
            if i == j:
                forms.append(M[i][i])
                targets.append(d.node(i))
            else:
                forms.append(M[i][j] * 2)
                targets.append(d.edge(i, j))
            where.append((i, j))
    return forms, targets, where


def solve_realisation(q: BraidingDiagram, graph: GroupoidGraph | None = None, *,
                      budget: int = 10_000, branch_cap: int = DEFAULT_BRANCH_CAP) -> RealisationReport:
    """All realising m-families of a concrete braiding.

    Each family is affine in fresh parameters t1, t2, ... and carries the
    mod-2 congruences tying it to the braiding; a sample point satisfying
    them is recorded in the family notes.
    """
    if graph is None:
        graph = enumerate_groupoid(q, budget)
    n = q.rank
    names = unknown_names(n)
    M, items = _items(graph)
    states = {(): ConstraintSet(tuple(names))}
    for ci, i, options in items:
        nxt = {}
        for st in states.values():
            for res in options:
                s2 = st.with_equalities(res)
                if s2.is_feasible():
                    nxt.setdefault(s2.solved, s2)
        states = nxt
        if not states:
            break
        if len(states) > branch_cap:
            raise BudgetExceeded(f"more than {branch_cap} partial choice assignments")
    report = RealisationReport("NoSolution", graph=graph)
    if not states:
        report.witnesses.append(_linear_witness(graph, M, items))
        return report

    forms, targets, where = _congruence_forms(M, q)
    families = []
    congruence_failures = []
    for st in states.values():
        free = st.free_variables(names)
        rename = {v: f"t{k + 1}" for k, v in enumerate(free)}
        ent = tuple(tuple(st.reduce(e).rename(rename) for e in row) for row in M)
        fforms = [st.reduce(f).rename(rename) for f in forms]
        point = solve_congruences(fforms, targets)
        if point is None:
            congruence_failures.append((st, ent, fforms))
            continue
        cs = ConstraintSet(tuple(f"t{k + 1}" for k in range(len(free))))
        for f, t in zip(fforms, targets):
            if not f.is_constant():
                cs = cs.with_congruence(f - t, 2)
        steps = lattice_steps([f for f in fforms if not f.is_constant()])
        sample = ", ".join(f"{k}={format_rational(v)}" for k, v in point.items())
        notes = (f"sample point: {sample}",) if point else ()
        if steps:
            notes += ("lattice steps: " + ", ".join(f"{k}+{format_rational(v)}" for k, v in steps.items()),)
        fam = MFamily(ent, cs, graph.chambers[graph.initial], notes=notes)
        families.append((st, fam, point))
    if not families:
        st, ent, fforms = congruence_failures[0]
        for (i, j), f, t in zip(where, fforms, targets):
            if f.is_constant() and ((f.constant - t) / 2).denominator != 1:
                label = f"m{i + 1}{j + 1}" if i == j else f"2m{i + 1}{j + 1}"
                report.witnesses.append(Witness(
                    "congruence", (0,), (f.constant, t), (i, j),
                    f"{label} is forced to {format_rational(f.constant)} but the braiding exponent is "
                    f"{format_rational(t)} (mod 2)"))
                break
        else:
            report.witnesses.append(Witness("congruence", (0,), (), (), "the congruence lattice is empty"))
        return report
    kept = _drop_contained([(st, fam) for st, fam, _ in families], names)
    report.verdict = "Solutions"
    report.families = kept
    return report


def _drop_contained(pairs, names):
    """Remove families whose affine subspace lies inside another one."""
    out = []
    for a_idx, (sa, fa) in enumerate(pairs):
        contained = False
        for b_idx, (sb, fb) in enumerate(pairs):
            if a_idx == b_idx:
                continue
            if _subspace_le(sa, sb, names):
                if not _subspace_le(sb, sa, names) or b_idx < a_idx:
                    contained = True
                    break
        if not contained:
            out.append(fa)
    return out


def _subspace_le(sa: ConstraintSet, sb: ConstraintSet, names) -> bool:
    """Every point of sa satisfies sb's equalities."""
    return all(sa.reduce(e).is_zero() for e in sb.equalities())


def _solve_items(names, sel):
    st = ConstraintSet(tuple(names))
    for res in sel:
        st = st.with_equalities(res)
        if not st.is_feasible():
            return st
    return st


def _linear_witness(graph: GroupoidGraph, M, items) -> Witness:
    """Two neighbouring chambers that pin one m-entry to different values."""
    n = graph.rank
    names = unknown_names(n)
    forced = {}
    for ci, i, options in items:
        if len(options) == 1:
            forced.setdefault(ci, []).append(options[0])
    for c0 in range(len(graph.chambers)):
        base = forced.get(c0, [])
        nbrs = []
        for k in range(n):
            c1 = graph.edges[(c0, k)]
            st = _solve_items(names, base + forced.get(c1, []))
            nbrs.append((k, c1, st))
        m0 = congruent(M, graph.chambers[c0].basis)
        for i in range(n):
            for j in range(i + 1, n):
                vals = []
                for k, c1, st in nbrs:
                    if not st.is_feasible():
                        continue
                    v = st.reduce(m0[i][j])
                    if v.is_constant():
                        vals.append((k, c1, v.constant))
                for (k1, c1, v1), (k2, c2, v2) in itertools.combinations(vals, 2):
                    if v1 != v2:
                        return Witness(
                            "conflict", (c0, c1, c2), (v1, v2), (i, j),
                            f"in chamber {c0}, joining with the reflection at alpha{k1 + 1} gives "
                            f"m{i + 1}{j + 1} = {format_rational(v1)} while the reflection at "
                            f"alpha{k2 + 1} gives {format_rational(v2)}")
    # fall back to the first contradiction met along the forced constraints
    st = ConstraintSet(tuple(names))
    for ci, i, options in items:
        if len(options) != 1:
            continue
        s2 = st.with_equalities(options[0])
        if not s2.is_feasible():
            return Witness("infeasible", (ci,), (), (i,),
                           f"the forced condition at root {i + 1} of chamber {ci} contradicts the earlier ones")
        st = s2
    return Witness("infeasible", (), (), (), "every choice assignment is contradictory")


# ---------------------------------------------------------------------------
# constructive families

def symmetrizer(a) -> tuple:
    """Smallest positive integers d with d_i a_ij = d_j a_ji."""
    n = len(a)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        todo = [start]
        while todo:
            i = todo.pop()
            for j in range(n):
                if i == j or a[i][j] == 0 and a[j][i] == 0:
                    continue
                if a[i][j] == 0 or a[j][i] == 0:
                    raise NotSymmetrizable(f"a_{i + 1}{j + 1} and a_{j + 1}{i + 1} vanish separately")
                dj = d[i] * Fraction(a[i][j], a[j][i])
                if d[j] is None:
                    d[j] = dj
                    todo.append(j)
                elif d[j] != dj:
                    raise NotSymmetrizable("no symmetrizer exists")
    scale = lcm(*(x.denominator for x in d))
    ints = [int(x * scale) for x in d]
    from math import gcd
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def construct_cartan_family(a, d: Sequence[int] | None = None, param: str = "r") -> MFamily:
    """m_ij = d_i a_ij r, i.e. the Killing form scaled by r."""
    d = symmetrizer(a) if d is None else tuple(d)
    n = len(a)
    for i in range(n):
        for j in range(n):
            if d[i] * a[i][j] != d[j] * a[j][i]:
                raise NotSymmetrizable(f"d_{i + 1} a_{i + 1}{j + 1} != d_{j + 1} a_{j + 1}{i + 1}")
    m = [[AffineExpr.var(param, d[i] * a[i][j]) for j in range(n)] for i in range(n)]
    return MFamily(m, ConstraintSet((param,)), label="Cartan",
                   notes=(f"congruence metadata: {param}/2 = k/l with gcd(k, l) = 1",))


@dataclass(frozen=True)
class SuperDatum:
    """Standard chamber of a basic Lie superalgebra.

    ``form`` is the inner product of simple roots with every bosonic block
    normalised positively; ``fermion`` is the 0-based index of alpha_f;
    ``roots`` are the positive roots in simple-root coordinates and
    ``pairs`` optionally fixes the strongly orthogonal pairs.
    """

    name: str
    form: tuple
    fermion: int
    roots: tuple
    pairs: tuple | None = None

    def multiplicity(self, v) -> int:
        return v[self.fermion]


def superlie_matrices(datum: SuperDatum):
    """The blocks P' (indices <= f) and P'' (indices >= f), zero at (f, f)."""
    n = len(datum.form)
    f = datum.fermion
    P1 = [[0] * n for _ in range(n)]
    P2 = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == f and j == f:
                continue
            if i <= f and j <= f:
                P1[i][j] = datum.form[i][j]
            elif i >= f and j >= f:
                P2[i][j] = datum.form[i][j]
    return P1, P2


def superlie_braiding(datum: SuperDatum, s=Fraction(2, 37)) -> BraidingDiagram:
    """Standard-chamber braiding with q' = e^{i pi s} and q'' = 1/q', q_ff = -1."""
    P1, P2 = superlie_matrices(datum)
    n = len(P1)
    f = datum.fermion
    diag = [Fraction(1) if i == f else s * P1[i][i] - s * P2[i][i] for i in range(n)]
    edges = [[0 if i == j else 2 * s * (P1[i][j] - P2[i][j]) for j in range(n)] for i in range(n)]
    return BraidingDiagram.from_exponents(diag, edges)


def strongly_orthogonal_pairs(datum: SuperDatum, budget: int = 10_000) -> list:
    """Pairs of positive roots that are simple and disconnected in a common chamber.

    These are exactly the pairs on which condition (7) forces m = 0. Taken
    from ``datum.pairs`` when the datum lists them explicitly.
    """
    if datum.pairs is not None:
        return [tuple(map(tuple, p)) for p in datum.pairs]
    from .groupoid import normalize_root
    g = enumerate_groupoid(superlie_braiding(datum), budget)
    n = g.rank
    out = set()
    for c in g.chambers:
        for k, l in itertools.combinations(range(n), 2):
            if not c.braiding.connected(k, l):
                out.add(tuple(sorted((normalize_root(c.root(k)), normalize_root(c.root(l))))))
    return sorted(out)


def construct_superlie_family(datum: SuperDatum) -> MFamily:
    """m^S = r' P' + r'' P'' + E_ff with the strong-orthogonality constraints.

    With a single bosonic block the family has the one parameter r.
    """
    n = len(datum.form)
    f = datum.fermion
    if not 0 <= f < n or datum.form[f][f] != 0:
        raise MalformedDatum("the fermionic simple root must be isotropic")
    for i in range(n):
        for j in range(n):
            if datum.form[i][j] != datum.form[j][i]:
                raise MalformedDatum("inner product matrix is not symmetric")
    P1, P2 = superlie_matrices(datum)
    has1 = any(P1[i][j] for i in range(n) for j in range(n) if i != f and j != f)
    has2 = any(P2[i][j] for i in range(n) for j in range(n) if i != f and j != f)
    if has1 and has2:
        p1, p2 = "r'", "r''"
    else:
        p1 = p2 = "r"
    m = [[AffineExpr(int(i == f == j)) + AffineExpr.var(p1, P1[i][j]) + AffineExpr.var(p2, P2[i][j])
          for j in range(n)] for i in range(n)]
    params = ("r", "r'", "r''")
    cs = ConstraintSet(params)
    pairs = strongly_orthogonal_pairs(datum)
    for g, h in pairs:
        cs = cs.with_equalities([bilinear(m, g, h)])
    notes = tuple(f"strongly orthogonal: {_label(g)}, {_label(h)}" for g, h in pairs)
    return MFamily(m, cs, label=datum.name, notes=notes)


def _label(v) -> str:
    return "alpha" + "".join(str(i + 1) * x for i, x in enumerate(v))


# ---------------------------------------------------------------------------
# rank-2 closed forms

def rank2_classification_value(pattern: str, a_ij, a_ji, a_beta) -> Fraction:
    """m_ij from the four two-chamber joining formulas.

    ``a_beta`` is a_{beta,-i} for TRTR_TR, a_{beta,i} for TRTR_CA and
    a_{beta,-j} for the two CATR patterns.
    """
    a_ij, a_ji, ab = (as_rational(x) for x in (a_ij, a_ji, a_beta))
    try:
        if pattern == "TRTR_TR":
            return a_ij / (1 - a_ij) - 1 / (a_ij * (1 - ab)) + 1 / (a_ij * (1 - a_ji))
        if pattern == "TRTR_CA":
            return a_ij / (1 - a_ij) + (1 / (1 - a_ji) - a_ij / ((1 - a_ij) * ab)) / (-1 / ab + a_ij)
        if pattern == "CATR_TR":
            return a_ij / (1 - a_ij * a_ji) * (1 / (1 - ab) - a_ji ** 2 / (1 - a_ji))
        if pattern == "CATR_CA":
            return (a_ij * a_ji / (1 - a_ji)) * (a_ji * ab - 2) / (a_ji * a_ij * ab - ab - a_ij)
    except ZeroDivisionError as exc:
        raise DivisionByZero(f"{pattern} is not applicable to these Cartan entries") from exc
    raise ValueError(f"unknown pattern {pattern!r}")
