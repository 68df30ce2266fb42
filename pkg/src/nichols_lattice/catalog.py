"""Bundled classification rows, their instantiation, and the infinite families.

Row files are JSON. Diagram entries are exponents e with q = e^{i pi e},
written in the affine grammar. A row may fix some parameters to primitive
roots of unity (``roots_of_unity: {"r": N}`` reads e^{i pi r} = zeta with
zeta primitive of order N) and may leave others generic, with default
sample values under ``generic``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping

from .braiding import BraidingDiagram, RootClass, cartan_matrix, classify_all
from .errors import CartanMismatch, IoError, ParseError, SchemaError, UndeclaredParameter, ValidityViolated
from .exact import (PARAMS, AffineExpr, ConstraintSet, as_rational, format_rational,
                    parse_affine, reduce_mod2, rref)
from .groupoid import GroupoidGraph, enumerate_groupoid
from .realise import (MFamily, RealisationReport, SuperDatum, affine_matrix, congruent,
                      construct_cartan_family, solve_realisation)

# generic sample exponents: far from every small root of unity
GENERIC_SAMPLES = (Fraction(2, 37), Fraction(2, 41), Fraction(2, 43), Fraction(2, 47), Fraction(2, 53))


@dataclass(frozen=True)
class ChamberSpec:
    diagram: BraidingDiagram
    label: str = ""
    cartan: tuple | None = None
    classes: tuple | None = None
    basis: tuple | None = None


@dataclass(frozen=True)
class View:
    chamber: int
    m: tuple


@dataclass(frozen=True)
class FamilySpec:
    label: str
    views: tuple
    constraints: ConstraintSet

    @property
    def parameters(self) -> tuple:
        names = {v for w in self.views for row in w.m for e in row for v in e.variables}
        return tuple(p for p in PARAMS if p in names)

    def to_family(self) -> MFamily:
        return MFamily(self.views[0].m, self.constraints, label=self.label)


@dataclass(frozen=True)
class Expected:
    verdict: str | None
    families: tuple = ()
    witness: tuple = ()
    charge: Fraction | None = None


@dataclass(frozen=True)
class RowEntry:
    id: str
    row: str
    rank: int
    chambers: tuple
    label: str = ""
    roots_of_unity: dict = field(default_factory=dict)
    generic: dict = field(default_factory=dict)
    validity: ConstraintSet = field(default_factory=ConstraintSet)
    expected: Expected = Expected(None)
    notes: tuple = ()

    @property
    def diagram(self) -> BraidingDiagram:
        return self.chambers[0].diagram

    @property
    def diagrams(self) -> list:
        return [c.diagram for c in self.chambers]

    @property
    def cartans(self) -> list:
        return [c.cartan for c in self.chambers]

    @property
    def expected_charge(self):
        return self.expected.charge

    @property
    def parameters(self) -> tuple:
        return self.diagram.parameters

    @property
    def display(self) -> str:
        return self.label or self.row


# ---------------------------------------------------------------------------
# loading

def _err(path: str, msg: str):
    raise SchemaError(f"{path}: {msg}")


def _affine(x, path):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        _err(path, f"expected an affine expression string, got {x!r}")
    try:
        return parse_affine(str(x))
    except (ParseError, UndeclaredParameter) as exc:
        _err(path, str(exc))


def _rational(x, path):
    try:
        return as_rational(x)
    except (TypeError, ValueError, ZeroDivisionError):
        _err(path, f"expected a rational 'p/q', got {x!r}")


def _square(rows, n, path):
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        _err(path, f"expected a {n}x{n} matrix")


def _diagram(obj, n, path) -> BraidingDiagram:
    if not isinstance(obj, dict) or "diag" not in obj:
        _err(path, "expected {diag, edges}")
    diag = obj["diag"]
    if not isinstance(diag, list) or len(diag) != n:
        _err(path + ".diag", f"expected {n} node exponents")
    d = [_affine(x, f"{path}.diag[{i}]") for i, x in enumerate(diag)]
    edges = obj.get("edges", [["0"] * n for _ in range(n)])
    _square(edges, n, path + ".edges")
    e = [[_affine(x, f"{path}.edges[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(edges)]
    for i in range(n):
        for j in range(i):
            if e[i][j] != e[j][i]:
                _err(f"{path}.edges", f"not symmetric at [{j}][{i}]")
    return BraidingDiagram.from_exponents(d, e)


def _forbidden(item, path):
    out = []
    for k, f in enumerate(item):
        f = str(f)
        if "mod" in f:
            a, b = f.split("mod")
            out.append((_rational(a.strip(), f"{path}[{k}]"), _rational(b.strip(), f"{path}[{k}]")))
        else:
            out.append(_rational(f, f"{path}[{k}]"))
    return tuple(out)


def _constraints(items, path, params=PARAMS) -> ConstraintSet:
    cs = ConstraintSet(params)
    for k, text in enumerate(items):
        if not isinstance(text, str) or text.count("=") != 1:
            _err(f"{path}[{k}]", "expected 'lhs = rhs'")
        lhs, rhs = text.split("=")
        cs = cs.with_equalities([_affine(lhs, f"{path}[{k}]") - _affine(rhs, f"{path}[{k}]")])
    if not cs.is_feasible():
        _err(path, "constraints are contradictory")
    return cs


def _classes(items, n, path):
    if not isinstance(items, list) or len(items) != n:
        _err(path, f"expected {n} root classes")
    try:
        return tuple(RootClass(x) for x in items)
    except ValueError as exc:
        _err(path, str(exc))


def _matrix_int(rows, n, path):
    _square(rows, n, path)
    if any(not isinstance(x, int) for r in rows for x in r):
        _err(path, "expected integers")
    return tuple(tuple(r) for r in rows)


def parse_entry(obj, path="entry") -> RowEntry:
    if not isinstance(obj, dict):
        _err(path, "expected an object")
    for key in ("id", "rank", "chambers"):
        if key not in obj:
            _err(path, f"missing field {key!r}")
    n = obj["rank"]
    if not isinstance(n, int) or n < 1:
        _err(path + ".rank", "expected a positive integer")
    if not isinstance(obj["chambers"], list) or not obj["chambers"]:
        _err(path + ".chambers", "expected a nonempty list")
    chambers = []
    for k, c in enumerate(obj["chambers"]):
        cp = f"{path}.chambers[{k}]"
        if not isinstance(c, dict):
            _err(cp, "expected an object")
        d = _diagram(c.get("diagram"), n, cp + ".diagram")
        cartan = _matrix_int(c["cartan"], n, cp + ".cartan") if "cartan" in c else None
        classes = _classes(c["classes"], n, cp + ".classes") if "classes" in c else None
        basis = _matrix_int(c["basis"], n, cp + ".basis") if "basis" in c else None
        chambers.append(ChamberSpec(d, c.get("label", ""), cartan, classes, basis))
    rou = {}
    for p, N in obj.get("roots_of_unity", {}).items():
        if p not in PARAMS or not isinstance(N, int) or N < 1:
            _err(f"{path}.roots_of_unity.{p}", "expected a declared parameter and a positive order")
        rou[p] = N
    generic = {p: _rational(v, f"{path}.generic.{p}") for p, v in obj.get("generic", {}).items()}
    validity = ConstraintSet(PARAMS)
    for k, ex in enumerate(obj.get("validity", {}).get("exclusions", [])):
        ep = f"{path}.validity.exclusions[{k}]"
        validity = validity.with_exclusion(_affine(ex.get("expr"), ep + ".expr"),
                                           _forbidden(ex.get("forbidden", []), ep + ".forbidden"))
    exp = obj.get("expected", {})
    fams = []
    for k, f in enumerate(exp.get("families", [])):
        fp = f"{path}.expected.families[{k}]"
        views = []
        for v_idx, v in enumerate(f.get("views", [])):
            vp = f"{fp}.views[{v_idx}]"
            ch = v.get("chamber", 0)
            if not isinstance(ch, int) or not 0 <= ch < len(chambers):
                _err(vp + ".chamber", "no such chamber")
            _square(v.get("m"), n, vp + ".m")
            m = [[_affine(x, f"{vp}.m[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(v["m"])]
            for i in range(n):
                for j in range(i):
                    if m[i][j] != m[j][i]:
                        _err(vp + ".m", f"not symmetric at [{j}][{i}]")
            views.append(View(ch, affine_matrix(m)))
        if not views:
            _err(fp, "a family needs at least one view")
        fams.append(FamilySpec(f.get("label", ""), tuple(views), _constraints(f.get("constraints", []), fp + ".constraints")))
    verdict = exp.get("verdict")
    if verdict not in (None, "Solutions", "NoSolution"):
        _err(path + ".expected.verdict", f"unknown verdict {verdict!r}")
    witness = tuple(_rational(x, f"{path}.expected.witness") for x in exp.get("witness", []))
    charge = _rational(exp["charge"], path + ".expected.charge") if exp.get("charge") is not None else None
    return RowEntry(obj["id"], str(obj.get("row", obj["id"])), n, tuple(chambers), obj.get("label", ""),
                    rou, generic, validity, Expected(verdict, tuple(fams), witness, charge),
                    tuple(obj.get("notes", [])))


def load(path) -> list:
    """Read a row file; an empty file holds no rows."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def loads(text: str) -> list:
    if not text.strip():
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    rows = data.get("rows") if isinstance(data, dict) else data
    if not isinstance(rows, list):
        raise SchemaError("rows: expected a list")
    out = [parse_entry(r, f"rows[{k}]") for k, r in enumerate(rows)]
    ids = [e.id for e in out]
    if len(set(ids)) != len(ids):
        raise SchemaError("rows: duplicate ids")
    return out


_BUNDLED: dict = {}


def bundled(rank: int) -> list:
    if rank not in _BUNDLED:
        ref = resources.files(__package__).joinpath("data").joinpath(f"rank{rank}.json")
        if not ref.is_file():
            raise IoError(f"no bundled rows for rank {rank}")
        _BUNDLED[rank] = loads(ref.read_text(encoding="utf-8"))
    return _BUNDLED[rank]


def all_rows() -> list:
    return bundled(2) + bundled(3)


def get_row(row_id: str) -> RowEntry:
    for e in all_rows():
        if e.id == row_id:
            return e
    raise SchemaError(f"unknown row id {row_id!r}")


def primary_rows(entries) -> list:
    """Distinct appendix row numbers, in file order."""
    seen = []
    for e in entries:
        if e.row not in seen:
            seen.append(e.row)
    return seen


# ---------------------------------------------------------------------------
# instantiation

def primitive_exponents(N: int) -> list:
    """All e = 2k/N with gcd(k, N) = 1, i.e. e^{i pi e} primitive of order N."""
    return [Fraction(2 * k, N) for k in range(1, N + 1) if math.gcd(k, N) == 1]


def _check_assignment(entry: RowEntry, assignment: Mapping):
    for p, N in entry.roots_of_unity.items():
        if reduce_mod2(assignment[p]) not in primitive_exponents(N):
            raise ValidityViolated(f"{entry.id}: e^(i pi {p}) must be a primitive root of unity of order {N}")
    for expr, forbidden in entry.validity.exclusions:
        v = expr.evaluate(assignment)
        for f in forbidden:
            hit = ((v - f[0]) / f[1]).denominator == 1 if isinstance(f, tuple) else v == f
            if hit:
                raise ValidityViolated(f"{entry.id}: {expr} = {format_rational(v)} is excluded")


def default_assignment(entry: RowEntry) -> dict:
    out = {p: Fraction(2, N) for p, N in entry.roots_of_unity.items()}
    out.update(entry.generic)
    return out


def instantiate(entry: RowEntry, assignment: Mapping | None = None, check: bool = True) -> list:
    """Concrete diagrams of every stored chamber; chamber I is checked against its Cartan data."""
    full = default_assignment(entry)
    for k, v in (assignment or {}).items():
        if k not in entry.parameters:
            raise ValidityViolated(f"{entry.id}: parameter {k!r} is not used by this row")
        full[k] = as_rational(v)
    missing = [p for p in entry.parameters if p not in full]
    if missing:
        raise ValidityViolated(f"{entry.id}: no value for {', '.join(missing)}")
    _check_assignment(entry, full)
    out = [c.diagram.instantiate(full) for c in entry.chambers]
    if check:
        for spec, d in zip(entry.chambers, out):
            if spec.cartan is None:
                continue
            a = cartan_matrix(d)
            if a != spec.cartan:
                raise CartanMismatch(f"{entry.id} chamber {spec.label or 0}: stored Cartan matrix {spec.cartan} "
                                     f"but the diagram gives {a}")
            if spec.classes is not None and classify_all(d, a) != spec.classes:
                raise CartanMismatch(f"{entry.id} chamber {spec.label or 0}: root classes differ from the stored ones")
    return out


def assignments(entry: RowEntry, samples: int = 1) -> list:
    """Every primitive choice for fixed roots of unity, crossed with generic samples."""
    fixed = list(entry.roots_of_unity)
    gen = [p for p in entry.parameters if p not in entry.roots_of_unity]
    grids = [primitive_exponents(entry.roots_of_unity[p]) for p in fixed]
    out = []
    for combo in itertools.product(*grids):
        base = dict(zip(fixed, combo))
        found = 0
        pool = [tuple(entry.generic.get(p, GENERIC_SAMPLES[0]) for p in gen)]
        pool += [tuple(GENERIC_SAMPLES[(i + k) % len(GENERIC_SAMPLES)] * (-1) ** k for k, _ in enumerate(gen))
                 for i in range(1, 4 * len(GENERIC_SAMPLES))]
        for vals in pool:
            a = dict(base, **dict(zip(gen, vals)))
            try:
                _check_assignment(entry, a)
            except ValidityViolated:
                continue
            if a not in out:
                out.append(a)
                found += 1
            if found >= samples or not gen:
                break
    return out


# ---------------------------------------------------------------------------
# comparing solver families with stored ones

def _solve(pairs, order):
    cs = ConstraintSet(tuple(order))
    return cs.with_equalities(a - b for a, b in pairs)


def match_matrices(template, template_constraints: ConstraintSet, family, fam_constraints=None):
    """Compare two affine matrices as subspaces.

    Returns None when they disagree, otherwise the constraints the match
    imposes on the template parameters. The family must be fully covered,
    i.e. the match may not restrict the family's own parameters.
    """
    pairs = [(x, y) for rt, rf in zip(template, family) for x, y in zip(rt, rf)]
    return match_pairs(pairs, fam_constraints)


def match_pairs(pairs, fam_constraints=None):
    svars = sorted({v for x, _ in pairs for v in x.variables}, key=PARAMS.index)
    tvars = sorted({v for _, y in pairs for v in y.variables})
    fam_eqs = list(fam_constraints.equalities()) if fam_constraints is not None else []
    eqs = [(x, y) for x, y in pairs] + [(e, AffineExpr(0)) for e in fam_eqs]
    st = _solve(eqs, svars + tvars)
    if not st.is_feasible():
        return None
    t_only = _solve(eqs, tvars + svars)
    tset = set(tvars)
    base = _solve([(e, AffineExpr(0)) for e in fam_eqs], tvars) if fam_eqs else ConstraintSet(tuple(tvars))
    for p, e in t_only.solved:
        if p in tset and not (set(e.variables) - tset):
            if not base.reduce(AffineExpr.var(p) - e).is_zero():
                return None
    s_cons = ConstraintSet(tuple(svars))
    s_cons = s_cons.with_equalities(AffineExpr.var(p) - e for p, e in st.solved if p in svars)
    return s_cons


def same_constraints(a: ConstraintSet, b: ConstraintSet) -> bool:
    return all(a.reduce(e).is_zero() for e in b.equalities()) and all(b.reduce(e).is_zero() for e in a.equalities())


def symmetric_frames(graph: GroupoidGraph) -> list:
    """Basis matrices B P of every chamber whose braiding is the initial one up to a permutation P."""
    d0 = graph.chambers[graph.initial].braiding
    n = d0.rank
    out = []
    for c in graph.chambers:
        for perm in itertools.permutations(range(n)):
            if c.braiding.permuted(perm).key() == d0.key():
                B = tuple(tuple(c.basis[s][perm[k]] for k in range(n)) for s in range(n))
                if B not in out:
                    out.append(B)
    return out


def frames_for(graph: GroupoidGraph, target: BraidingDiagram) -> list:
    n = target.rank
    out = []
    for c in graph.chambers:
        for perm in itertools.permutations(range(n)):
            if c.braiding.permuted(perm).key() == target.key():
                out.append(tuple(tuple(c.basis[s][perm[k]] for k in range(n)) for s in range(n)))
    return out


def _joint_pairs(spec: FamilySpec, entry: RowEntry, fam_m, frame):
    pairs = []
    for v in spec.views:
        basis = entry.chambers[v.chamber].basis
        if v.chamber == 0:
            target = congruent(fam_m, frame)
        elif basis is not None:
            target = congruent(congruent(fam_m, frame), basis)
        else:
            continue
        pairs += [(x, y) for rt, rf in zip(v.m, target) for x, y in zip(rt, rf)]
    return pairs


def family_matches(spec: FamilySpec, entry: RowEntry, family: MFamily, graph: GroupoidGraph) -> bool:
    for frame in symmetric_frames(graph):
        cons = match_pairs(_joint_pairs(spec, entry, family.entries, frame))
        if cons is not None and same_constraints(cons, spec.constraints):
            return True
    return False


@dataclass
class RowCheck:
    entry: RowEntry
    ok: bool
    runs: list                     # (assignment, report)
    problems: list

    def summary(self) -> str:
        head = f"{self.entry.id}: {'ok' if self.ok else 'FAILED'}"
        return head if self.ok else head + " (" + "; ".join(self.problems) + ")"


def check_row(entry: RowEntry, budget: int = 10_000) -> RowCheck:
    """Solve every instantiation of a row and compare with its stored expectation."""
    runs = []
    problems = []
    for a in assignments(entry):
        d = instantiate(entry, a)[0]
        g = enumerate_groupoid(d, budget)
        runs.append((a, solve_realisation(d, g)))
    exp = entry.expected
    solved = [(a, r) for a, r in runs if r.solvable]
    if exp.verdict == "NoSolution":
        if solved:
            problems.append("expected no solution")
        if exp.witness:
            want = sorted(exp.witness)
            if not any(sorted(w.values) == want for _, r in runs for w in r.witnesses if w.kind == "conflict"):
                problems.append(f"no witness with values {[format_rational(x) for x in want]}")
    elif exp.verdict == "Solutions":
        if not solved:
            problems.append("expected solutions")
        for spec in exp.families:
            if not any(family_matches(spec, entry, f, r.graph) for _, r in solved for f in r.families):
                problems.append(f"family {spec.label!r} not found")
        for a, r in solved:
            for f in r.families:
                if not any(family_matches(spec, entry, f, r.graph) for spec in exp.families):
                    problems.append(f"unexpected family at {_fmt(a)}: {f.to_json()['m']}")
    return RowCheck(entry, not problems, runs, problems)


def _fmt(a) -> str:
    return ", ".join(f"{k}={format_rational(v)}" for k, v in a.items())


def check_display_views(entry: RowEntry, report: RealisationReport) -> list:
    """Views on displayed chambers without a stored basis, checked one by one.

    Returns the labels of views that no transported solver family reproduces.
    """
    missing = []
    frames = _all_frames(report.graph) if report.families else []
    for spec in entry.expected.families:
        for v in spec.views:
            if v.chamber == 0 or entry.chambers[v.chamber].basis is not None:
                continue
            ok = any(match_matrices(v.m, ConstraintSet(), congruent(fam.entries, frame)) is not None
                     for fam in report.families for frame in frames)
            if not ok:
                missing.append(f"{spec.label}@{entry.chambers[v.chamber].label or v.chamber}")
    return missing


def _all_frames(graph: GroupoidGraph) -> list:
    n = graph.rank
    return [tuple(tuple(c.basis[s][perm[k]] for k in range(n)) for s in range(n))
            for c in graph.chambers for perm in itertools.permutations(range(n))]


def verify_tables(rank: int, budget: int = 10_000) -> list:
    return [check_row(e, budget) for e in bundled(rank) if e.expected.verdict is not None]


# ---------------------------------------------------------------------------
# generators

CARTAN_TYPES = "ABCDEFG"


def cartan_type(kind: str, n: int) -> tuple:
    """Generalized Cartan matrix of a finite type, Bourbaki numbering, a_ij = 2(a_i, a_j)/(a_i, a_i)."""
    kind = kind.upper()
    if kind not in CARTAN_TYPES or n < 1:
        raise ValueError(f"unknown Cartan type {kind}{n}")
    a = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    if kind == "A":
        pass
    elif kind == "B" and n >= 2:
        a[n - 2][n - 1] = -2
    elif kind == "C" and n >= 2:
        a[n - 1][n - 2] = -2
    elif kind == "D" and n >= 4:
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    elif kind == "E" and n in (6, 7, 8):
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        links = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]
        for i, j in links:
            a[i][j] = a[j][i] = -1
    elif kind == "F" and n == 4:
        a[1][2] = -2
    elif kind == "G" and n == 2:
        a[0][1] = -3
    else:
        raise ValueError(f"unknown Cartan type {kind}{n}")
    return tuple(tuple(row) for row in a)


def cartan_row(kind: str, n: int, param: str = "r"):
    """Generic diagram q_ii = e^{i pi m_ii}, q_ij q_ji = e^{2 i pi m_ij} of a Cartan type, with its m-family."""
    a = cartan_type(kind, n)
    fam = construct_cartan_family(a, param=param)
    m = fam.entries
    edges = [[m[i][j] * 2 if i != j else AffineExpr(0) for j in range(n)] for i in range(n)]
    return BraidingDiagram.from_exponents([m[i][i] for i in range(n)], edges), a, fam


def _unit(size, k):
    v = [0] * size
    v[k] = 1
    return tuple(v)


def _lin(*terms):
    """Sum of c * v over (c, v) pairs."""
    size = len(terms[0][1])
    return tuple(sum(c * v[i] for c, v in terms) for i in range(size))


def _signed_pairs(us, vs, distinct=False):
    out = []
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            if distinct and j <= i:
                continue
            for s in (1, -1):
                for t in (1, -1):
                    out.append(_lin((s, u), (t, v)))
    return out


def _simple_coords(simple, v):
    """Coordinates of v in the basis of simple roots (which span the ambient lattice part used)."""
    n = len(simple)
    rows = [[Fraction(simple[j][i]) for j in range(n)] + [Fraction(v[i])] for i in range(len(v))]
    R, piv = rref(rows, n + 1)
    if n in piv:
        raise ValueError("vector outside the span of the simple roots")
    x = [Fraction(0)] * n
    for row, p in zip(R, piv):
        x[p] = row[n]
    if any(c.denominator != 1 for c in x):
        raise ValueError("root is not an integral combination of simple roots")
    return tuple(int(c) for c in x)


def _datum(name, simple, roots, fermion, kac_form, scales):
    """SuperDatum from an epsilon-delta realization.

    The Kac form is rescaled blockwise: entries touching a simple root
    left of the fermion get scales[0], the others scales[1]. This puts
    both bosonic blocks in their positive normalisation.
    """
    n = len(simple)
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j == fermion:
                continue
            s = scales[0] if min(i, j) < fermion else scales[1]
            G[i][j] = s * kac_form(simple[i], simple[j])
    pos = []
    for v in roots:
        c = _simple_coords(simple, v)
        if all(x >= 0 for x in c) and c not in pos:
            pos.append(c)
    return SuperDatum(name, tuple(tuple(int(x) for x in row) for row in G), fermion, tuple(pos))


def _form(n_eps):
    def form(x, y):
        return sum(x[i] * y[i] for i in range(n_eps)) - sum(x[i] * y[i] for i in range(n_eps, len(x)))
    return form


def super_type(kind: str, m: int = 0, n: int = 0) -> SuperDatum:
    """Standard chamber of a basic Lie superalgebra.

    A(m,n), B(m,n) and D(m,n) take the two block sizes; C takes its rank;
    G and F ignore the sizes. Positive roots come from the epsilon-delta
    realizations, so only the inner products are normalisation dependent.
    """
    kind = kind.upper()
    if kind == "G":
        G = ((0, -1, 0), (-1, 2, -3), (0, -3, 6))
        labels = ["1", "2", "3", "12", "23", "223", "123", "1223", "12223", "2223", "22233", "1222233", "122233"]
        return SuperDatum("G(3)", G, 0, tuple(_label_vec(s, 3) for s in labels))
    if kind == "F":
        G = ((4, -2, 0, 0), (-2, 4, -2, 0), (0, -2, 2, -1), (0, 0, -1, 0))
        labels = ["1", "2", "3", "4", "12", "23", "34", "233", "123", "234", "1233", "2334", "1234", "12233",
                  "12334", "1223334", "122334", "12233344"]
        # the two strongly orthogonal pairs are listed explicitly for F(4)
        pairs = ((_label_vec("34", 4), _label_vec("122334", 4)), (_label_vec("234", 4), _label_vec("12334", 4)))
        return SuperDatum("F(4)", G, 3, tuple(_label_vec(s, 4) for s in labels), pairs)
    if kind == "A":
        if m < 0 or n < 0 or m == n == 0:
            raise ValueError("A(m,n) needs m, n >= 0, not both zero")
        M, N = m + 1, n + 1
        e = [_unit(M + N, i) for i in range(M)]
        d = [_unit(M + N, M + j) for j in range(N)]
        simple = [_lin((1, e[i]), (-1, e[i + 1])) for i in range(M - 1)] + [_lin((1, e[-1]), (-1, d[0]))]
        simple += [_lin((1, d[j]), (-1, d[j + 1])) for j in range(N - 1)]
        roots = [_lin((1, u), (-1, v)) for grp in (e, d) for u in grp for v in grp if u != v]
        roots += [_lin((s, u), (-s, v)) for u in e for v in d for s in (1, -1)]
        return _datum(f"A({m},{n})", simple, roots, M - 1, _form(M), (1, -1))
    if kind == "B":
        if m < 1 or n < 1:
            raise ValueError("B(m,n) needs m, n >= 1")
        e = [_unit(m + n, i) for i in range(m)]
        d = [_unit(m + n, m + j) for j in range(n)]
        simple = [_lin((1, d[j]), (-1, d[j + 1])) for j in range(n - 1)] + [_lin((1, d[-1]), (-1, e[0]))]
        simple += [_lin((1, e[i]), (-1, e[i + 1])) for i in range(m - 1)] + [e[-1]]
        roots = _signed_pairs(e, e, True) + [x for u in e for x in (u, _lin((-1, u)))]
        roots += _signed_pairs(d, d, True) + [x for u in d for x in (_lin((2, u)), _lin((-2, u)))]
        roots += _signed_pairs(d, e) + [x for u in d for x in (u, _lin((-1, u)))]
        return _datum(f"B({m},{n})", simple, roots, n - 1, _form(m), (-1, 1))
    if kind == "C":
        if m < 2:
            raise ValueError("C(n) needs n >= 2")
        k = m - 1
        e = _unit(1 + k, 0)
        d = [_unit(1 + k, 1 + j) for j in range(k)]
        simple = [_lin((1, e), (-1, d[0]))] + [_lin((1, d[j]), (-1, d[j + 1])) for j in range(k - 1)]
        simple += [_lin((2, d[-1]))]
        roots = _signed_pairs(d, d, True) + [x for u in d for x in (_lin((2, u)), _lin((-2, u)))]
        roots += _signed_pairs([e], d)
        return _datum(f"C({m})", simple, roots, 0, _form(1), (1, -1))
    if kind == "D":
        if m < 2 or n < 1:
            raise ValueError("D(m,n) needs m >= 2, n >= 1")
        e = [_unit(m + n, i) for i in range(m)]
        d = [_unit(m + n, m + j) for j in range(n)]
        simple = [_lin((1, d[j]), (-1, d[j + 1])) for j in range(n - 1)] + [_lin((1, d[-1]), (-1, e[0]))]
        simple += [_lin((1, e[i]), (-1, e[i + 1])) for i in range(m - 1)] + [_lin((1, e[-2]), (1, e[-1]))]
        roots = _signed_pairs(e, e, True)
        roots += _signed_pairs(d, d, True) + [x for u in d for x in (_lin((2, u)), _lin((-2, u)))]
        roots += _signed_pairs(d, e)
        return _datum(f"D({m},{n})", simple, roots, n - 1, _form(m), (-1, 1))
    raise ValueError(f"unknown super type {kind}")


def _label_vec(s, n):
    v = [0] * n
    for ch in s:
        v[int(ch) - 1] += 1
    return tuple(v)


def superlie_row(datum: SuperDatum):
    """Generic diagram of a super type from its m-family, parameters kept free."""
    from .realise import construct_superlie_family
    fam = construct_superlie_family(datum)
    m = fam.entries
    n = len(m)
    diag = [m[i][i] for i in range(n)]
    edges = [[m[i][j] * 2 if i != j else AffineExpr(0) for j in range(n)] for i in range(n)]
    return BraidingDiagram.from_exponents(diag, edges), fam
