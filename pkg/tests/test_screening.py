import itertools
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nichols_lattice.braiding import BraidingDiagram
from nichols_lattice.errors import ConstraintViolated, NicholsError
from nichols_lattice.exact import AffineExpr, ConstraintSet
from nichols_lattice.realise import MFamily
from nichols_lattice.screening import (SUBMULTISETS, SUBSETS, Finite, Kind, Pole, Status, WeightContext,
                                       continued_smallness_a, continued_smallness_b, defining_relations, f_tilde,
                                       in_minus_n, predicted_pole, relation_report, selberg, smallness_holds,
                                       status_of)

A2_HALF = [[1, F(-1, 2)], [F(-1, 2), 1]]


# ---------------------------------------------------------------------------
# smallness

@pytest.mark.parametrize("mode", [SUBSETS, SUBMULTISETS])
def test_positive_definite_a2_is_small(mode):
    ctx = WeightContext.of(A2_HALF)
    for d in itertools.product(range(7), repeat=2):
        if sum(d) <= 6:
            assert smallness_holds(ctx, d, mode)


def test_single_generator_is_small():
    ctx = WeightContext.of([[-5, 3], [3, -7]])
    assert smallness_holds(ctx, (1, 0)) and smallness_holds(ctx, (0, 1))


def test_negative_norm_square_is_not_small():
    assert not smallness_holds(WeightContext.of([[-1]]), (2,))


def test_smallness_rejects_bad_input():
    with pytest.raises(ValueError):
        smallness_holds(WeightContext.of([[1]]), (-1,))
    with pytest.raises(ValueError):
        smallness_holds(WeightContext.of([[1]]), (2,), mode="everything")


def test_submultisets_is_stricter():
    m = [[F(1, 2), F(-1)], [F(-1), F(1, 2)]]
    ctx = WeightContext.of(m)
    seen_gap = False
    for d in itertools.product(range(5), repeat=2):
        if smallness_holds(ctx, d, SUBMULTISETS):
            assert smallness_holds(ctx, d, SUBSETS)
        elif smallness_holds(ctx, d, SUBSETS):
            seen_gap = True
    assert seen_gap


# ---------------------------------------------------------------------------
# continued smallness

def test_minus_n():
    assert in_minus_n(-1) and in_minus_n(-4)
    assert not in_minus_n(0) and not in_minus_n(F(-1, 2)) and not in_minus_n(2)


@pytest.mark.parametrize("m_vv, n, want", [(-1, 2, False), (F(1, 3), 7, True), (F(-2, 3), 3, False),
                                           (F(-2, 3), 2, True)])
def test_continued_smallness_a(m_vv, n, want):
    assert continued_smallness_a(m_vv, n) is want


@pytest.mark.parametrize("m_1j, m_ij, n, want", [(F(1, 2), F(1, 2), 3, True), (-1, 1, 2, False)])
def test_continued_smallness_b(m_1j, m_ij, n, want):
    assert continued_smallness_b(m_1j, m_ij, n) is want


@pytest.mark.parametrize("r", [F(k, 12) for k in range(-36, 37) if k])
def test_long_serre_condition(r):
    # Cartan, d = 1: the Serre relation with two copies of one screening
    if (2 * r).denominator == 1 and 2 * r > 0:
        return
    holds = continued_smallness_b(-2 * r, 2 * r, 3)
    assert holds is (not in_minus_n(2 * r))


def test_continued_smallness_preconditions():
    with pytest.raises(ValueError):
        continued_smallness_a(1, 0)
    with pytest.raises(ValueError):
        continued_smallness_b(1, 1, 1)


# ---------------------------------------------------------------------------
# Selberg integral

def test_selberg_beta():
    assert selberg(1, 1, F(1, 3), 1) == 1
    grid = [F(k, 4) for k in range(1, 13)]
    for a in grid:
        for b in grid:
            want = mpmath.beta(float(a), float(b))
            got = selberg(a, b, F(1, 2), 1)
            assert abs(got - want) <= 1e-10 * abs(want)


def test_selberg_pole():
    p = selberg(1, 1, F(-1, 2), 2)
    assert isinstance(p, Pole) and p.argument == 0
    assert isinstance(selberg(1.0, 1.0, -0.5, 2), Pole)
    assert isinstance(selberg(1.0, 1.0, -0.5 + 1e-12, 2), Pole)
    assert not isinstance(selberg(1.0, 1.0, -0.5 + 1e-6, 2), Pole)


def test_selberg_against_quadrature():
    # a = b = c = 1/2, n = 2 on 1 > z1 > z2 > 0, with z = sin^2(t)
    inner = lambda t1: mpmath.quad(lambda t2: 4 * abs(mpmath.sin(t1) ** 2 - mpmath.sin(t2) ** 2), [0, t1])
    want = mpmath.quad(inner, [0, mpmath.pi / 2])
    assert abs(selberg(F(1, 2), F(1, 2), F(1, 2), 2) - want) < 1e-8


def test_selberg_generic_quadrature():
    a, b, c = F(3, 2), F(5, 4), F(1, 3)
    f = lambda z1: mpmath.quad(lambda z2: z1 ** (a - 1) * z2 ** (a - 1) * (1 - z1) ** (b - 1) * (1 - z2) ** (b - 1)
                               * (z1 - z2) ** (2 * c), [0, z1])
    want = mpmath.quad(f, [0, 1])
    assert abs(selberg(a, b, c, 2) - want) < 1e-8


def _raw_f_tilde(m_vl, m_vv, n):
    """Prefactor times the Gamma product at a generic point, high precision."""
    a, b, c = m_vl + 1, mpmath.mpf(1), m_vv / 2
    pre = mpmath.mpf(1)
    for s in range(n):
        pre *= mpmath.expjpi(s * m_vv + 2 * m_vl) - 1
    g = mpmath.mpf(1)
    for k in range(n):
        g *= mpmath.gamma(a + k * c) * mpmath.gamma(b + k * c) * mpmath.gamma(1 + (k + 1) * c)
        g /= mpmath.gamma(a + b + (n + k - 1) * c) * mpmath.gamma(1 + c)
    return pre * g / mpmath.factorial(n)


@pytest.mark.parametrize("m_vl, m_vv, n", [(-1, F(1, 3), 1), (-1, F(1, 3), 2), (-2, F(2, 3), 2), (F(-4, 3), F(2, 3), 3),
                                           (F(1, 3), F(1, 2), 3), (F(-1, 2), F(1, 5), 2)])
def test_f_tilde_limit_against_perturbation(m_vl, m_vv, n):
    got = f_tilde(m_vl, m_vv, n)
    assert isinstance(got, Finite)
    with mpmath.workdps(50):
        eps = mpmath.mpf(10) ** -25
        want = _raw_f_tilde(mpmath.mpf(m_vl.numerator if isinstance(m_vl, F) else m_vl) /
                            (m_vl.denominator if isinstance(m_vl, F) else 1) + eps,
                            mpmath.mpf(m_vv.numerator) / m_vv.denominator, n)
    assert abs(complex(want) - got.value) <= 1e-8 * max(1, abs(got.value))


def test_f_tilde_examples():
    assert f_tilde(0, F(1, 3), 1) == Finite(0j, "")
    assert isinstance(f_tilde(F(1, 5), -2, 2), Pole)
    assert "cancelled" in f_tilde(-1, F(1, 3), 1).note


pairs = st.tuples(st.fractions(min_value=-3, max_value=3, max_denominator=12),
                  st.fractions(min_value=-3, max_value=3, max_denominator=12),
                  st.integers(1, 4))


@given(pairs)
def test_continued_smallness_implies_finite(args):
    m_vl, m_vv, n = args
    res = f_tilde(m_vl, m_vv, n)
    if continued_smallness_a(m_vv, n):
        assert isinstance(res, Finite)
    assert isinstance(res, Pole) is predicted_pole(m_vv, n)


@given(pairs)
def test_float_and_exact_pole_detection_agree(args):
    m_vl, m_vv, n = args
    a, b, c = m_vl + 1, F(1), m_vv / 2
    exact = isinstance(selberg(a, b, c, n), Pole)
    approx = isinstance(selberg(float(a), float(b), float(c), n), Pole)
    assert exact is approx


# ---------------------------------------------------------------------------
# relations

def test_a3_at_minus_one_has_extra_relation():
    d = BraidingDiagram.from_exponents([1, 1, 1], [[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    extras = [r for r in defining_relations(d) if r.kind is Kind.EXTRA]
    assert [(r.tag, r.degree) for r in extras] == [("A3_qm1", (1, 2, 1))]


def test_b2_at_i_has_extra_relation():
    d = BraidingDiagram.from_exponents([F(1, 2), 1], [[0, 1], [1, 0]])
    extras = [r for r in defining_relations(d) if r.kind is Kind.EXTRA]
    assert ("B2_qi_or_zeta3", (3, 2)) in [(r.tag, r.degree) for r in extras]


def test_g2_at_primitive_sixth_root():
    q = F(1, 3)
    d = BraidingDiagram.from_exponents([q, 3 * q], [[0, -3 * q], [-3 * q, 0]])
    tags = sorted(r.tag for r in defining_relations(d) if r.kind is Kind.EXTRA)
    assert tags == [f"G2_zeta6_or_i_{k}" for k in range(1, 5)]


def test_generic_cartan_has_no_extras():
    r = F(2, 41)
    d = BraidingDiagram.from_exponents([2 * r, 4 * r], [[0, -4 * r], [-4 * r, 0]])
    rels = defining_relations(d)
    kinds = {x.kind for x in rels}
    assert kinds == {Kind.TRUNCATION, Kind.SERRE}
    serre = sorted(x.degree for x in rels if x.kind is Kind.SERRE)
    assert serre == [(1, 2), (3, 1)]
    assert len([x for x in rels if x.kind is Kind.TRUNCATION]) == 4


def test_serre_degree_matches_cartan():
    d = BraidingDiagram.from_exponents([F(2, 29), F(6, 29)], [[0, F(-6, 29)], [F(-6, 29), 0]])
    for x in defining_relations(d):
        if x.kind is Kind.SERRE:
            i, j = x.pair
            assert x.degree[i] == x.power and x.degree[j] == 1


def _statuses(m):
    return [(rel, st) for rel, st in relation_report(m)]


def test_rank_one_truncation():
    (rel, st), = _statuses([[F(2, 3)]])
    assert rel.kind is Kind.TRUNCATION and st.holds
    (rel, st), = _statuses([[F(-2, 3)]])
    assert st.status is Status.EXPECTED_FAIL
    assert "local screening" in st.note


def test_long_serre_by_identity():
    report = _statuses([[-1, F(1, 2)], [F(1, 2), -1]])
    serre = [rs for rel, rs in report if rel.kind is Kind.SERRE]
    assert serre and all(rs.status is Status.HOLDS_BY_IDENTITY for rs in serre)


@pytest.mark.parametrize("r", [F(1, 5), F(-1, 5), F(-7, 3), F(2, 7)])
def test_fermionic_truncation_always_holds(r):
    m = [[2 * r, -r], [-r, 1]]
    for rel, rs in _statuses(m):
        if rel.kind is Kind.TRUNCATION and rel.root == (0, 1):
            assert rs.holds


def test_non_simple_truncation_is_undetermined():
    r = F(-1, 7)
    m = [[2 * r, -r], [-r, 2 * r]]
    for rel, rs in _statuses(m):
        if rel.kind is Kind.TRUNCATION and not rel.simple and rs.status is not Status.HOLDS_BY_SMALLNESS:
            assert rs.status is Status.UNDETERMINED and "conjecture" in rs.note


def test_relation_report_checks_constraints():
    r, r1 = AffineExpr.var("r'"), AffineExpr.var("r''")
    fam = MFamily([[r * 2, -r, 0], [-r, 1, -r1], [0, -r1, r1 * 2]],
                  ConstraintSet(("r'", "r''")).with_equalities([r + r1 - 1]))
    with pytest.raises(ConstraintViolated):
        relation_report(fam, {"r'": F(1, 5), "r''": F(1, 5)})
    assert relation_report(fam, {"r'": F(1, 5), "r''": F(4, 5)})


rank2 = st.tuples(*[st.fractions(min_value=-2, max_value=2, max_denominator=8)] * 3)


@given(rank2)
def test_smallness_excludes_expected_failures(entries):
    m11, m12, m22 = entries
    m = [[m11, m12], [m12, m22]]
    try:
        report = relation_report(m, budget=200)
    except NicholsError:
        return
    for rel, rs in report:
        subs = itertools.product(*(range(x + 1) for x in rel.degree))
        if all(smallness_holds(WeightContext.of(m), s) for s in subs):
            assert rs.status is not Status.EXPECTED_FAIL
        assert rs.status is status_of(rel, m).status
