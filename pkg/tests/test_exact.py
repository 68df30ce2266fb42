from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nichols_lattice.errors import ParseError, UnboundParameter, UndeclaredParameter
from nichols_lattice.exact import (AffineExpr, ConstraintSet, UnitRoot, as_rational, check_congruence,
                                   format_affine, format_rational, parse_affine, reduce_mod2,
                                   solve_congruences, solve_linear, unit_root_order)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=60)


@pytest.mark.parametrize("e, want", [(F(7, 3), F(1, 3)), (F(-1, 2), F(3, 2)), (2, 0), (0, 0), (F(-4), 0)])
def test_reduce_mod2_examples(e, want):
    assert reduce_mod2(e) == want


@given(rationals, st.integers(-50, 50))
def test_reduce_mod2_is_periodic(a, b):
    r = reduce_mod2(a + 2 * b)
    assert r == reduce_mod2(a)
    assert 0 <= r < 2
    assert ((r - a) / 2).denominator == 1


@pytest.mark.parametrize("e, want", [(1, 2), (F(2, 3), 3), (F(1, 2), 4), (0, 1), (F(1, 6), 12)])
def test_unit_root_order_examples(e, want):
    assert unit_root_order(UnitRoot(e)) == want
    assert unit_root_order(e) == want


def test_unit_root_order_matches_brute_force():
    for den in range(1, 51):
        for num in range(0, 2 * den):
            e = F(num, den)
            n = 1
            while (n * e / 2).denominator != 1:
                n += 1
            assert unit_root_order(e) == n, e


def test_unit_root_equality_is_mod_two():
    assert UnitRoot(F(1, 2)) == UnitRoot(F(5, 2))
    assert UnitRoot(F(7, 3)).exponent == F(1, 3)
    assert UnitRoot(F(1, 3)) != UnitRoot(F(2, 3))


def test_rational_serialisation():
    assert as_rational("-3/4") == F(-3, 4)
    assert format_rational(F(4, 2)) == "2"
    assert format_rational(F(-3, 4)) == "-3/4"


def test_affine_parse_and_format():
    e = parse_affine("r' + r'' - 1")
    assert e.coefficient("r'") == 1 and e.constant == -1
    assert format_affine(e) == "r' + r'' - 1"
    assert parse_affine("2r - 2/3").evaluate({"r": F(1, 3)}) == 0
    assert parse_affine("r′ + r″").variables == ("r'", "r''")


def test_affine_errors():
    with pytest.raises(UndeclaredParameter):
        parse_affine("2x")
    with pytest.raises((ParseError, UndeclaredParameter)):
        parse_affine("2r +")
    with pytest.raises(UnboundParameter):
        parse_affine("2r").evaluate({})


def test_affine_arithmetic_drops_zero_coefficients():
    r = AffineExpr.var("r")
    e = (r * 2 + 1) - r * 2
    assert e.is_constant() and e.constant == 1
    assert "r" not in e.coeffs


def test_solve_linear_examples():
    s = solve_linear([parse_affine("r' + r'' - 1")])
    assert s.describe() == ["r'' = -r' + 1"]
    s = solve_linear([parse_affine("2r - 2/3"), parse_affine("3r - 1")])
    assert s.describe() == ["r = 1/3"]
    assert not solve_linear([parse_affine("r - 1"), parse_affine("r - 2")]).is_feasible()


def test_solve_linear_rejects_undeclared():
    with pytest.raises(UndeclaredParameter):
        solve_linear([parse_affine("2r")], params=("t",))


affine = st.builds(
    lambda c, a, b, d: AffineExpr(c) + AffineExpr.var("r", a) + AffineExpr.var("r'", b) + AffineExpr.var("r''", d),
    rationals, rationals, rationals, rationals)


@given(st.lists(affine, min_size=1, max_size=3))
def test_solve_linear_substitution_and_idempotence(eqs):
    s = solve_linear(eqs)
    if not s.is_feasible():
        return
    for e in eqs:
        assert s.reduce(e).is_zero()
    again = s.with_equalities(s.equalities())
    assert again.solved == s.solved


@pytest.mark.parametrize("r, want", [(F(1, 3), True), (F(4, 3), True), (F(1, 2), False)])
def test_check_congruence_examples(r, want):
    assert check_congruence(parse_affine("2r"), F(2, 3), {"r": r}) is want


def test_check_congruence_unbound():
    with pytest.raises(UnboundParameter):
        check_congruence(parse_affine("2r"), F(2, 3), {})


def test_solve_congruences():
    t = AffineExpr.var("t1")
    sol = solve_congruences([t * 2, t * 3], [F(2, 3), 1])
    assert sol is not None
    assert check_congruence(t * 2, F(2, 3), sol) and check_congruence(t * 3, 1, sol)
    # 2t = 0 and 2t = 1 (mod 2) cannot both hold
    assert solve_congruences([t * 2, t * 2], [0, 1]) is None


def test_constraint_set_satisfaction():
    cs = ConstraintSet().with_equalities([parse_affine("r' + r'' - 1")])
    cs = cs.with_exclusion(parse_affine("r'"), [F(1, 2)])
    assert cs.satisfied_by({"r'": F(1, 3), "r''": F(2, 3)})
    assert not cs.satisfied_by({"r'": F(1, 2), "r''": F(1, 2)})
    assert not cs.satisfied_by({"r'": F(1, 3), "r''": F(1, 3)})
