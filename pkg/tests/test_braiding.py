from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nichols_lattice.braiding import (BraidingDiagram, RootClass, cartan_matrix, classify_all, classify_root,
                                      format_diagram, pair_choices, parse_diagram)
from nichols_lattice.errors import NotFiniteType, ParseError
from nichols_lattice.exact import reduce_mod2, unit_root_order


def sl21(e):
    """Chamber I of sl(2|1): nodes q^2 and -1, edge q^-2, with q = e^{i pi e}."""
    return BraidingDiagram.from_exponents([2 * e, 1], [[0, -2 * e], [-2 * e, 0]])


def test_triangle_cartan():
    z = F(2, 3)
    d = BraidingDiagram.from_exponents([1, 1, 1], [[0, z, z], [z, 0, z], [z, z, 0]])
    assert cartan_matrix(d) == ((2, -1, -1), (-1, 2, -1), (-1, -1, 2))


def test_disconnected_nodes():
    d = BraidingDiagram.from_exponents([F(2, 5), F(2, 7)], [[0, 0], [0, 0]])
    assert cartan_matrix(d) == ((2, 0), (0, 2))


def test_sl21_cartan_and_classes():
    d = sl21(F(1, 3))
    a = cartan_matrix(d)
    assert a == ((2, -1), (-1, 2))
    assert classify_root(d, a, 0) is RootClass.CARTAN_ONLY
    assert classify_root(d, a, 1) is RootClass.TRUNCATION_ONLY


def test_sl21_at_q_squared_minus_one():
    d = sl21(F(1, 2))
    assert classify_all(d) == (RootClass.BOTH, RootClass.BOTH)


def test_rank_one_is_both():
    d = parse_diagram("rank=1; q[1]=1")
    assert cartan_matrix(d) == ((2,),)
    assert classify_all(d) == (RootClass.BOTH,)


def test_not_finite_type():
    d = BraidingDiagram.from_exponents([0, 1], [[0, F(1, 3)], [F(1, 3), 0]])
    with pytest.raises(NotFiniteType):
        cartan_matrix(d)


def test_parse_row5_chamber():
    d = parse_diagram("rank=2; q[1]=2r; q[2]=1; q[1,2]=-2r")
    assert d.rank == 2 and d.parameters == ("r",)
    c = d.instantiate({"r": F(1, 5)})
    assert (c.node(0), c.node(1), c.edge(0, 1)) == (F(2, 5), 1, F(8, 5))


def test_parse_reduces_mod_two():
    d = parse_diagram("rank=1; q[1]=5/2")
    assert d.node(0) == F(1, 2)
    assert format_diagram(d) == "rank=1; q[1]=1/2"


@pytest.mark.parametrize("text", [
    "rank=2; q[1]=2r; q[2]=1; q[1,2]=-2r",
    "rank=3; q[1]=1; q[2]=2r'; q[3]=1; q[1,2]=-2r'; q[2,3]=r' + r''",
])
def test_format_round_trip(text):
    d = parse_diagram(text)
    assert format_diagram(parse_diagram(format_diagram(d))) == format_diagram(d)
    assert parse_diagram(format_diagram(d)).key() == d.key()


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_diagram("rank=2; q[1]=2r;\nq[3]=1")
    assert info.value.line == 2


exponent = st.integers(1, 12).flatmap(lambda n: st.integers(0, 2 * n - 1).map(lambda k: F(k, n)))


@given(st.integers(2, 3).flatmap(lambda n: st.tuples(st.just(n), st.lists(exponent, min_size=6, max_size=6))))
def test_cartan_definition_and_classification(data):
    n, xs = data
    diag = xs[:n]
    edges = [[0] * n for _ in range(n)]
    k = n
    for i in range(n):
        for j in range(i + 1, n):
            edges[i][j] = edges[j][i] = xs[k]
            k += 1
    d = BraidingDiagram.from_exponents(diag, edges)
    try:
        a = cartan_matrix(d)
    except NotFiniteType:
        assert any(reduce_mod2(diag[i]) == 0 and reduce_mod2(edges[i][j]) != 0
                   for i in range(n) for j in range(n) if i != j)
        return
    for i in range(n):
        assert a[i][i] == 2
        for j in range(n):
            if i == j:
                continue
            assert a[i][j] <= 0
            m = -a[i][j]
            assert reduce_mod2(-m * diag[i] - edges[i][j]) == 0 or reduce_mod2((1 + m) * diag[i]) == 0
            assert m < max(unit_root_order(diag[i]), 1) or m == 0
            assert pair_choices(d, a, i, j)
    # never raises Inconsistent on a computed Cartan matrix
    assert len(classify_all(d, a)) == n
