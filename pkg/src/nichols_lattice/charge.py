"""Background charge and central charge of a realising lattice.

The Virasoro structure compatible with the screenings v_1..v_n is fixed
by Q with (v_i, v_i)/2 - (v_i, Q) = 1. Writing Q = sum a_j v_j turns this
into the linear system  sum_j a_j m_ij = m_ii/2 - 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import SingularGram
from .exact import AffineExpr, as_rational, format_rational, solve_matrix


@dataclass(frozen=True)
class BackgroundCharge:
    coeffs: tuple

    def norm(self, m) -> Fraction:
        """(Q, Q) in the Gram form m."""
        a = self.coeffs
        n = len(a)
        return sum((a[i] * m[i][j] * a[j] for i in range(n) for j in range(n)), Fraction(0))

    def __str__(self):
        return "[" + ", ".join(format_rational(x) for x in self.coeffs) + "]"


def concrete_matrix(m, assignment: Mapping | None = None) -> tuple:
    """Rational matrix from numbers, strings, AffineExpr or an MFamily-like object."""
    entries = getattr(m, "entries", m)
    out = []
    for row in entries:
        cells = []
        for x in row:
            if isinstance(x, AffineExpr):
                x = x.evaluate(assignment or {})
            cells.append(as_rational(x))
        out.append(tuple(cells))
    n = len(out)
    if any(len(row) != n for row in out):
        raise ValueError("Gram matrix must be square")
    for i in range(n):
        for j in range(i):
            if out[i][j] != out[j][i]:
                raise ValueError(f"Gram matrix not symmetric at ({j + 1},{i + 1})")
    return tuple(out)


def background_charge(m, assignment: Mapping | None = None) -> BackgroundCharge:
    m = concrete_matrix(m, assignment)
    rhs = [m[i][i] / 2 - 1 for i in range(len(m))]
    a = solve_matrix(m, rhs)
    if a is None:
        raise SingularGram("the Gram matrix is singular; no unique background charge")
    return BackgroundCharge(tuple(a))


def central_charge(m, assignment: Mapping | None = None) -> Fraction:
    m = concrete_matrix(m, assignment)
    q = background_charge(m)
    return len(m) - 12 * q.norm(m)


def central_charge_rank2(m, assignment: Mapping | None = None) -> Fraction:
    """Closed form for two screenings; no linear solve involved."""
    m = concrete_matrix(m, assignment)
    if len(m) != 2:
        raise ValueError("central_charge_rank2 needs a 2x2 matrix")
    (m11, m12), (_, m22) = m
    det = m11 * m22 - m12 * m12
    if det == 0:
        raise SingularGram("m11*m22 - m12^2 vanishes")
    x, y = m22 - 2, -(m11 - 2)
    norm = x * x * m11 + 2 * x * y * m12 + y * y * m22
    return 2 - 3 * norm / det


def minimal_model_charge(p: int, pp: int) -> Fraction:
    """13 - 6p/p' - 6p'/p, reached by the rank-one lattice m = [[2p'/p]]."""
    return 13 - Fraction(6 * p, pp) - Fraction(6 * pp, p)


def charge_invariant_under(m, transforms: Sequence) -> bool:
    """central_charge(R^T m R) equals central_charge(m) for every R given."""
    from .realise import congruent

    m = concrete_matrix(m)
    c = central_charge(m)
    return all(central_charge(concrete_matrix(congruent(m, R))) == c for R in transforms)
