"""Brute-force Nichols algebra oracle in low degree.

B(q) in degree n is the image of the quantum symmetrizer on the n-fold
tensor power, so its dimension is a matrix rank. Braiding scalars are
roots of unity, matrix entries are sums of them, and ranks are taken
exactly in the cyclotomic field.

Only q_ii and q_ij q_ji enter the dimensions, so the symmetric gauge
q_ij = q_ji = (q_ij q_ji)^(1/2) is used, realised by halving exponents.
"""
from __future__ import annotations

import functools
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from sympy import Symbol, cyclotomic_poly

from .braiding import BraidingDiagram
from .errors import DegreeCapExceeded
from .exact import lcm, solve_matrix, unit_root_order
from .kernels import symmetrizer_counts

DEFAULT_CAP = 6


# ---------------------------------------------------------------------------
# cyclotomic scalars

@functools.lru_cache(maxsize=None)
def _modulus(N: int) -> tuple:
    """Coefficients of the N-th cyclotomic polynomial, lowest degree first."""
    return tuple(int(c) for c in reversed(cyclotomic_poly(N, Symbol("x"), polys=True).all_coeffs()))


def _reduce(coeffs, N: int) -> tuple:
    mod = _modulus(N)
    phi = len(mod) - 1
    c = [Fraction(x) for x in coeffs]
    for top in range(len(c) - 1, phi - 1, -1):
        lead = c[top]
        if lead:
            for k in range(phi + 1):
                c[top - phi + k] -= lead * mod[k]
    c = c[:phi] + [Fraction(0)] * (phi - len(c))
    return tuple(c)


@dataclass(frozen=True)
class CycloScalar:
    """Element of Q(zeta_N), zeta_N = e^(2 pi i / N), in the power basis."""
    N: int
    coeffs: tuple

    @classmethod
    def zero(cls, N):
        return cls(N, _reduce([], N))

    @classmethod
    def one(cls, N):
        return cls(N, _reduce([1], N))

    @classmethod
    def root(cls, N, k: int):
        """zeta_N^k."""
        c = [0] * (k % N) + [1]
        return cls(N, _reduce(c, N))

    @classmethod
    def from_counts(cls, N, counts):
        """sum_k counts[k] zeta_N^k."""
        return cls(N, _reduce(list(counts), N))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        return CycloScalar(self.N, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return CycloScalar(self.N, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CycloScalar(self.N, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, CycloScalar):
            k = Fraction(other)
            return CycloScalar(self.N, tuple(a * k for a in self.coeffs))
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycloScalar(self.N, _reduce(prod, self.N))

    __rmul__ = __mul__

    def _mul_matrix(self):
        phi = len(self.coeffs)
        cols = []
        for j in range(phi):
            cols.append((self * CycloScalar(self.N, tuple(Fraction(int(i == j)) for i in range(phi)))).coeffs)
        return [[cols[j][i] for j in range(phi)] for i in range(phi)]

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        phi = len(self.coeffs)
        x = solve_matrix(self._mul_matrix(), [Fraction(int(i == 0)) for i in range(phi)])
        return CycloScalar(self.N, tuple(x))

    def __truediv__(self, other):
        return self * other.inverse()

    def __complex__(self):
        z = complex(math.cos(2 * math.pi / self.N), math.sin(2 * math.pi / self.N))
        return sum((float(c) * z ** k for k, c in enumerate(self.coeffs)), 0j)


def cyclo_rank(rows) -> int:
    """Rank of a matrix of CycloScalars by Gaussian elimination."""
    a = [list(r) for r in rows if any(not x.is_zero() for x in r)]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(a)) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        inv = a[rank][c].inverse()
        piv = [x * inv for x in a[rank]]
        a[rank] = piv
        for i in range(rank + 1, len(a)):
            f = a[i][c]
            if not f.is_zero():
                a[i] = [x - f * y if not y.is_zero() else x for x, y in zip(a[i], piv)]
        rank += 1
        if rank == len(a):
            break
    return rank


# ---------------------------------------------------------------------------
# symmetric gauge

@dataclass(frozen=True)
class Gauge:
    N: int
    E: tuple          # q_ij = zeta_N^E[i][j]

    def q(self, i, j) -> CycloScalar:
        return CycloScalar.root(self.N, self.E[i][j])


def symmetric_gauge(q: BraidingDiagram) -> Gauge:
    n = q.rank
    half = [[q.node(i) if i == j else q.edge(i, j) / 2 for j in range(n)] for i in range(n)]
    N = 2 * lcm(1, *(x.denominator for row in half for x in row))
    E = tuple(tuple(int(x * N / 2) % N for x in row) for row in half)
    return Gauge(N, E)


# ---------------------------------------------------------------------------
# symmetrizer

def words_of(multidegree) -> list:
    """All words with the given letter content, in lexicographic order."""
    letters = [i for i, x in enumerate(multidegree) for _ in range(x)]
    return sorted(set(itertools.permutations(letters)))


def multidegrees(rank: int, n: int):
    for combo in itertools.combinations_with_replacement(range(rank), n):
        c = Counter(combo)
        yield tuple(c[i] for i in range(rank))


def reduced_word(perm, strategy: str = "bubble") -> list:
    """Adjacent transpositions, in the order they are applied.

    Sorting perm (one-line notation) by swapping a descent at positions
    (k, k+1) each step gives perm = s_{k_m} ... s_{k_1}; the generator
    s_{k_1} acts first. "bubble" swaps the leftmost descent, "lex" the
    rightmost one.
    """
    t = list(perm)
    out = []
    while True:
        descents = [k for k in range(len(t) - 1) if t[k] > t[k + 1]]
        if not descents:
            return out
        k = descents[0] if strategy == "bubble" else descents[-1]
        t[k], t[k + 1] = t[k + 1], t[k]
        out.append(k)


def _apply_word(word, gens, E, N):
    """c_{k} applied in order; returns (new word, exponent of zeta_N)."""
    w = list(word)
    e = 0
    for k in gens:
        e += E[w[k]][w[k + 1]]
        w[k], w[k + 1] = w[k + 1], w[k]
    return tuple(w), e % N


def _check_cap(q: BraidingDiagram, n: int, cap: int | None):
    cap = DEFAULT_CAP if cap is None else cap
    if n > cap:
        raise DegreeCapExceeded(f"degree {n} exceeds the cap {cap} (raise it with --degree-cap)")


@dataclass
class SymmetrizerMatrix:
    degree: int
    words: list
    entries: list      # entries[row][col]: CycloScalar; column = source word

    def rank(self) -> int:
        return cyclo_rank(self.entries)


def symmetrizer_block(q: BraidingDiagram, multidegree, strategy: str = "inversions",
                      gauge: Gauge | None = None, impl=None) -> SymmetrizerMatrix:
    """The symmetrizer restricted to words of one multidegree.

    strategy "inversions" uses the closed form (product of q over crossing
    letter pairs) through the kernel; "bubble" and "lex" multiply braiding
    generators along a reduced word of each permutation.
    """
    g = gauge or symmetric_gauge(q)
    n = sum(multidegree)
    words = words_of(multidegree)
    index = {w: k for k, w in enumerate(words)}
    nw, N = len(words), g.N
    perms = list(itertools.permutations(range(n)))
    if strategy == "inversions":
        lookup = [0] * (q.rank ** n)
        for w, k in index.items():
            code = 0
            for x in w:
                code = code * q.rank + x
            lookup[code] = k
        out = symmetrizer_counts(words, perms, g.E, n, q.rank, N, lookup, impl=impl)
        entries = [[CycloScalar.from_counts(N, out[(r * nw + c) * N:(r * nw + c + 1) * N]) for c in range(nw)]
                   for r in range(nw)]
        return SymmetrizerMatrix(n, words, entries)
    if strategy not in ("bubble", "lex"):
        raise ValueError(f"unknown strategy {strategy!r}")
    counts = [[[0] * N for _ in range(nw)] for _ in range(nw)]
    gens = [reduced_word(p, strategy) for p in perms]
    for c, w in enumerate(words):
        for gw in gens:
            tgt, e = _apply_word(w, gw, g.E, N)
            counts[index[tgt]][c][e] += 1
    entries = [[CycloScalar.from_counts(N, counts[r][c]) for c in range(nw)] for r in range(nw)]
    return SymmetrizerMatrix(n, words, entries)


def quantum_symmetrizer(q: BraidingDiagram, n: int, cap: int | None = None,
                        strategy: str = "inversions") -> SymmetrizerMatrix:
    """The full symmetrizer on rank^n words (block diagonal by multidegree)."""
    _check_cap(q, n, cap)
    words = sorted(itertools.product(range(q.rank), repeat=n))
    index = {w: k for k, w in enumerate(words)}
    g = symmetric_gauge(q)
    zero = CycloScalar.zero(g.N)
    entries = [[zero] * len(words) for _ in words]
    for d in multidegrees(q.rank, n):
        block = symmetrizer_block(q, d, strategy, g)
        for r, wr in enumerate(block.words):
            for c, wc in enumerate(block.words):
                entries[index[wr]][index[wc]] = block.entries[r][c]
    return SymmetrizerMatrix(n, words, entries)


def graded_dimensions(q: BraidingDiagram, max_degree: int, cap: int | None = None) -> tuple:
    """(total dims in degrees 0..D, {multidegree: dim})."""
    _check_cap(q, max_degree, cap)
    g = symmetric_gauge(q)
    per = {tuple([0] * q.rank): 1}
    totals = [1]
    for n in range(1, max_degree + 1):
        total = 0
        for d in multidegrees(q.rank, n):
            dim = symmetrizer_block(q, d, gauge=g).rank()
            per[d] = dim
            total += dim
        totals.append(total)
    return totals, per


# ---------------------------------------------------------------------------
# cross-checks

def q_factorial(e, n: int) -> CycloScalar:
    """[n]_q! = prod_{k=1}^n (1 - q^k)/(1 - q) for q = e^{i pi e}, as a cyclotomic number."""
    e = Fraction(e)
    N = 2 * e.denominator
    step = int(e * N / 2) % N
    out = CycloScalar.one(N)
    for k in range(1, n + 1):
        out = out * CycloScalar.from_counts(N, _qint(step, k, N))
    return out


def _qint(step, k, N):
    """1 + q + ... + q^(k-1) as counts over zeta_N."""
    c = [0] * N
    for j in range(k):
        c[(j * step) % N] += 1
    return c


def pbw_counts(roots, orders, max_degree: int) -> dict:
    """Monomials prod x_gamma^(n_gamma), n_gamma < order (None = unbounded), by multidegree."""
    rank = len(roots[0])
    counts = Counter({tuple([0] * rank): 1})
    for root, h in zip(roots, orders):
        new = Counter()
        for d, c in counts.items():
            k = 0
            while (h is None or k < h):
                v = tuple(x + k * y for x, y in zip(d, root))
                if sum(v) > max_degree:
                    break
                new[v] += c
                k += 1
        counts = new
    return dict(counts)


def pbw_dimensions(q: BraidingDiagram, max_degree: int, budget: int = 10_000) -> dict:
    """PBW monomial counts from the positive roots of the groupoid of q."""
    from .groupoid import enumerate_groupoid, positive_roots
    from .screening import pullback_root

    roots = list(positive_roots(enumerate_groupoid(q, budget)).positive_roots)
    orders = []
    for r in roots:
        h = unit_root_order(pullback_root(q, r))
        orders.append(None if h == 1 else h)
    return pbw_counts(roots, orders, max_degree)


def compare_pbw(q: BraidingDiagram, max_degree: int, cap: int | None = None) -> list:
    """Multidegrees where the oracle and the PBW count disagree (empty when consistent)."""
    _, dims = graded_dimensions(q, max_degree, cap)
    pbw = pbw_dimensions(q, max_degree)
    return [(d, dims[d], pbw.get(d, 0)) for d in sorted(dims) if dims[d] != pbw.get(d, 0)]
