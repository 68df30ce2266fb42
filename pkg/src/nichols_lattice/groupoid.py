"""Weyl groupoid of a concrete braiding: reflections, chambers, roots."""
from __future__ import annotations

import builtins
import itertools
from collections import deque
from dataclasses import dataclass, field

from .braiding import BraidingDiagram, cartan_matrix, classify_all, pullback
from .errors import BudgetExceeded, Inconsistent

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class Chamber:
    basis: tuple          # rows of B; column k is the k-th simple root
    braiding: BraidingDiagram
    cartan: tuple
    classes: tuple

    @property
    def rank(self) -> int:
        return self.braiding.rank

    def root(self, k: int) -> tuple:
        return tuple(row[k] for row in self.basis)

    def roots(self) -> list:
        return [self.root(k) for k in range(self.rank)]


def make_chamber(braiding: BraidingDiagram, basis=None) -> Chamber:
    n = braiding.rank
    if basis is None:
        basis = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    a = cartan_matrix(braiding)
    return Chamber(tuple(tuple(row) for row in basis), braiding, a, classify_all(braiding, a))


def reflection_matrix(a, k: int) -> tuple:
    """R^k: alpha_k -> -alpha_k, alpha_i -> alpha_i - a_ki alpha_k."""
    n = len(a)
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n):
        R[k][i] = -1 if i == k else -a[k][i]
    return tuple(tuple(row) for row in R)


def matmul(A, B) -> tuple:
    return tuple(tuple(sum(A[i][s] * B[s][j] for s in range(len(B))) for j in range(len(B[0]))) for i in range(len(A)))


def reflect(c: Chamber, k: int) -> Chamber:
    R = reflection_matrix(c.cartan, k)
    return make_chamber(pullback(c.braiding, R), matmul(c.basis, R))


@dataclass
class GroupoidGraph:
    chambers: list
    edges: dict = field(default_factory=dict)    # (chamber index, k) -> chamber index
    initial: int = 0

    @property
    def rank(self) -> int:
        return self.chambers[self.initial].rank

    def cartan_matrices(self) -> set:
        return {c.cartan for c in self.chambers}

    def cartan_types(self) -> set:
        """Cartan matrices up to a simultaneous relabelling of the simple roots."""
        n = self.rank
        return {min(tuple(tuple(a[p[i]][p[j]] for j in range(n)) for i in range(n))
                    for p in itertools.permutations(range(n)))
                for a in self.cartan_matrices()}

    def path_to(self, target: int) -> list:
        """Reflection indices leading from the initial chamber to ``target``."""
        prev = {self.initial: None}
        todo = deque([self.initial])
        while todo:
            u = todo.popleft()
            if u == target:
                break
            for k in range(self.rank):
                v = self.edges[(u, k)]
                if v not in prev:
                    prev[v] = (u, k)
                    todo.append(v)
        out = []
        while prev[target] is not None:
            u, k = prev[target]
            out.append(k)
            target = u
        return out[::-1]


def enumerate_groupoid(q0: BraidingDiagram, budget: int = DEFAULT_BUDGET) -> GroupoidGraph:
    """Breadth-first closure of the initial chamber under all reflections."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    start = make_chamber(q0)
    chambers = [start]
    index = {start.basis: 0}
    edges = {}
    todo = deque([0])
    while todo:
        u = todo.popleft()
        for k in range(q0.rank):
            c = reflect(chambers[u], k)
            v = index.get(c.basis)
            if v is None:
                if len(chambers) >= budget:
                    raise BudgetExceeded(f"more than {budget} chambers; the groupoid is infinite or too large")
                v = len(chambers)
                index[c.basis] = v
                chambers.append(c)
                todo.append(v)
            elif chambers[v].braiding.key() != c.braiding.key():
                raise Inconsistent("two chambers share a basis but not a braiding")
            edges[(u, k)] = v
    return GroupoidGraph(chambers, edges, 0)


# the name used throughout the documentation
enumerate = enumerate_groupoid


@dataclass(frozen=True)
class RootSystem:
    positive_roots: tuple

    def __len__(self):
        return len(self.positive_roots)

    def __contains__(self, v):
        return tuple(v) in self.positive_roots


def normalize_root(v) -> tuple:
    """Positive representative: first nonzero coordinate positive."""
    v = tuple(v)
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    raise ValueError("zero vector is not a root")


def positive_roots(g: GroupoidGraph) -> RootSystem:
    roots = {normalize_root(c.root(k)) for c in g.chambers for k in range(c.rank)}
    return RootSystem(tuple(sorted(roots, key=lambda v: (sum(v), tuple(-x for x in v)))))


def root_label(v) -> str:
    """alpha_112 style label for an N-combination of simple roots."""
    digits = "".join(str(i + 1) * x for i, x in builtins.enumerate(v))
    return f"alpha{digits}" if all(x >= 0 for x in v) else str(tuple(v))
