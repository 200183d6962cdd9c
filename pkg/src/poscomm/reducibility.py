"""Coordinate-ideal invariance for matrix families on R^n.

The closed ideals of R^n are the coordinate subspaces span{e_j : j in S}.
Such a subspace is invariant under M iff M[i][j] != 0 and j in S force
i in S, so everything reduces to reachability in the support digraph with an
edge j -> i for each nonzero off-diagonal entry M[i][j]. Indices are 0-based.

Upper triangular means P M P^T has zeros below the diagonal, so the
invariant ideals of the triangular form are spanned by leading coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, NotSquare
from .ratmat import RationalMatrix

__all__ = [
    "SupportDigraph",
    "IdealChain",
    "support_digraph",
    "strongly_connected_components",
    "is_invariant_ideal",
    "is_ideal_irreducible",
    "complete_decomposition",
    "maximal_ideal_chain",
    "invariant_ideals_bruteforce",
]


@dataclass(frozen=True)
class SupportDigraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def successors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for j, i in sorted(self.edges):
            out[j].append(i)
        return out

    def closure(self, start: Iterable[int]) -> frozenset[int]:
        """Smallest reachability-closed set containing ``start``."""
        succ = self.successors()
        seen = set(start)
        stack = list(seen)
        while stack:
            v = stack.pop()
            for w in succ[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(seen)

    def is_closed(self, s: Iterable[int]) -> bool:
        s = set(s)
        return all(i in s for j, i in self.edges if j in s)


@dataclass(frozen=True)
class IdealChain:
    """Interior of a chain of invariant coordinate ideals, smallest first."""

    n: int
    subsets: tuple[frozenset[int], ...]

    def __post_init__(self):
        full = frozenset(range(self.n))
        prev: frozenset[int] = frozenset()
        for s in self.subsets:
            if not (prev < s < full):
                raise ValueError("chain must strictly increase between the empty set and the full index set")
            prev = s

    def to_json(self) -> list[list[int]]:
        return [sorted(s) for s in self.subsets]

    @property
    def is_complete_flag(self) -> bool:
        return len(self.subsets) == self.n - 1


def _family_size(family: Sequence[RationalMatrix]) -> int:
    if not family:
        raise DimensionMismatch("empty family")
    n = family[0].rows
    for m in family:
        if not m.is_square:
            raise NotSquare(m.shape)
        if m.rows != n:
            raise DimensionMismatch(f"family sizes differ: {m.rows} vs {n}")
    return n


def support_digraph(family: Sequence[RationalMatrix]) -> SupportDigraph:
    n = _family_size(family)
    edges = {(j, i) for m in family for i, j in m.nonzero_positions() if i != j}
    return SupportDigraph(n, frozenset(edges))


def strongly_connected_components(g: SupportDigraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative.

    Components come out sinks first: a component only reaches components
    listed before it.
    """
    succ = g.successors()
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(g.n):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, k = work.pop()
            if k == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            recurse = False
            for t in range(k, len(succ[v])):
                w = succ[v][t]
                if w not in index:
                    work.append((v, t + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return sccs


def is_invariant_ideal(family: Sequence[RationalMatrix], s: Iterable[int]) -> bool:
    """Direct check: every M maps each e_j (j in s) into span{e_i : i in s}."""
    n = _family_size(family)
    s = set(s)
    for m in family:
        for j in s:
            col = m.column(j)
            if any(col[i] != 0 for i in range(n) if i not in s):
                return False
    return True


def is_ideal_irreducible(family: Sequence[RationalMatrix]) -> bool:
    g = support_digraph(family)
    return len(strongly_connected_components(g)) == 1


def complete_decomposition(family: Sequence[RationalMatrix]) -> Optional[list[int]]:
    """Permutation making every member upper triangular, if one exists.

    Returned as ``perm`` with new position p holding old index perm[p], so
    ``m.permuted(perm)`` is upper triangular. Positions are filled with the
    smallest index whose successors are all placed already, which puts the
    invariant ideals on leading coordinates.
    """
    g = support_digraph(family)
    if any(len(c) > 1 for c in strongly_connected_components(g)):
        return None
    succ = g.successors()
    placed: set[int] = set()
    perm: list[int] = []
    while len(perm) < g.n:
        v = next(v for v in range(g.n) if v not in placed and all(w in placed for w in succ[v]))
        perm.append(v)
        placed.add(v)
    return perm


def maximal_ideal_chain(family: Sequence[RationalMatrix]) -> IdealChain:
    """Greedy maximal chain of invariant coordinate ideals.

    Between consecutive members L < U the smallest v in U \\ L with
    L | closure(v) != U is used to refine; when no v works the gap is
    already minimal.
    """
    g = support_digraph(family)
    full = frozenset(range(g.n))
    chain = [frozenset(), full]
    k = 0
    while k < len(chain) - 1:
        lo, hi = chain[k], chain[k + 1]
        for v in sorted(hi - lo):
            mid = lo | g.closure([v])
            if mid != hi:
                chain.insert(k + 1, mid)
                break
        else:
            k += 1
    return IdealChain(g.n, tuple(chain[1:-1]))


def invariant_ideals_bruteforce(family: Sequence[RationalMatrix]) -> list[frozenset[int]]:
    """All invariant coordinate ideals (including the trivial two), by enumeration."""
    n = _family_size(family)
    out = []
    for mask in range(1 << n):
        s = frozenset(i for i in range(n) if mask >> i & 1)
        if is_invariant_ideal(family, s):
            out.append(s)
    return out
