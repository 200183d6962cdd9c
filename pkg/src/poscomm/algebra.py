"""Matrix algebras generated by words, their Jacobson radical, and McCoy's test.

Everything is exact. The radical of a unital subalgebra of M_n(Q) is read off
the trace form: x is in the radical iff tr(x b) = 0 for every b in the
algebra (characteristic zero). An independent nil-ideal computation is kept
alongside as an oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import _intlin
from .errors import DimensionMismatch, NotInAlgebra, NotSquare, NotUnitized
from .ratmat import RationalMatrix, is_nilpotent

__all__ = [
    "MatrixAlgebra",
    "RadicalCertificate",
    "generate_algebra",
    "radical_membership",
    "radical_membership_oracle",
    "radical_basis",
    "is_simultaneously_triangularizable",
    "commutative_mod_radical",
    "semicommutant_shadow",
]


class _Cache:
    """Lazily computed integer data attached to an algebra."""

    def __init__(self) -> None:
        self.span: Optional[_intlin.IntSpan] = None
        self.transposes: Optional[list[list[int]]] = None
        self.gram: Optional[list[list[int]]] = None
        self.radical: Optional[list[RationalMatrix]] = None
        self.radical_span: Optional[_intlin.IntSpan] = None


@dataclass(frozen=True)
class MatrixAlgebra:
    n: int
    generators: tuple[RationalMatrix, ...]
    basis: tuple[RationalMatrix, ...]
    unitized: bool
    _cache: _Cache = field(default_factory=_Cache, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _span(self) -> _intlin.IntSpan:
        c = self._cache
        if c.span is None:
            c.span = _intlin.IntSpan()
            for b in self.basis:
                c.span.add(b.scaled_ints()[0])
        return c.span

    def contains(self, x: RationalMatrix) -> bool:
        if x.shape != (self.n, self.n):
            return False
        return self._span().contains(x.scaled_ints()[0])

    def _transposes(self) -> list[list[int]]:
        c = self._cache
        if c.transposes is None:
            c.transposes = [_intlin.transpose(b.scaled_ints()[0], self.n) for b in self.basis]
        return c.transposes

    def gram(self) -> list[list[int]]:
        """Trace form on the (integer-scaled) basis: G[i][j] = tr(b_i b_j)."""
        c = self._cache
        if c.gram is None:
            ts = self._transposes()
            ints = [b.scaled_ints()[0] for b in self.basis]
            d = len(ints)
            g = [[0] * d for _ in range(d)]
            for i in range(d):
                for j in range(i, d):
                    g[i][j] = g[j][i] = _intlin.trace_of_product(ints[i], ts[j])
            c.gram = g
        return c.gram

    def to_json(self) -> dict:
        index = {g: self.basis.index(g) if g in self.basis else None for g in self.generators}
        return {
            "n": self.n,
            "unitized": self.unitized,
            "generators": [g.to_json() for g in self.generators],
            "generator_indices": [index[g] for g in self.generators],
            "basis": [b.to_json() for b in self.basis],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MatrixAlgebra":
        gens = tuple(RationalMatrix.from_json(g) for g in obj["generators"])
        basis = tuple(RationalMatrix.from_json(b) for b in obj["basis"])
        return cls(n=obj["n"], generators=gens, basis=basis, unitized=obj["unitized"])


@dataclass(frozen=True)
class RadicalCertificate:
    member: bool
    gram_rank: int
    witness: Optional[RationalMatrix] = None


def _check_family(gens: Sequence[RationalMatrix]) -> int:
    if not gens:
        raise DimensionMismatch("need at least one generator")
    n = gens[0].rows
    for g in gens:
        if not g.is_square:
            raise NotSquare(g.shape)
        if g.rows != n:
            raise DimensionMismatch(f"generator sizes differ: {g.rows} vs {n}")
    return n


def generate_algebra(gens: Sequence[RationalMatrix], unitized: bool = True, order: str = "bfs") -> MatrixAlgebra:
    """Span of all words in ``gens`` (plus I_n when unitized).

    Closure is by right multiplication with generators: each accepted word is
    extended by every letter, and a product that adds no new direction is
    dropped. ``order`` picks BFS or DFS traversal; the span does not depend
    on it.
    """
    n = _check_family(gens)
    gens = tuple(gens)
    span = _intlin.IntSpan()
    basis: list[RationalMatrix] = []
    todo: deque[RationalMatrix] = deque()

    def push(m: RationalMatrix) -> None:
        if span.add(m.scaled_ints()[0]):
            basis.append(m)
            todo.append(m)
            if len(basis) > n * n:
                raise RuntimeError(f"basis grew past n^2 = {n * n}; span bookkeeping is broken")

    if unitized:
        push(RationalMatrix.identity(n))
    for g in gens:
        push(g)
    pop = todo.popleft if order == "bfs" else todo.pop
    while todo:
        w = pop()
        for g in gens:
            push(w @ g)
    alg = MatrixAlgebra(n=n, generators=gens, basis=tuple(basis), unitized=unitized)
    alg._cache.span = span
    return alg


def _require_member(alg: MatrixAlgebra, x: RationalMatrix) -> None:
    if not alg.contains(x):
        raise NotInAlgebra("element is not in the span of the algebra basis")


def radical_membership(alg: MatrixAlgebra, x: RationalMatrix) -> RadicalCertificate:
    """Trace-form (Dickson) test: x in rad iff tr(x b) = 0 for all basis b."""
    if not alg.unitized:
        raise NotUnitized("the trace criterion needs the identity in the algebra")
    _require_member(alg, x)
    xi = x.scaled_ints()[0]
    gram_rank = _intlin.rank(alg.gram(), alg.dim)
    for b, bt in zip(alg.basis, alg._transposes()):
        if _intlin.trace_of_product(xi, bt):
            return RadicalCertificate(False, gram_rank, b)
    return RadicalCertificate(True, gram_rank, None)


def _close(span: _intlin.IntSpan, elems: list[list[int]], n: int, left: Sequence[Sequence[int]],
           right: Sequence[Sequence[int]]) -> list[list[int]]:
    """Grow ``span`` under x -> l x and x -> x r; returns the accepted elements."""
    todo = deque()
    for e in elems:
        if span.add(e):
            todo.append(e)
    out = list(todo)
    while todo:
        w = todo.popleft()
        for g in left:
            p = _intlin.matmul(g, w, n)
            if span.add(p):
                todo.append(p)
                out.append(p)
        for g in right:
            p = _intlin.matmul(w, g, n)
            if span.add(p):
                todo.append(p)
                out.append(p)
    return out


def radical_membership_oracle(alg: MatrixAlgebra, x: RationalMatrix) -> bool:
    """x is in the radical iff the two-sided ideal it generates is nilpotent.

    J is the span closure of {x} under left and right multiplication by the
    generators (the identity is free). Because J = A x A with A unital,
    J^(k+1) = J^k x A, so each power is the right-closure of {u x : u in J^k}.
    The powers strictly decrease until they vanish or stabilise at a nonzero
    subspace.
    """
    _require_member(alg, x)
    n = alg.n
    xi = list(x.scaled_ints()[0])
    if not any(xi):
        return True
    gens = [list(g.scaled_ints()[0]) for g in alg.generators]
    ideal = _close(_intlin.IntSpan(), [xi], n, gens, gens)
    power = ideal
    for _ in range(len(ideal) + 1):
        nxt = _close(_intlin.IntSpan(), [_intlin.matmul(u, xi, n) for u in power], n, (), gens)
        if not nxt:
            return True
        if len(nxt) == len(power):
            return False
        power = nxt
    raise RuntimeError("ideal powers failed to stabilise")  # pragma: no cover


def radical_basis(alg: MatrixAlgebra, nonunital: bool = False) -> list[RationalMatrix]:
    """Basis of the radical: the nullspace of the trace Gram matrix.

    With ``nonunital=True`` the result is intersected with the span of the
    algebra generated without the identity.
    """
    if not alg.unitized:
        raise NotUnitized("radical_basis works on the unitized algebra")
    c = alg._cache
    if c.radical is None:
        ints = [b.scaled_ints()[0] for b in alg.basis]
        n2 = alg.n * alg.n
        rad = []
        for coeffs in _intlin.nullspace(alg.gram(), alg.dim):
            nums = [0] * n2
            for a, b in zip(coeffs, ints):
                if a:
                    nums = [u + a * v for u, v in zip(nums, b)]
            rad.append(RationalMatrix._raw(alg.n, alg.n, _intlin.primitive(nums)))
        c.radical = rad
    if not nonunital:
        return list(c.radical)
    bare = generate_algebra(alg.generators, unitized=False)
    return _intersect(c.radical, list(bare.basis), alg.n)


def _intersect(us: list[RationalMatrix], ws: list[RationalMatrix], n: int) -> list[RationalMatrix]:
    if not us or not ws:
        return []
    cols = [list(u.scaled_ints()[0]) for u in us] + [[-v for v in w.scaled_ints()[0]] for w in ws]
    rows = [[c[k] for c in cols] for k in range(n * n)]
    out_span = _intlin.IntSpan()
    out = []
    for coeffs in _intlin.nullspace(rows, len(cols)):
        nums = [0] * (n * n)
        for a, u in zip(coeffs[:len(us)], us):
            if a:
                nums = [s + a * v for s, v in zip(nums, u.scaled_ints()[0])]
        if out_span.add(nums):
            out.append(RationalMatrix._raw(n, n, _intlin.primitive(nums)))
    return out


def _radical_span(alg: MatrixAlgebra) -> _intlin.IntSpan:
    c = alg._cache
    if c.radical_span is None:
        span = _intlin.IntSpan()
        for r in radical_basis(alg):
            span.add(r.scaled_ints()[0])
        c.radical_span = span
    return c.radical_span


def commutative_mod_radical(alg: MatrixAlgebra) -> bool:
    """Whether alg / rad(alg) is commutative.

    Checked on commutators [g, b] of generators with basis elements, which
    suffices because the radical is an ideal and g's with I generate alg.
    """
    span = _radical_span(alg)
    for g in alg.generators:
        for b in alg.basis:
            c = g @ b - b @ g
            if not c.is_zero() and not span.contains(c.scaled_ints()[0]):
                return False
    return True


def is_simultaneously_triangularizable(a: RationalMatrix, b: RationalMatrix) -> bool:
    """McCoy: a, b triangularize together over the algebraic closure iff
    their unital algebra is commutative modulo its radical."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return commutative_mod_radical(generate_algebra([a, b], unitized=True))


def semicommutant_shadow(a: RationalMatrix, bs: Sequence[RationalMatrix]) -> list[RadicalCertificate]:
    """Radical certificates for a b_i - b_i a inside the unital algebra of {a, b_1, ...}."""
    alg = generate_algebra([a, *bs], unitized=True)
    return [radical_membership(alg, a @ b - b @ a) for b in bs]


def nilpotent_products(alg: MatrixAlgebra, x: RationalMatrix) -> bool:
    """Direct check that b x is nilpotent for every basis element b."""
    return all(is_nilpotent(b @ x) for b in alg.basis)


def fraction_coordinates(alg: MatrixAlgebra, x: RationalMatrix) -> list[Fraction]:
    """Coordinates of x in ``alg.basis``."""
    _require_member(alg, x)
    n2 = alg.n * alg.n
    rows = [[Fraction(b.entries[k]) for b in alg.basis] for k in range(n2)]
    target = list(x.entries)
    d = alg.dim
    aug = [r + [t] for r, t in zip(rows, target)]
    piv_cols = []
    r = 0
    for c in range(d):
        p = next((i for i in range(r, n2) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(n2):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [u - f * v for u, v in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    coords = [Fraction(0)] * d
    for i, c in enumerate(piv_cols):
        coords[c] = aug[i][d]
    return coords
