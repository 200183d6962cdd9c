"""Integer kernels behind the exact rational layer.

Square matrices are flat row-major lists of Python ints. Spans, ranks and
nullspaces are scale invariant, so callers clear denominators once and work
fraction-free from then on.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from operator import mul
from typing import Iterable, Sequence


def matmul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    cols = [b[j::n] for j in range(n)]
    out = []
    for i in range(0, n * n, n):
        row = a[i:i + n]
        if any(row):
            out.extend(sum(map(mul, row, c)) for c in cols)
        else:
            out.extend([0] * n)
    return out


def transpose(a: Sequence[int], n: int) -> list[int]:
    return [a[j * n + i] for i in range(n) for j in range(n)]


def trace(a: Sequence[int], n: int) -> int:
    return sum(a[i * (n + 1)] for i in range(n))


def trace_of_product(a: Sequence[int], bt: Sequence[int]) -> int:
    """tr(a @ b) given the transpose of b."""
    return sum(map(mul, a, bt))


def identity(n: int) -> list[int]:
    out = [0] * (n * n)
    for i in range(n):
        out[i * (n + 1)] = 1
    return out


def primitive(v: Iterable[int]) -> list[int]:
    """Divide out the content and make the first nonzero entry positive."""
    v = list(v)
    g = gcd(*v)
    if g == 0:
        return v
    lead = next(x for x in v if x)
    if lead < 0:
        g = -g
    if g != 1:
        v = [x // g for x in v]
    return v


class IntSpan:
    """Incrementally maintained row echelon basis of a Q-subspace.

    Rows are kept primitive; reduction against them happens in insertion
    order, which zeroes every existing pivot.
    """

    __slots__ = ("rows", "pivots")

    def __init__(self) -> None:
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[int]) -> list[int]:
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                r = row[p]
                v = [r * x - c * y for x, y in zip(v, row)]
                g = gcd(*v)
                if g > 1:
                    v = [x // g for x in v]
        return v

    def add(self, v: Sequence[int]) -> bool:
        """Insert v; return True when it enlarged the span."""
        w = self.reduce(v)
        for p, x in enumerate(w):
            if x:
                self.rows.append(primitive(w))
                self.pivots.append(p)
                return True
        return False

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))


def rref(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free reduced echelon form: pivot rows are zero at every other pivot."""
    work = [primitive(r) for r in rows if any(r)]
    out: list[list[int]] = []
    pivots: list[int] = []
    col = 0
    while work and col < ncols:
        k = next((i for i, r in enumerate(work) if r[col]), None)
        if k is None:
            col += 1
            continue
        piv = work.pop(k)
        pc = piv[col]
        nxt = []
        for r in work:
            c = r[col]
            if c:
                r = primitive([pc * x - c * y for x, y in zip(r, piv)])
            if any(r):
                nxt.append(r)
        work = nxt
        for i, r in enumerate(out):
            c = r[col]
            if c:
                out[i] = primitive([pc * x - c * y for x, y in zip(r, piv)])
        out.append(piv)
        pivots.append(col)
        col += 1
    return out, pivots


def rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    span = IntSpan()
    for r in rows:
        span.add(r)
    return len(span)


def nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Primitive integer basis of {v : rows @ v = 0}."""
    red, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, pivots):
            v[p] = Fraction(-r[f], r[p])
        den = lcm(*(x.denominator for x in v))
        basis.append(primitive(int(x * den) for x in v))
    return basis
