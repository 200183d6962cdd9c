"""Componentwise lattice structure on Q^n.

Positivity of an operator on R^n with the standard cone is entrywise
nonnegativity of its matrix; disjointness of vectors is disjointness of
supports. Positive interpolation works through coordinate dual functionals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, NotDisjoint, NotPositive, ZeroVector
from .ratmat import RationalMatrix, Scalar, as_rational


@dataclass(frozen=True)
class LatticeVector:
    entries: tuple[Fraction, ...]

    def __init__(self, entries: Sequence[Scalar]):
        if len(entries) < 1:
            raise DimensionMismatch("vector needs at least one coordinate")
        object.__setattr__(self, "entries", tuple(as_rational(x) for x in entries))

    @classmethod
    def basis(cls, n: int, i: int) -> "LatticeVector":
        return cls([1 if k == i else 0 for k in range(n)])

    @property
    def dim(self) -> int:
        return len(self.entries)

    def support(self) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self.entries) if x != 0)

    def is_zero(self) -> bool:
        return not self.support()

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        _same_dim(self, other)
        return LatticeVector([a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        _same_dim(self, other)
        return LatticeVector([a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "LatticeVector":
        return LatticeVector([-a for a in self.entries])

    def __mul__(self, c: Scalar) -> "LatticeVector":
        c = as_rational(c)
        return LatticeVector([c * a for a in self.entries])

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"entries": [str(x) for x in self.entries]}

    @classmethod
    def from_json(cls, obj: dict) -> "LatticeVector":
        return cls(obj["entries"])


@dataclass(frozen=True)
class PositiveFunctional:
    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Sequence[Scalar]):
        c = tuple(as_rational(x) for x in coefficients)
        if any(x < 0 for x in c):
            raise NotPositive("functional coefficients must be nonnegative")
        object.__setattr__(self, "coefficients", c)

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def __call__(self, x: LatticeVector) -> Fraction:
        if x.dim != self.dim:
            raise DimensionMismatch(f"functional on R^{self.dim} applied to R^{x.dim}")
        return sum((a * b for a, b in zip(self.coefficients, x.entries)), Fraction(0))

    def __add__(self, other: "PositiveFunctional") -> "PositiveFunctional":
        if other.dim != self.dim:
            raise DimensionMismatch("functional dimensions differ")
        return PositiveFunctional([a + b for a, b in zip(self.coefficients, other.coefficients)])


def _same_dim(*vs) -> None:
    dims = {v.dim for v in vs}
    if len(dims) > 1:
        raise DimensionMismatch(f"dimensions differ: {sorted(dims)}")


def is_positive_vector(x: LatticeVector) -> bool:
    return all(v >= 0 for v in x.entries)


def is_positive_matrix(m: RationalMatrix) -> bool:
    """A matrix maps the standard cone into itself iff its entries are >= 0."""
    return m.is_nonnegative()


def leq_entrywise(a: RationalMatrix, b: RationalMatrix) -> bool:
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return (b - a).is_nonnegative()


def are_disjoint(x: LatticeVector, y: LatticeVector) -> bool:
    """|x| ^ |y| = 0, i.e. the supports do not meet."""
    _same_dim(x, y)
    return not (x.support() & y.support())


def _check_disjoint_positive(xs: Sequence[LatticeVector]) -> None:
    if xs:
        _same_dim(*xs)
    for x in xs:
        if x.is_zero():
            raise ZeroVector("interpolation nodes must be nonzero")
        if not is_positive_vector(x):
            raise NotPositive(f"{x.entries} is not positive")
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if not are_disjoint(xs[i], xs[j]):
                raise NotDisjoint(f"x{i} and x{j} share support")


def dual_functionals(xs: Sequence[LatticeVector]) -> list[PositiveFunctional]:
    """Positive functionals with phi_i(x_j) = delta_ij.

    phi_i reads the first coordinate where x_i is largest and divides by that
    entry; disjoint supports make the off-diagonal evaluations vanish.
    """
    _check_disjoint_positive(xs)
    out = []
    for x in xs:
        top = max(x.entries)
        k = x.entries.index(top)
        c = [Fraction(0)] * x.dim
        c[k] = 1 / top
        out.append(PositiveFunctional(c))
    return out


def rank_one(y: LatticeVector, phi: PositiveFunctional) -> RationalMatrix:
    """y ⊗ phi, the operator v -> phi(v) y."""
    if y.dim != phi.dim:
        raise DimensionMismatch("vector and functional dimensions differ")
    return RationalMatrix([[a * b for b in phi.coefficients] for a in y.entries])


def interpolate_positive(xs: Sequence[LatticeVector], ys: Sequence[LatticeVector]) -> RationalMatrix:
    """Positive T with T x_j = y_j, for disjoint positive x's and positive y's."""
    if len(xs) != len(ys) or not xs:
        raise DimensionMismatch("need equally many (nonzero count) xs and ys")
    _same_dim(*xs, *ys)
    for y in ys:
        if not is_positive_vector(y):
            raise NotPositive(f"{y.entries} is not positive")
    phis = dual_functionals(xs)
    n = xs[0].dim
    t = RationalMatrix.zeros(n)
    for y, phi in zip(ys, phis):
        t = t + rank_one(y, phi)
    return t


def unique_interpolant(xs: Sequence[LatticeVector], ys: Sequence[LatticeVector]) -> RationalMatrix:
    """The matrix T with T x_j = y_j when the x's form a basis of Q^n.

    Used to show that positivity can fail for non-disjoint nodes.
    """
    n = xs[0].dim
    if len(xs) != n or len(ys) != n:
        raise DimensionMismatch("need n nodes in R^n")
    x = RationalMatrix([[v.entries[i] for v in xs] for i in range(n)])
    y = RationalMatrix([[v.entries[i] for v in ys] for i in range(n)])
    return y @ _inverse(x)


def _inverse(m: RationalMatrix) -> RationalMatrix:
    n = m.rows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.tolist())]
    for c in range(n):
        p = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if p is None:
            raise ValueError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [v / piv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return RationalMatrix([r[n:] for r in aug])
