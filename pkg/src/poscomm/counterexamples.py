"""Concrete operators built from disjoint positive vectors.

Both pairs below satisfy AB >= BA >= 0 while AB - BA stays outside the
radical of their algebra: the first because A is not positive, the second
because B is not positive. They are assembled from rank-one pieces
y ⊗ phi with phi_i(x_j) = delta_ij.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .order import LatticeVector, dual_functionals, rank_one
from .ratmat import RationalMatrix


def _standard_nodes(n: int = 3) -> list[LatticeVector]:
    return [LatticeVector.basis(n, i) for i in range(n)]


def _nodes(xs: Optional[Sequence[LatticeVector]]) -> tuple[list[LatticeVector], list]:
    xs = _standard_nodes() if xs is None else list(xs)
    if len(xs) != 3:
        raise ValueError("the construction uses exactly three disjoint positive vectors")
    return xs, dual_functionals(xs)


def non_positive_a_pair(xs: Optional[Sequence[LatticeVector]] = None) -> tuple[RationalMatrix, RationalMatrix]:
    """A = (x3 - x2) ⊗ phi1 + (x1 + x2) ⊗ phi2,  B = x2 ⊗ (phi2 + phi3).

    With the standard basis as nodes:
    A = [[0,1,0],[-1,1,0],[1,0,0]] and B = [[0,0,0],[0,1,1],[0,0,0]].
    """
    (x1, x2, x3), (p1, p2, p3) = _nodes(xs)
    a = rank_one(x3 - x2, p1) + rank_one(x1 + x2, p2)
    b = rank_one(x2, p2 + p3)
    return a, b


def non_positive_b_pair(xs: Optional[Sequence[LatticeVector]] = None) -> tuple[RationalMatrix, RationalMatrix]:
    """A = (x2 + x3) ⊗ phi2,  B = x2 ⊗ phi1 + (x2 - x1) ⊗ phi2 + x1 ⊗ phi3."""
    (x1, x2, x3), (p1, p2, p3) = _nodes(xs)
    a = rank_one(x2 + x3, p2)
    b = rank_one(x2, p1) + rank_one(x2 - x1, p2) + rank_one(x1, p3)
    return a, b


def overlapping_nodes() -> tuple[list[LatticeVector], list[LatticeVector]]:
    """Two positive, linearly independent but overlapping nodes in R^2 and their targets."""
    xs = [LatticeVector([1, 0]), LatticeVector([1, 1])]
    ys = [LatticeVector([1, 0]), LatticeVector([0, 1])]
    return xs, ys


def cyclic_permutation(n: int = 3) -> RationalMatrix:
    """e_(j+1) -> e_j cyclically: [[0,1,0],[0,0,1],[1,0,0]] for n = 3."""
    return RationalMatrix([[1 if j == (i + 1) % n else 0 for j in range(n)] for i in range(n)])


def cyclic_invariant_plane() -> list[tuple[int, ...]]:
    """A 2-dimensional invariant subspace of the 3-cycle that is not a coordinate ideal."""
    return [(2, -1, -1), (0, 1, -1)]
