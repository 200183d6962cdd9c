"""Truncated Volterra and Donoghue operators.

Floats live here and nowhere else. The Volterra operator uses the left
endpoint rectangle rule, which gives a strictly lower triangular (hence
nilpotent) matrix; the multiplication operator samples cell midpoints.
All norms are infinity norms (max row sum).
"""

from __future__ import annotations

import csv
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from . import reducibility
from .errors import InsufficientWeights, TooLarge
from .ratmat import RationalMatrix, rank

FloatMatrix = np.ndarray

MAX_CHAIN_CHECK = 12


@dataclass(frozen=True)
class WeightSequence:
    """Positive, non-increasing weights w_1 >= w_2 >= ... > 0."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise ValueError("empty weight sequence")
        if any(not math.isfinite(x) or x <= 0 for x in w):
            raise ValueError("weights must be finite and strictly positive")
        if any(b > a for a, b in zip(w, w[1:])):
            raise ValueError("weights must be non-increasing")

    @classmethod
    def dyadic(cls, k: int) -> "WeightSequence":
        return cls(tuple(2.0 ** -m for m in range(1, k + 1)))

    def __len__(self) -> int:
        return len(self.weights)


def volterra_matrix(n: int) -> FloatMatrix:
    """V[i][j] = 1/n for j < i: integrate up to the left end of cell i."""
    if n < 1:
        raise ValueError("n must be positive")
    return np.tril(np.full((n, n), 1.0 / n), k=-1)


def multiplication_matrix(n: int) -> FloatMatrix:
    """Multiplication by x sampled at the cell midpoints (i + 1/2)/n."""
    if n < 1:
        raise ValueError("n must be positive")
    return np.diag((np.arange(n) + 0.5) / n)


def inf_norm(m: FloatMatrix) -> float:
    return float(np.abs(m).sum(axis=1).max()) if m.size else 0.0


def commutator_defect(n: int) -> float:
    """||(MV - VM) - V^2||_inf; vanishes only in the continuum."""
    if n < 2:
        raise ValueError("n must be at least 2")
    v, m = volterra_matrix(n), multiplication_matrix(n)
    return inf_norm(m @ v - v @ m - v @ v)


def donoghue_matrix(k: int, w: Optional[WeightSequence] = None) -> FloatMatrix:
    """(k+1)x(k+1) truncation: S e_0 = 0, S e_m = w_m e_(m-1)."""
    if k < 1:
        raise ValueError("k must be positive")
    w = WeightSequence.dyadic(k) if w is None else w
    if len(w) < k:
        raise InsufficientWeights(f"need {k} weights, got {len(w)}")
    s = np.zeros((k + 1, k + 1))
    for m in range(1, k + 1):
        s[m - 1, m] = w.weights[m - 1]
    return s


def donoghue_rational(k: int, w: Optional[WeightSequence] = None) -> RationalMatrix:
    """Exact rational copy of :func:`donoghue_matrix` (floats convert exactly)."""
    s = donoghue_matrix(k, w)
    return RationalMatrix([[Fraction(float(x)) for x in row] for row in s])


def gelfand_estimate(m: FloatMatrix, kmax: int) -> list[float]:
    """||m^k||^(1/k) for k = 1..kmax.

    Powers are renormalised every step and the log of the scale is carried
    separately, so tiny powers do not underflow before they are exactly zero.
    """
    m = np.asarray(m, dtype=float)
    p = m.copy()
    log_scale = 0.0
    out = []
    for k in range(1, kmax + 1):
        nrm = inf_norm(p)
        if nrm == 0.0:
            out.extend([0.0] * (kmax - k + 1))
            break
        out.append(math.exp((math.log(nrm) + log_scale) / k))
        log_scale += math.log(nrm)
        p = (p / nrm) @ m
    return out


def triangular_spectral_radius(m: FloatMatrix) -> float:
    """Exact spectral radius of a triangular matrix: its largest |diagonal| entry."""
    m = np.asarray(m)
    if np.any(np.tril(m, -1)) and np.any(np.triu(m, 1)):
        raise ValueError("matrix is not triangular")
    return float(np.abs(np.diag(m)).max())


def trailing_ideal_invariant(m: FloatMatrix, start: int) -> bool:
    """span{e_i : i >= start} invariant: no entry with row < start and column >= start."""
    return not np.any(np.asarray(m)[:start, start:])


def volterra_chain_check(n: int) -> bool:
    """Every trailing coordinate ideal is invariant under both V_n and M_n.

    This is the grid shadow of the chain {L^2[t, 1]}: t ranges over the cut
    points i/n, i.e. start = ceil(t n).
    """
    v, m = volterra_matrix(n), multiplication_matrix(n)
    return all(trailing_ideal_invariant(v, c) and trailing_ideal_invariant(m, c) for c in range(n + 1))


def prefix_chain(k: int) -> list[frozenset[int]]:
    """Index sets of M_0 < M_1 < ... < M_k, preceded by the zero subspace."""
    return [frozenset()] + [frozenset(range(m + 1)) for m in range(k + 1)]


def donoghue_chain_check(k: int, w: Optional[WeightSequence] = None) -> bool:
    """Invariant coordinate subspaces of the truncation are exactly the prefixes.

    Enumerates all 2^(k+1) index sets on the exact rational copy and compares
    with the reachability-closed sets of the support digraph.
    """
    if k > MAX_CHAIN_CHECK:
        raise TooLarge(f"exhaustive enumeration is capped at k = {MAX_CHAIN_CHECK}")
    s = donoghue_rational(k, w)
    found = set(reducibility.invariant_ideals_bruteforce([s]))
    g = reducibility.support_digraph([s])
    closed = {frozenset(i for i in range(k + 1) if mask >> i & 1) for mask in range(1 << (k + 1))}
    closed = {c for c in closed if g.is_closed(c)}
    return found == closed == set(prefix_chain(k))


def _span_of_columns(m: RationalMatrix, cols: Iterable[int]) -> RationalMatrix | None:
    cols = list(cols)
    if not cols:
        return None
    return RationalMatrix([[m[i, j] for j in cols] for i in range(m.rows)])


def image_of_prefix(s: RationalMatrix, m: int) -> tuple[int, bool]:
    """(dim S M_m, whether S M_m lies inside M_(m-1)) for the prefix subspace M_m."""
    img = _span_of_columns(s, range(m + 1))
    r = rank(img)
    inside = all(img[i, j] == 0 for i in range(m, s.rows) for j in range(img.cols))
    return r, inside


def prefix_image_cases(k: int, w: Optional[WeightSequence] = None) -> list[str]:
    """Classify each M_m of the truncated Donoghue chain.

    'a': S M = M; 'b': M = M_- and S M has codimension 1; 'c': S M = M_-
    with codimension 1. In a finite chain M_- != M always, so 'b' cannot
    occur; '?' flags anything that fits none of the three.
    """
    s = donoghue_rational(k, w)
    out = []
    for m in range(k + 1):
        dim_m = m + 1
        r, inside = image_of_prefix(s, m)
        if r == dim_m:
            out.append("a")
        elif inside and r == dim_m - 1:
            out.append("c")
        else:
            out.append("?")
    return out


def shift_maps_prefix_onto_predecessor(k: int, w: Optional[WeightSequence] = None) -> bool:
    """S M_m = M_(m-1) exactly for 1 <= m <= k, and S e_0 = 0."""
    s = donoghue_rational(k, w)
    if any(s.column(0)):
        return False
    for m in range(1, k + 1):
        r, inside = image_of_prefix(s, m)
        if not inside or r != m:
            return False
    return True


def defect_sweep(ns: Sequence[int]) -> list[tuple[int, float]]:
    return [(n, commutator_defect(n)) for n in ns]


def write_csv(rows: Iterable[tuple[int, float]], out: TextIO = sys.stdout) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n_or_k", "value"])
    for key, value in rows:
        w.writerow([key, repr(float(value))])
