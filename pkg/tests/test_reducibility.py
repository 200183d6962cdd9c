import itertools
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from conftest import square_matrices
from oracles import invariant_subsets
from poscomm.classical import donoghue_rational
from poscomm.counterexamples import cyclic_invariant_plane, cyclic_permutation
from poscomm.errors import DimensionMismatch
from poscomm.ratmat import RationalMatrix, char_poly, kernel_basis, span_rank
from poscomm.reducibility import (
    IdealChain,
    complete_decomposition,
    invariant_ideals_bruteforce,
    is_ideal_irreducible,
    is_invariant_ideal,
    maximal_ideal_chain,
    strongly_connected_components,
    support_digraph,
)
from poscomm.search import hypothesis_holds

R = RationalMatrix
P = cyclic_permutation()


def test_diagonal_family_has_no_edges():
    assert support_digraph([R.diag([1, 2, 3]), R.diag([0, 1, 0])]).edges == frozenset()


def test_cyclic_permutation_digraph():
    # 1-based: 1 -> 3 -> 2 -> 1
    assert support_digraph([P]).edges == {(0, 2), (2, 1), (1, 0)}
    assert is_ideal_irreducible([P])
    assert maximal_ideal_chain([P]).subsets == ()


def test_example1_edges_agree_with_enumeration(example1):
    a, b = example1
    g = support_digraph([a, b])
    assert g.edges == {(0, 1), (0, 2), (1, 0), (2, 1)}
    closed = {s for s in invariant_subsets([a.tolist(), b.tolist()])}
    assert closed == {frozenset(s) for s in map(frozenset, _all_subsets(3)) if g.is_closed(s)}
    assert closed == {frozenset(), frozenset({0, 1, 2})}


def _all_subsets(n):
    for mask in range(1 << n):
        yield {i for i in range(n) if mask >> i & 1}


def test_upper_triangular_pair_is_reducible():
    a = R([[1, 2], [0, 1]])
    b = R([[0, 1], [0, 3]])
    assert not is_ideal_irreducible([a, b])
    assert complete_decomposition([a, b]) == [0, 1]


def test_lower_triangular_pair_needs_swap():
    a = R([[1, 0], [1, 1]])
    b = R([[2, 0], [3, 1]])
    perm = complete_decomposition([a, b])
    assert perm == [1, 0]
    for m in (a, b):
        q = m.permuted(perm)
        assert all(q[i, j] == 0 for i in range(2) for j in range(i))


def test_example1_not_completely_decomposable(example1):
    assert complete_decomposition(list(example1)) is None


def test_diagonal_chain_tie_break():
    chain = maximal_ideal_chain([R.diag([1, 2, 3])])
    assert chain.subsets == (frozenset({0}), frozenset({0, 1}))
    assert chain.is_complete_flag
    assert chain.to_json() == [[0], [0, 1]]


def test_donoghue_prefix_chain():
    s = donoghue_rational(4)
    chain = maximal_ideal_chain([s])
    assert chain.subsets == tuple(frozenset(range(m + 1)) for m in range(4))


def test_ideal_chain_validation():
    with pytest.raises(ValueError):
        IdealChain(3, (frozenset({0, 1}), frozenset({0})))
    with pytest.raises(ValueError):
        IdealChain(2, (frozenset({0, 1}),))


def test_dimension_errors():
    with pytest.raises(DimensionMismatch):
        support_digraph([R.identity(2), R.identity(3)])
    with pytest.raises(DimensionMismatch):
        is_ideal_irreducible([])


def test_all_3x3_01_singletons_match_enumeration():
    # every single 0/1 matrix on 3 coordinates, plus pairs of a sample grid
    mats = [R([bits[0:3], bits[3:6], bits[6:9]]) for bits in itertools.product((0, 1), repeat=9)]
    for m in mats:
        subsets = invariant_subsets([m.tolist()])
        assert is_ideal_irreducible([m]) == (len(subsets) == 2)
    for m1, m2 in itertools.combinations(mats[::23], 2):
        subsets = invariant_subsets([m1.tolist(), m2.tolist()])
        assert is_ideal_irreducible([m1, m2]) == (len(subsets) == 2)


families = st.integers(1, 5).flatmap(
    lambda n: st.lists(square_matrices(n=n, elements=st.sampled_from([0, 0, 0, 1, -2])), min_size=1, max_size=3))


@given(families)
def test_closed_sets_are_exactly_invariant_ideals(fam):
    g = support_digraph(fam)
    brute = set(invariant_subsets([m.tolist() for m in fam]))
    assert brute == set(invariant_ideals_bruteforce(fam))
    for s in _all_subsets(g.n):
        assert g.is_closed(s) == (frozenset(s) in brute) == is_invariant_ideal(fam, s)


@given(families)
def test_chain_and_decomposition_consistency(fam):
    n = fam[0].rows
    chain = maximal_ideal_chain(fam)
    assert is_ideal_irreducible(fam) == (chain.subsets == ())
    for s in chain.subsets:
        assert is_invariant_ideal(fam, s)
    perm = complete_decomposition(fam)
    assert (perm is not None) == chain.is_complete_flag or n == 1
    if perm is not None:
        assert sorted(perm) == list(range(n))
        for m in fam:
            q = m.permuted(perm)
            assert all(q[i, j] == 0 for i in range(n) for j in range(i))


@given(families)
def test_scc_partition(fam):
    g = support_digraph(fam)
    comps = strongly_connected_components(g)
    assert sorted(v for c in comps for v in c) == list(range(g.n))
    pos = {v: k for k, c in enumerate(comps) for v in c}
    for j, i in g.edges:
        assert pos[i] <= pos[j]


def test_2x2_dichotomy_small_grid():
    vals = (0, 1, 2, -1)
    checked = 0
    for e in itertools.product(vals, repeat=8):
        a, b = R([e[0:2], e[2:4]]), R([e[4:6], e[6:8]])
        if hypothesis_holds(a, b):
            checked += 1
            assert a @ b == b @ a or complete_decomposition([a, b]) is not None
    assert checked > 1000


def _plane_coords(v, basis):
    # v = c0 b0 + c1 b1, read off from the first two coordinates
    (a, b), (c, d) = (basis[0][0], basis[1][0]), (basis[0][1], basis[1][1])
    det = Fraction(a * d - b * c)
    c0 = (v[0] * d - b * v[1]) / det
    c1 = (a * v[1] - c * v[0]) / det
    assert tuple(c0 * x + c1 * y for x, y in zip(*basis)) == tuple(v)
    return c0, c1


def test_cyclic_non_ideal_invariant_plane():
    plane = cyclic_invariant_plane()
    images = [P.apply(v) for v in plane]
    assert span_rank(plane + images) == 2
    assert span_rank(plane + [(1, 1, 1)]) == 3
    assert kernel_basis(P - R.identity(3)) == [(1, 1, 1)]
    cols = [_plane_coords(w, plane) for w in images]
    restricted = R([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])
    cp = char_poly(restricted)
    assert cp.coefficients == (1, 1, 1)
    c0, c1, c2 = cp.coefficients
    assert c1 ** 2 - 4 * c0 * c2 < 0
