import io

import numpy as np
import pytest

from poscomm.classical import (
    MAX_CHAIN_CHECK,
    WeightSequence,
    commutator_defect,
    defect_sweep,
    donoghue_chain_check,
    donoghue_matrix,
    donoghue_rational,
    gelfand_estimate,
    inf_norm,
    multiplication_matrix,
    prefix_chain,
    shift_maps_prefix_onto_predecessor,
    triangular_spectral_radius,
    volterra_chain_check,
    volterra_matrix,
    write_csv,
    prefix_image_cases,
)
from poscomm.errors import InsufficientWeights, TooLarge
from poscomm.ratmat import char_poly, is_nilpotent, rank


def test_volterra_small():
    assert volterra_matrix(1).tolist() == [[0.0]]
    assert volterra_matrix(2).tolist() == [[0.0, 0.0], [0.5, 0.0]]
    mid = np.diag(multiplication_matrix(9))
    assert np.all((mid > 0) & (mid < 1))
    v = volterra_matrix(3)
    assert np.allclose(v, [[0, 0, 0], [1 / 3, 0, 0], [1 / 3, 1 / 3, 0]])
    assert np.allclose(np.diag(multiplication_matrix(2)), [0.25, 0.75])


def test_inf_norm_is_max_row_sum():
    assert inf_norm(np.array([[1.0, -2.0], [0.5, 0.5]])) == 3.0
    assert inf_norm(np.zeros((0, 0))) == 0.0


@pytest.mark.parametrize("n", [32, 64, 128])
def test_defect_halves_when_n_doubles(n):
    ratio = commutator_defect(2 * n) / commutator_defect(n)
    assert 0.4 <= ratio <= 0.6


@pytest.mark.parametrize("n", [4, 16, 64])
def test_commutator_nearly_positive(n):
    v, m = volterra_matrix(n), multiplication_matrix(n)
    assert (m @ v - v @ m).min() >= -2 / n
    assert commutator_defect(n) > 0


def test_defect_decreases():
    d = [v for _, v in defect_sweep([8, 16, 32, 64])]
    assert all(x > y for x, y in zip(d, d[1:]))


def test_gelfand_on_volterra_reaches_zero():
    n = 64
    est = gelfand_estimate(volterra_matrix(n), n)
    assert all(x > y for x, y in zip(est[:-1], est[1:]))
    assert est[-1] == 0.0
    assert est[n - 2] > 0.0
    assert triangular_spectral_radius(volterra_matrix(n)) == 0.0


def test_gelfand_identity_constant():
    assert gelfand_estimate(np.eye(4), 10) == [1.0] * 10


def test_gelfand_on_donoghue_decreases():
    est = gelfand_estimate(donoghue_matrix(8), 9)
    assert all(x > y for x, y in zip(est, est[1:]))
    assert est[-1] == 0.0


def test_gelfand_matches_spectral_radius_of_diagonal():
    est = gelfand_estimate(np.diag([0.5, 2.0]), 20)
    assert est[-1] == pytest.approx(2.0)


def test_triangular_radius_rejects_full_matrix():
    with pytest.raises(ValueError):
        triangular_spectral_radius(np.ones((2, 2)))


@pytest.mark.parametrize("n", [1, 2, 7, 16])
def test_volterra_chain(n):
    assert volterra_chain_check(n)


def test_volterra_truncation_nilpotent_exactly():
    v = volterra_matrix(6)
    from poscomm.ratmat import RationalMatrix
    from fractions import Fraction
    exact = RationalMatrix([[Fraction(float(x)) for x in r] for r in v])
    assert is_nilpotent(exact)
    assert char_poly(exact).coefficients == (0,) * 6 + (1,)


def test_donoghue_shape_and_weights():
    s = donoghue_matrix(3)
    assert s.shape == (4, 4)
    assert list(np.diag(s, 1)) == [0.5, 0.25, 0.125]
    assert not np.any(s[:, 0])


@pytest.mark.parametrize("k", [1, 3, 6, 10, 12])
def test_donoghue_rank_and_chain(k):
    s = donoghue_rational(k)
    assert rank(s) == k
    assert donoghue_chain_check(k)
    assert shift_maps_prefix_onto_predecessor(k)
    assert prefix_image_cases(k) == ["c"] * (k + 1)


def test_donoghue_k2():
    w = WeightSequence((0.5, 0.25))
    assert donoghue_matrix(2, w).tolist() == [[0, 0.5, 0], [0, 0, 0.25], [0, 0, 0]]


def test_donoghue_k1_chain():
    from poscomm.reducibility import maximal_ideal_chain
    assert maximal_ideal_chain([donoghue_rational(1)]).subsets == (frozenset({0}),)


def test_donoghue_custom_weights():
    w = WeightSequence((1.0, 1.0, 0.25))
    assert donoghue_chain_check(3, w)
    assert prefix_image_cases(3, w) == ["c"] * 4


def test_prefix_chain_listing():
    assert prefix_chain(2) == [frozenset(), {0}, {0, 1}, {0, 1, 2}]


def test_chain_check_cap():
    with pytest.raises(TooLarge):
        donoghue_chain_check(MAX_CHAIN_CHECK + 1)


def test_insufficient_weights():
    with pytest.raises(InsufficientWeights):
        donoghue_matrix(4, WeightSequence((0.5, 0.25)))


@pytest.mark.parametrize("bad", [(), (0.5, 0.0), (0.25, 0.5), (1.0, float("nan")), (-1.0,)])
def test_invalid_weights(bad):
    with pytest.raises(ValueError):
        WeightSequence(bad)


def test_csv_output():
    buf = io.StringIO()
    write_csv([(1, 0.5), (2, 0.25)], buf)
    assert buf.getvalue() == "n_or_k,value\n1,0.5\n2,0.25\n"


@pytest.mark.parametrize("n", [2, 3, 10, 64, 200])
def test_defect_closed_form(n):
    # below the diagonal (MV - VM) - V^2 is exactly 1/n^2, so the worst row holds n-1 of them
    assert commutator_defect(n) == pytest.approx((n - 1) / n**2, rel=1e-12)
