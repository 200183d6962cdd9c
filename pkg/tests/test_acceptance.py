"""The ten acceptance criteria, each timed against its budget.

Every test records one PASS/FAIL line; the lines are repeated in the
"acceptance criteria" section at the end of the pytest run.
"""

import random

import numpy as np

from acceptance_log import criterion
from oracles import invariant_subsets
from poscomm import classical
from poscomm.algebra import (
    generate_algebra,
    is_simultaneously_triangularizable,
    radical_basis,
    radical_membership,
    radical_membership_oracle,
    semicommutant_shadow,
)
from poscomm.counterexamples import cyclic_invariant_plane, cyclic_permutation, non_positive_a_pair, non_positive_b_pair
from poscomm.ratmat import RationalMatrix as R
from poscomm.ratmat import char_poly, in_spectrum, is_nilpotent, span_rank
from poscomm.reducibility import is_ideal_irreducible, maximal_ideal_chain
from poscomm.search import (
    SamplerConfig,
    dichotomy_grid,
    dichotomy_sweep,
    hypothesis_holds,
    read_corpus,
    run_campaign,
    sample_pair,
)


def _both_radical_tests(a, b):
    alg = generate_algebra([a, b], unitized=True)
    c = a @ b - b @ a
    return radical_membership(alg, c).member, radical_membership_oracle(alg, c)


def test_criterion_1_example1():
    with criterion(1, "non-positive A pair", 1.0) as info:
        a, b = non_positive_a_pair()
        assert hypothesis_holds(a, b)
        m = a @ (a @ b - b @ a)
        assert char_poly(m)(1) == 0
        assert m.apply((1, 0, 1)) == (1, 0, 1)
        trace_form, oracle = _both_radical_tests(a, b)
        assert trace_form is False and oracle is False
        info["detail"] = "eigenvector e1+e3 at 1; radical: trace form no, nil ideal no"


def test_criterion_2_example2():
    with criterion(2, "non-positive B pair", 1.0) as info:
        a, b = non_positive_b_pair()
        assert hypothesis_holds(a, b)
        m = (a @ b - b @ a) @ b
        assert in_spectrum(m, 1)
        assert m.apply((0, 1, 2)) == (0, 1, 2)
        trace_form, oracle = _both_radical_tests(a, b)
        assert trace_form is False and oracle is False
        info["detail"] = "fixed vector e2+2e3; radical: trace form no, nil ideal no"


def test_criterion_3_two_by_two_dichotomy():
    with criterion(3, "2x2 dichotomy", 300.0) as info:
        grid = dichotomy_grid((0, 1, -1, 2))
        assert grid.pairs == 4 ** 8
        assert grid.violations == []
        sweep = dichotomy_sweep(seed=3, accepted=100_000)
        assert sweep.accepted == 100_000
        assert sweep.violations == []
        info["detail"] = (
            f"grid {grid.accepted}/{grid.pairs} accepted, "
            f"random {sweep.accepted}/{sweep.pairs} accepted ({sweep.decomposable} non-commuting), 0 violations"
        )


def test_criterion_4_radical_for_positive_pairs(tmp_path):
    per_dim = 10_000
    with criterion(4, "positive pairs: AB-BA in the radical", 600.0) as info:
        counts = []
        for dim in range(2, 7):
            accepted = 0
            for k, strategy in enumerate(("rejection-integer", "commuting-perturbation")):
                corpus = tmp_path / f"c{dim}{k}.jsonl"
                cfg = SamplerConfig(dim=dim, strategy=strategy, seed=1000 * dim + k, count=per_dim // 2,
                                    max_attempts=100_000)
                s = run_campaign(cfg, ["radical-positive"], corpus=corpus)
                assert s.exhausted == 0
                assert s.violations == [], s.violations[:1]
                for obj in read_corpus(corpus):
                    rep = obj["report"]
                    assert rep["a_positive"] and rep["b_positive"]
                    assert rep["ab_geq_ba"] and rep["ba_geq_zero"]
                    assert rep["radical_member"] and rep["commutator_nilpotent"]
                    accepted += 1
            assert accepted == per_dim
            counts.append(accepted)
        info["detail"] = f"{sum(counts)} pairs over dims 2-6, trace form and nil ideal agree on all"


def _fixed_positive_matrices():
    """20 positive matrices of sizes 3-6 with nontrivial invariant ideals."""
    rng = random.Random(20261015)
    out = []
    for n in range(3, 7):
        out.append(classical.donoghue_rational(n - 1))
        out.append(R([[1 if j == i + 1 else 0 for j in range(n)] for i in range(n)]))
        out.append(R([[rng.randint(0, 2) if j >= i else 0 for j in range(n)] for i in range(n)]))
        out.append(R.diag([i + 1 for i in range(n)]))
        # dense positive block with a zero last row
        out.append(R([[rng.choice((0, 1, 2)) if i < n - 1 else 0 for j in range(n)] for i in range(n)]))
    return out


def test_criterion_5_semicommutant_shadow():
    with criterion(5, "semicommutant samples: commutators in the radical", 120.0) as info:
        mats = _fixed_positive_matrices()
        assert len(mats) == 20 and {m.rows for m in mats} == {3, 4, 5, 6}
        nonzero = 0
        for idx, a in enumerate(mats):
            assert a.is_nonnegative()
            bs = []
            for s in range(5):
                cfg = SamplerConfig(dim=a.rows, strategy="semicommutant-of", base=a, seed=100 * idx + s,
                                    max_attempts=50_000)
                pair = sample_pair(cfg)
                assert pair is not None, f"no semicommutant for matrix {idx}"
                b = pair[1]
                assert b.is_nonnegative() and (a @ b - b @ a).is_nonnegative()
                bs.append(b)
                nonzero += not (a @ b - b @ a).is_zero()
            assert all(cert.member for cert in semicommutant_shadow(a, bs))
        assert nonzero > 50
        info["detail"] = f"100 samples ({nonzero} non-commuting), all commutators in the radical"


def test_criterion_6_mccoy_consistency():
    with criterion(6, "McCoy consistency", 300.0) as info:
        a, b = non_positive_a_pair()
        assert not is_simultaneously_triangularizable(a, b)
        strategies = ("rejection-integer", "rejection-rational", "example1-template", "example2-template",
                      "commuting-perturbation")
        checked = tri = 0
        for strategy in strategies:
            for dim in range(2, 6):
                if strategy == "rejection-rational" and dim != 2:
                    continue
                if strategy.endswith("template") and dim < 3:
                    continue
                for seed in range(200):
                    signed = strategy == "rejection-integer" and seed % 2 == 1
                    pair = sample_pair(SamplerConfig(dim=dim, strategy=strategy, seed=seed, signed=signed))
                    if pair is None:
                        continue
                    a, b = pair
                    checked += 1
                    if is_simultaneously_triangularizable(a, b):
                        tri += 1
                        c = a @ b - b @ a
                        assert is_nilpotent(a @ c) and is_nilpotent(b @ c)
                        assert _both_radical_tests(a, b) == (True, True)
        assert tri > 0 and checked > tri
        info["detail"] = f"{checked} pairs, {tri} triangularizable, all consistent; non-positive A pair not triangularizable"


def _random_generators(rng):
    n = rng.randint(2, 5)
    k = rng.randint(1, 3)
    kind = rng.choice(("upper", "conjugated", "general", "block", "nilpotent"))
    gens = []
    for _ in range(k):
        m = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if kind in ("upper", "conjugated") and j < i:
                    m[i][j] = 0
                if kind == "nilpotent" and j <= i:
                    m[i][j] = 0
                if kind == "block" and j < 2 <= i:
                    m[i][j] = 0
        gens.append(R(m))
    if kind == "conjugated":
        p = R.identity(n) + R.unit(n, n - 1, 0).scale(rng.randint(1, 2))
        p_inv = R.identity(n) - R.unit(n, n - 1, 0).scale(p[n - 1, 0])
        gens = [p @ g @ p_inv for g in gens]
    return gens


def _combination(rng, mats, n):
    x = R.zeros(n)
    for m in mats:
        x = x + m.scale(rng.randint(-2, 2))
    return x


def test_criterion_7_radical_oracle_equivalence():
    with criterion(7, "trace form vs nil-ideal oracle", 300.0) as info:
        rng = random.Random(7)
        queries = members = nonzero_radicals = 0
        for _ in range(200):
            alg = generate_algebra(_random_generators(rng), unitized=True)
            rad = radical_basis(alg)
            nonzero_radicals += bool(rad)
            assert all(is_nilpotent(r) for r in rad)
            basis = list(alg.basis)
            for q in range(10):
                if q < 4 or not rad:
                    x = _combination(rng, basis, alg.n)
                elif q < 7:
                    x = _combination(rng, rad, alg.n)
                else:
                    x = _combination(rng, rad, alg.n) + rng.choice(basis)
                member = radical_membership(alg, x).member
                assert member == radical_membership_oracle(alg, x)
                members += member
                queries += 1
        assert queries == 2000 and 0 < members < queries
        info["detail"] = f"{queries} queries ({members} members), {nonzero_radicals} algebras with nonzero radical"


def test_criterion_8_volterra():
    with criterion(8, "Volterra discretization", 30.0) as info:
        for n in range(8, 257):
            v = classical.volterra_matrix(n)
            assert not np.any(np.triu(v))
            assert classical.triangular_spectral_radius(v) == 0.0
            assert classical.volterra_chain_check(n)
        ratios = [classical.commutator_defect(2 * n) / classical.commutator_defect(n) for n in (32, 64, 128)]
        assert all(0.4 <= r <= 0.6 for r in ratios)
        info["detail"] = "defect ratios " + ", ".join(f"{r:.4f}" for r in ratios)


def test_criterion_9_donoghue():
    with criterion(9, "Donoghue truncation", 30.0) as info:
        for k in range(1, 11):
            assert classical.donoghue_chain_check(k)
            assert classical.shift_maps_prefix_onto_predecessor(k)
            est = classical.gelfand_estimate(classical.donoghue_matrix(k), k + 1)
            assert all(y <= x + 1e-12 for x, y in zip(est, est[1:]))
            assert est[-1] == 0.0
        info["detail"] = "k = 1..10 exhaustive, prefixes only; S M_m = M_(m-1)"


def test_criterion_10_non_ideal_invariant_subspace():
    with criterion(10, "non-ideal invariant plane of the 3-cycle", 1.0) as info:
        p = cyclic_permutation(3)
        plane = cyclic_invariant_plane()
        assert span_rank(plane) == 2
        assert span_rank(plane + [p.apply(v) for v in plane]) == 2
        assert is_ideal_irreducible([p])
        assert maximal_ideal_chain([p]).subsets == ()
        assert len(invariant_subsets([p.tolist()])) == 2
        assert span_rank(plane + [(1, 1, 1)]) == 3
        info["detail"] = "plane invariant, cycle ideal-irreducible, (1,1,1) outside"
