"""Sampling, classification and falsification campaigns for AB >= BA >= 0.

Every sampler is a deterministic function of its seed and only ever emits
pairs that satisfy the hypothesis exactly. Campaigns stream pairs through
:func:`classify_pair`, check the implications attached to each goal, and
append one JSON line per pair to a corpus.
"""

from __future__ import annotations

import itertools
import json
import logging
import random
import time
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from . import reducibility
from .algebra import (
    MatrixAlgebra,
    commutative_mod_radical,
    generate_algebra,
    radical_membership,
    radical_membership_oracle,
    semicommutant_shadow,
)
from .counterexamples import non_positive_a_pair, non_positive_b_pair
from .errors import DimensionMismatch, InvalidConfig
from .order import LatticeVector, PositiveFunctional, rank_one
from .ratmat import Polynomial, RationalMatrix, char_poly, is_nilpotent

log = logging.getLogger(__name__)

STRATEGIES = (
    "rejection-integer",
    "rejection-rational",
    "example1-template",
    "example2-template",
    "commuting-perturbation",
    "semicommutant-of",
)
GOALS = ("prop2x2", "radical-positive", "extensione", "keksington-shadow", "mccoy")
SHADOW_BATCH = 5


@dataclass(frozen=True)
class SamplerConfig:
    dim: int
    strategy: str
    entry_bound: int = 2
    seed: int = 0
    count: int = 1
    max_attempts: int = 10_000
    signed: bool = False
    base: Optional[RationalMatrix] = None

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidConfig("dim must be at least 2")
        if self.entry_bound < 1:
            raise InvalidConfig("entry_bound must be at least 1")
        if self.strategy not in STRATEGIES:
            raise InvalidConfig(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if self.count < 1 or self.max_attempts < 1:
            raise InvalidConfig("count and max_attempts must be positive")
        if self.strategy in ("example1-template", "example2-template") and self.dim < 3:
            raise InvalidConfig("the template constructions need dim >= 3")
        if self.strategy == "rejection-rational" and self.dim != 2:
            raise InvalidConfig("rejection-rational is a 2x2 sampler")
        if self.strategy == "semicommutant-of":
            if self.base is None:
                raise InvalidConfig("semicommutant-of needs a base matrix")
            if self.base.shape != (self.dim, self.dim) or not self.base.is_nonnegative():
                raise InvalidConfig("base must be a positive dim x dim matrix")

    def to_json(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["base"] = None if self.base is None else self.base.to_json()
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "SamplerConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        obj = dict(obj)
        if obj.get("base") is not None:
            obj["base"] = RationalMatrix.from_json(obj["base"])
        try:
            return cls(**obj)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from exc


@dataclass(frozen=True)
class PairReport:
    a: RationalMatrix
    b: RationalMatrix
    a_positive: bool
    b_positive: bool
    ab_geq_ba: bool
    ba_geq_zero: bool
    commutator_nilpotent: bool
    radical_member: bool
    completely_decomposable: bool
    triangularizable: bool
    algebra_dim: int

    @property
    def hypothesis(self) -> bool:
        return self.ab_geq_ba and self.ba_geq_zero

    def flags(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("a", "b")}

    def inconsistencies(self) -> list[str]:
        """Flag combinations that would contradict known finite-dim facts."""
        bad = []
        if self.triangularizable and not self.radical_member:
            bad.append("triangularizable but commutator outside the radical")
        if self.radical_member and not self.commutator_nilpotent:
            bad.append("radical member but commutator not nilpotent")
        if self.completely_decomposable and not self.triangularizable:
            bad.append("completely decomposable but not triangularizable")
        if self.hypothesis and not self.commutator_nilpotent:
            bad.append("AB >= BA >= 0 with a non-nilpotent commutator")
        return bad


@dataclass
class CampaignSummary:
    seed: int
    strategy: str
    dim: int
    goals: list[str]
    requested: int
    accepted: int = 0
    exhausted: int = 0
    attempts: int = 0
    checks: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.attempts if self.attempts else 0.0

    def to_json(self) -> dict:
        d = asdict(self)
        d["acceptance_rate"] = self.acceptance_rate
        return d


def hypothesis_holds(a: RationalMatrix, b: RationalMatrix) -> bool:
    """AB >= BA >= 0 entrywise."""
    ba = b @ a
    return ba.is_nonnegative() and (a @ b - ba).is_nonnegative()


# -- samplers -------------------------------------------------------------


def _random_matrix(rng: random.Random, n: int, bound: int, density: float, signed: bool) -> RationalMatrix:
    vals = []
    for _ in range(n * n):
        if rng.random() < density:
            v = rng.randint(1, bound)
            vals.append(-v if signed and rng.random() < 0.5 else v)
        else:
            vals.append(0)
    return RationalMatrix._raw(n, n, vals)


def _draw_rejection_integer(rng: random.Random, cfg: SamplerConfig):
    density = rng.choice((0.2, 0.35, 0.5))
    a = _random_matrix(rng, cfg.dim, cfg.entry_bound, density, cfg.signed)
    b = _random_matrix(rng, cfg.dim, cfg.entry_bound, density, cfg.signed)
    return a, b


def _small_rational(rng: random.Random, bound: int, signed: bool = True) -> Fraction:
    return Fraction(rng.randint(-bound if signed else 0, bound), rng.choice((1, 2, 3)))


def _draw_rejection_rational(rng: random.Random, cfg: SamplerConfig):
    """Signed 2x2 rationals with the (0,0) entry of AB - BA forced to zero.

    tr(AB - BA) = 0, so a nonnegative commutator needs a zero diagonal; with
    A = [[a, b], [c, d]], B = [[e, f], [g, h]] that is b g = c f, solved for f
    when c != 0. Half the draws are nonnegative, where most accepted pairs live.
    """
    k = cfg.entry_bound
    signed = rng.random() < 0.5
    a, b, c, d, e, f, g, h = (_small_rational(rng, k, signed) for _ in range(8))
    if rng.random() < 0.3:
        c = Fraction(0) if rng.random() < 0.5 else c
        g = Fraction(0) if c == 0 and rng.random() < 0.5 else g
    if c != 0:
        f = b * g / c
    elif rng.random() < 0.5:
        g = Fraction(0)
    return RationalMatrix([[a, b], [c, d]]), RationalMatrix([[e, f], [g, h]])


def random_disjoint_nodes(rng: random.Random, n: int, count: int, bound: int) -> list[LatticeVector]:
    """``count`` nonzero positive vectors in Q^n with pairwise disjoint supports."""
    idx = list(range(n))
    rng.shuffle(idx)
    used = rng.randint(count, n)
    cuts = sorted(rng.sample(range(1, used), count - 1))
    blocks = [idx[i:j] for i, j in zip([0] + cuts, cuts + [used])]
    out = []
    for block in blocks:
        v = [0] * n
        for i in block:
            v[i] = rng.randint(1, bound)
        out.append(LatticeVector(v))
    return out


def template_pair(kind: str, xs: Sequence[LatticeVector]) -> tuple[RationalMatrix, RationalMatrix]:
    if kind == "example1-template":
        return non_positive_a_pair(xs)
    if kind == "example2-template":
        return non_positive_b_pair(xs)
    raise InvalidConfig(kind)


def _draw_template(rng: random.Random, cfg: SamplerConfig):
    xs = random_disjoint_nodes(rng, cfg.dim, 3, cfg.entry_bound)
    return template_pair(cfg.strategy, xs)


def _nonneg_poly(rng: random.Random, a: RationalMatrix, bound: int) -> RationalMatrix:
    n = a.rows
    out = RationalMatrix.identity(n).scale(rng.randint(0, bound))
    p = RationalMatrix.identity(n)
    for _ in range(rng.randint(1, 2)):
        p = p @ a
        out = out + p.scale(rng.randint(0, bound))
    return out


def _random_rank_one(rng: random.Random, n: int, bound: int, targets: Sequence[int] = ()) -> RationalMatrix:
    y = [0] * n
    for i in rng.sample(range(n), rng.randint(1, max(1, n // 2))):
        y[i] = rng.randint(1, bound)
    pool = list(targets) if targets else list(range(n))
    phi = [0] * n
    for j in rng.sample(pool, rng.randint(1, max(1, min(len(pool), 2)))):
        phi[j] = rng.randint(1, bound)
    return rank_one(LatticeVector(y), PositiveFunctional(phi))


def _draw_commuting_perturbation(rng: random.Random, cfg: SamplerConfig):
    n, k = cfg.dim, cfg.entry_bound
    a = _random_matrix(rng, n, k, rng.choice((0.2, 0.35, 0.5)), cfg.signed)
    b = _nonneg_poly(rng, a, k) + _random_rank_one(rng, n, k)
    if rng.random() < 0.3:
        a = a + _random_rank_one(rng, n, k)
    return a, b


def _draw_semicommutant(rng: random.Random, cfg: SamplerConfig):
    """B = p(A) + y ⊗ phi with p a nonnegative polynomial.

    Half the time phi reads only coordinates whose row of A vanishes; then
    BA = p(A)A, so A B >= B A as soon as A y >= 0, which always holds.
    """
    a, n, k = cfg.base, cfg.dim, cfg.entry_bound
    nums = a.scaled_ints()[0]
    zero_rows = [i for i in range(n) if not any(nums[i * n:(i + 1) * n])]
    targets = zero_rows if zero_rows and rng.random() < 0.5 else ()
    b = _nonneg_poly(rng, a, k)
    for _ in range(rng.randint(1, 2)):
        b = b + _random_rank_one(rng, n, k, targets)
    return a, b


_DRAWERS: dict[str, Callable] = {
    "rejection-integer": _draw_rejection_integer,
    "rejection-rational": _draw_rejection_rational,
    "example1-template": _draw_template,
    "example2-template": _draw_template,
    "commuting-perturbation": _draw_commuting_perturbation,
    "semicommutant-of": _draw_semicommutant,
}


def _acceptable(cfg: SamplerConfig, a: RationalMatrix, b: RationalMatrix) -> bool:
    if not hypothesis_holds(a, b):
        return False
    if cfg.strategy == "example1-template":
        return not a.is_nonnegative()
    if cfg.strategy == "example2-template":
        return not b.is_nonnegative()
    if cfg.strategy == "semicommutant-of":
        return b.is_nonnegative()
    if cfg.strategy in ("rejection-integer", "commuting-perturbation"):
        if a.is_zero() or b.is_zero():
            return False
        if not cfg.signed:
            return a.is_nonnegative() and b.is_nonnegative()
    return True


def sample_pair_counted(cfg: SamplerConfig) -> tuple[Optional[tuple[RationalMatrix, RationalMatrix]], int]:
    """Like :func:`sample_pair` but also reports the attempts spent."""
    rng = random.Random(cfg.seed)
    draw = _DRAWERS[cfg.strategy]
    for attempt in range(1, cfg.max_attempts + 1):
        a, b = draw(rng, cfg)
        if _acceptable(cfg, a, b):
            return (a, b), attempt
    return None, cfg.max_attempts


def sample_pair(cfg: SamplerConfig) -> Optional[tuple[RationalMatrix, RationalMatrix]]:
    """First pair from ``cfg``'s stream that satisfies AB >= BA >= 0, or None."""
    return sample_pair_counted(cfg)[0]


# -- 2x2 dichotomy ---------------------------------------------------------


@dataclass
class DichotomyTally:
    pairs: int = 0
    accepted: int = 0
    commuting: int = 0
    decomposable: int = 0
    violations: list = field(default_factory=list)


def _dichotomy_step(tally: DichotomyTally, a: RationalMatrix, b: RationalMatrix) -> None:
    tally.pairs += 1
    if not hypothesis_holds(a, b):
        return
    tally.accepted += 1
    if a @ b == b @ a:
        tally.commuting += 1
    elif reducibility.complete_decomposition([a, b]) is not None:
        tally.decomposable += 1
    else:
        tally.violations.append({"a": a.to_json(), "b": b.to_json()})


def _hyp_2x2(e) -> bool:
    a0, a1, a2, a3, b0, b1, b2, b3 = e
    ba = (b0 * a0 + b1 * a2, b0 * a1 + b1 * a3, b2 * a0 + b3 * a2, b2 * a1 + b3 * a3)
    ab = (a0 * b0 + a1 * b2, a0 * b1 + a1 * b3, a2 * b0 + a3 * b2, a2 * b1 + a3 * b3)
    return all(x >= 0 for x in ba) and all(x >= y for x, y in zip(ab, ba))


def dichotomy_grid(values: Sequence[int]) -> DichotomyTally:
    """Every ordered 2x2 pair with entries from ``values``.

    The hypothesis filter runs on plain integers; survivors go through the
    exact matrix path.
    """
    tally = DichotomyTally()
    for e in itertools.product(values, repeat=8):
        if not _hyp_2x2(e):
            tally.pairs += 1
            continue
        _dichotomy_step(tally, RationalMatrix._raw(2, 2, e[:4]), RationalMatrix._raw(2, 2, e[4:]))
    return tally


def dichotomy_sweep(seed: int, accepted: int, bound: int = 2) -> DichotomyTally:
    """Draw from the rejection-rational stream until ``accepted`` pairs pass the hypothesis."""
    cfg = SamplerConfig(dim=2, strategy="rejection-rational", entry_bound=bound, seed=seed)
    rng = random.Random(seed)
    tally = DichotomyTally()
    budget = 1000 * accepted
    while tally.accepted < accepted and tally.pairs < budget:
        _dichotomy_step(tally, *_draw_rejection_rational(rng, cfg))
    return tally


# -- classification -------------------------------------------------------


def classify_with_algebra(a: RationalMatrix, b: RationalMatrix) -> tuple[PairReport, MatrixAlgebra]:
    if a.shape != b.shape or not a.is_square:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    n = a.rows
    ab, ba = a @ b, b @ a
    c = ab - ba
    nilpotent = is_nilpotent(c)
    if nilpotent != (char_poly(c) == Polynomial.monomial(n)):
        raise RuntimeError("nilpotency and characteristic polynomial disagree")
    alg = generate_algebra([a, b], unitized=True)
    report = PairReport(
        a=a,
        b=b,
        a_positive=a.is_nonnegative(),
        b_positive=b.is_nonnegative(),
        ab_geq_ba=c.is_nonnegative(),
        ba_geq_zero=ba.is_nonnegative(),
        commutator_nilpotent=nilpotent,
        radical_member=radical_membership(alg, c).member,
        completely_decomposable=reducibility.complete_decomposition([a, b]) is not None,
        triangularizable=commutative_mod_radical(alg),
        algebra_dim=alg.dim,
    )
    return report, alg


def classify_pair(a: RationalMatrix, b: RationalMatrix) -> PairReport:
    return classify_with_algebra(a, b)[0]


# -- goals ----------------------------------------------------------------


def smallest_radical_power(alg: MatrixAlgebra, c: RationalMatrix) -> Optional[int]:
    """Least k <= n with c^k in the radical of ``alg``."""
    p = c
    for k in range(1, alg.n + 1):
        if radical_membership(alg, p).member:
            return k
        p = p @ c
    return None


def check_goals(goals: Iterable[str], report: PairReport, alg: MatrixAlgebra) -> list[dict]:
    """Per-pair goal checks; returns one dict per violated implication."""
    a, b = report.a, report.b
    c = a @ b - b @ a
    out = []
    positive = report.a_positive and report.b_positive and report.hypothesis
    for bad in report.inconsistencies():
        out.append({"goal": "consistency", "detail": bad})
    for goal in goals:
        if goal == "prop2x2":
            if a.rows != 2:
                raise InvalidConfig("prop2x2 applies to 2x2 pairs only")
            if report.hypothesis and not (c.is_zero() or report.completely_decomposable):
                out.append({"goal": goal, "detail": "non-commuting and not completely decomposable"})
            if report.hypothesis and not report.radical_member:
                out.append({"goal": goal, "detail": "2x2 commutator outside the radical"})
        elif goal == "radical-positive":
            if positive:
                oracle = radical_membership_oracle(alg, c)
                if not report.radical_member:
                    out.append({"goal": goal, "detail": "trace form puts AB-BA outside the radical"})
                if oracle != report.radical_member:
                    out.append({"goal": goal, "detail": "trace form and nil-ideal oracle disagree"})
        elif goal == "extensione":
            if positive and smallest_radical_power(alg, c) is None:
                out.append({"goal": goal, "detail": "no power of AB-BA up to n lies in the radical"})
        elif goal == "mccoy":
            if report.triangularizable and not (
                is_nilpotent(a @ c) and is_nilpotent(b @ c) and report.radical_member
            ):
                out.append({"goal": goal, "detail": "triangularizable pair with non-nilpotent p(A,B)(AB-BA)"})
        elif goal == "keksington-shadow":
            pass  # checked per batch in run_campaign
        else:
            raise InvalidConfig(f"unknown goal {goal!r}")
    return out


def _pair_seeds(seed: int, count: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(63) for _ in range(count)]


def _work(args):
    cfg, goals = args
    pair, attempts = sample_pair_counted(cfg)
    if pair is None:
        return None, attempts, []
    report, alg = classify_with_algebra(*pair)
    return report, attempts, check_goals(goals, report, alg)


def corpus_line(report: PairReport, seed: int, strategy: str, violations: Sequence[dict] = ()) -> str:
    obj = {
        "a": report.a.to_json(),
        "b": report.b.to_json(),
        "report": report.flags(),
        "seed": seed,
        "strategy": strategy,
    }
    if violations:
        obj["violations"] = list(violations)
    return json.dumps(obj, sort_keys=True)


def read_corpus(path: str | Path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


def run_campaign(
    cfg: SamplerConfig,
    goals: Sequence[str],
    corpus: Optional[str | Path] = None,
    workers: int = 1,
) -> CampaignSummary:
    """Sample ``cfg.count`` pairs and check every goal on each.

    Pair i is drawn from its own seed, derived from ``cfg.seed``, and that
    seed is stored in the corpus so any line can be regenerated alone.
    Violations are collected, never raised; an empty list is the expected
    outcome.
    """
    goals = list(goals)
    if not goals:
        raise InvalidConfig("need at least one goal")
    for g in goals:
        if g not in GOALS:
            raise InvalidConfig(f"unknown goal {g!r}; choose from {GOALS}")
    if "keksington-shadow" in goals and cfg.strategy != "semicommutant-of":
        raise InvalidConfig("keksington-shadow needs the semicommutant-of strategy")
    if "prop2x2" in goals and cfg.dim != 2:
        raise InvalidConfig("prop2x2 needs dim 2")

    start = time.perf_counter()
    summary = CampaignSummary(cfg.seed, cfg.strategy, cfg.dim, goals, cfg.count)
    summary.checks = {g: 0 for g in goals}
    seeds = _pair_seeds(cfg.seed, cfg.count)
    jobs = [(replace(cfg, seed=s), goals) for s in seeds]
    if workers > 1:
        import multiprocessing

        pool = multiprocessing.Pool(workers)
        results = pool.imap(_work, jobs, chunksize=16)
    else:
        pool = None
        results = map(_work, jobs)

    fh = open(corpus, "a") if corpus is not None else None
    batch: list[RationalMatrix] = []
    try:
        for s, (report, attempts, violations) in zip(seeds, results):
            summary.attempts += attempts
            if report is None:
                summary.exhausted += 1
                continue
            summary.accepted += 1
            for g in goals:
                summary.checks[g] += 1
            if "keksington-shadow" in goals:
                batch.append(report.b)
                if len(batch) == SHADOW_BATCH:
                    violations = violations + _shadow_violations(cfg.base, batch)
                    batch = []
            for v in violations:
                summary.violations.append(dict(v, seed=s, a=report.a.to_json(), b=report.b.to_json()))
            if fh is not None:
                fh.write(corpus_line(report, s, cfg.strategy, violations) + "\n")
        if batch:
            for v in _shadow_violations(cfg.base, batch):
                summary.violations.append(dict(v, seed=cfg.seed))
    finally:
        if fh is not None:
            fh.close()
        if pool is not None:
            pool.close()
            pool.join()
    summary.wall_time = time.perf_counter() - start
    log.info(
        "campaign %s dim=%d: %d/%d accepted, acceptance %.4f, %d violations",
        cfg.strategy, cfg.dim, summary.accepted, cfg.count, summary.acceptance_rate, len(summary.violations),
    )
    return summary


def _shadow_violations(a: RationalMatrix, bs: Sequence[RationalMatrix]) -> list[dict]:
    certs = semicommutant_shadow(a, bs)
    return [
        {"goal": "keksington-shadow", "detail": f"commutator with sample {i} outside the radical"}
        for i, cert in enumerate(certs)
        if not cert.member
    ]


def reclassify_line(obj: dict) -> bool:
    """Re-run classification on a corpus line and compare with the stored flags."""
    a = RationalMatrix.from_json(obj["a"])
    b = RationalMatrix.from_json(obj["b"])
    return classify_pair(a, b).flags() == obj["report"]
