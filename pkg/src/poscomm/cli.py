"""Command-line front end.

Exit codes: 0 when every checked statement holds, 1 when one fails (the
witness is printed), 2 for usage and I/O errors.
"""

from __future__ import annotations

import argparse
import ast
import contextlib
import json
import logging
import re
import sys
from fractions import Fraction
from typing import Callable, Optional, TextIO

from . import classical
from .algebra import (
    generate_algebra,
    radical_basis,
    radical_membership,
    radical_membership_oracle,
)
from .counterexamples import overlapping_nodes, non_positive_a_pair, non_positive_b_pair
from .errors import NotDisjoint, TooLarge
from .order import are_disjoint, interpolate_positive, unique_interpolant
from .ratmat import RationalMatrix, char_poly, in_spectrum
from .search import (
    GOALS,
    SamplerConfig,
    classify_pair,
    dichotomy_grid,
    hypothesis_holds,
    run_campaign,
)

OK, FAIL, USAGE = 0, 1, 2
GRID_VALUES = (0, 1, -1, 2)


class UsageError(ValueError):
    pass


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


class _Out:
    """Human report on a stream plus a JSON payload and a list of failed checks."""

    def __init__(self, stream: TextIO):
        self.stream = stream
        self.payload: dict = {}
        self.failed: list[str] = []

    def line(self, text: str = "") -> None:
        print(text, file=self.stream)

    def matrix(self, name: str, m: RationalMatrix) -> None:
        self.line(f"{name} =")
        self.line(m.pretty())

    def check(self, label: str, ok: bool) -> bool:
        self.payload.setdefault("checks", {})[label] = ok
        if not ok:
            self.failed.append(label)
        return ok

    def finish(self) -> int:
        self.payload["ok"] = not self.failed
        if self.failed:
            self.line("FAILED: " + "; ".join(self.failed))
            return FAIL
        return OK


# -- verify-example --------------------------------------------------------


def _radical_lines(out: _Out, gens, c: RationalMatrix, label: str) -> bool:
    alg = generate_algebra(gens, unitized=True)
    cert = radical_membership(alg, c)
    oracle = radical_membership_oracle(alg, c)
    out.line(f"unitized algebra dimension: {alg.dim}")
    if cert.member:
        out.line(f"{label}: in radical")
    else:
        t = (c @ cert.witness).trace()
        out.line(f"{label}: NOT in radical")
        out.line(f"  trace-form witness W with tr(({label}) W) = {t}:")
        out.line(cert.witness.pretty())
    out.line(f"  nil-ideal oracle agrees: {_yes(oracle == cert.member)}")
    out.payload["radical"] = {"member": cert.member, "oracle": oracle, "gram_rank": cert.gram_rank, "algebra_dim": alg.dim}
    out.check("trace form and nil-ideal oracle agree", oracle == cert.member)
    return cert.member


def _example_pair(out: _Out, title: str, a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    out.line(title)
    ab, ba = a @ b, b @ a
    c = ab - ba
    for name, m in (("A", a), ("B", b), ("AB", ab), ("BA", ba), ("AB - BA", c)):
        out.matrix(name, m)
    hyp = hypothesis_holds(a, b)
    out.line(f"AB >= BA >= 0: {_yes(hyp)}")
    out.line(f"A >= 0: {_yes(a.is_nonnegative())}   B >= 0: {_yes(b.is_nonnegative())}")
    out.check("AB >= BA >= 0", hyp)
    out.payload["matrices"] = {k: m.to_json() for k, m in (("A", a), ("B", b), ("AB", ab), ("BA", ba), ("AB-BA", c))}
    return c


def verify_example1(out: _Out) -> None:
    a, b = non_positive_a_pair()
    c = _example_pair(out, "Non-positive A: x = (e1, e2, e3)", a, b)
    out.check("A is not positive", not a.is_nonnegative())
    m = a @ c
    v = (1, 0, 1)
    image = m.apply(v)
    out.matrix("A(AB - BA)", m)
    out.line(f"char poly of A(AB - BA): {char_poly(m)}")
    out.line(f"eigen-witness: lambda = 1, v = x1 + x3 = {_vec(v)}, A(AB - BA) v = {_vec(image)}")
    out.check("A(AB - BA) fixes x1 + x3", image == v and char_poly(m)(1) == 0)
    member = _radical_lines(out, [a, b], c, "AB - BA")
    out.check("AB - BA is outside the radical", not member)


def verify_example2(out: _Out) -> None:
    a, b = non_positive_b_pair()
    c = _example_pair(out, "Non-positive B: x = (e1, e2, e3)", a, b)
    out.check("B is not positive", not b.is_nonnegative())
    m = c @ b
    v = (0, 1, 2)
    image = m.apply(v)
    out.matrix("(AB - BA)B", m)
    out.line(f"char poly of (AB - BA)B: {char_poly(m)}")
    out.line(f"fixed vector: x2 + 2 x3 = {_vec(v)}, (AB - BA)B v = {_vec(image)}")
    out.check("1 is in the spectrum of (AB - BA)B", in_spectrum(m, 1) and image == v)
    member = _radical_lines(out, [a, b], c, "AB - BA")
    out.check("AB - BA is outside the radical", not member)


def verify_overlapping_nodes(out: _Out) -> None:
    xs, ys = overlapping_nodes()
    out.line("Overlapping nodes in R^2: x1 = (1, 0), x2 = (1, 1); targets y1 = (1, 0), y2 = (0, 1)")
    disjoint = are_disjoint(xs[0], xs[1])
    out.line(f"x1, x2 disjoint: {_yes(disjoint)}")
    try:
        interpolate_positive(xs, ys)
        refused = False
    except NotDisjoint:
        refused = True
    out.line(f"positive interpolation refused: {_yes(refused)}")
    t = unique_interpolant(xs, ys)
    out.matrix("unique T with T x_j = y_j", t)
    hits = all(t.apply(x.entries) == y.entries for x, y in zip(xs, ys))
    out.line(f"T x_j = y_j: {_yes(hits)}   T >= 0: {_yes(t.is_nonnegative())}")
    out.payload["interpolant"] = t.to_json()
    out.check("nodes overlap", not disjoint and refused)
    out.check("interpolant matches and is not positive", hits and not t.is_nonnegative())


def verify_dichotomy(out: _Out) -> None:
    tally = dichotomy_grid(GRID_VALUES)
    out.line(f"2x2 pairs with entries in {{{', '.join(map(str, GRID_VALUES))}}}: {tally.pairs}")
    out.line(f"satisfying AB >= BA >= 0: {tally.accepted}")
    out.line(f"  commuting: {tally.commuting}")
    out.line(f"  non-commuting, completely decomposable: {tally.decomposable}")
    out.line(f"  neither: {len(tally.violations)}")
    for v in tally.violations[:5]:
        out.line("  witness: " + json.dumps(v))
    out.payload["tally"] = {
        "pairs": tally.pairs,
        "accepted": tally.accepted,
        "commuting": tally.commuting,
        "decomposable": tally.decomposable,
        "violations": tally.violations,
    }
    out.check("every accepted pair commutes or is completely decomposable", not tally.violations)


EXAMPLES: dict[str, Callable[[_Out], None]] = {
    "1": verify_example1,
    "2": verify_example2,
    "exam1": verify_overlapping_nodes,
    "2x2-dichotomy": verify_dichotomy,
}


def cmd_verify_example(args, out: _Out) -> int:
    out.payload["example"] = args.name
    EXAMPLES[args.name](out)
    return out.finish()


# -- check-pair ------------------------------------------------------------


def _load_json(path: str):
    with open(path) as fh:
        text = fh.read()
    try:
        return [json.loads(text)]
    except json.JSONDecodeError:
        return [json.loads(line) for line in text.splitlines() if line.strip()]


def _matrix(obj) -> RationalMatrix:
    if isinstance(obj, list):
        return RationalMatrix(obj)
    if isinstance(obj, dict) and "entries" in obj:
        return RationalMatrix.from_json(obj)
    raise UsageError("a matrix is a list of rows or {\"entries\": [...]}")


def _pair(obj) -> tuple[RationalMatrix, RationalMatrix]:
    if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
        raise UsageError('pair files hold {"a": matrix, "b": matrix}')
    return _matrix(obj["a"]), _matrix(obj["b"])


def _pair_failures(report, stored: Optional[dict]) -> list[str]:
    bad = list(report.inconsistencies())
    if report.hypothesis and report.a_positive and report.b_positive and not report.radical_member:
        bad.append("positive pair with AB >= BA >= 0 but AB - BA outside the radical")
    if stored is not None and stored != report.flags():
        diff = sorted(k for k in report.flags() if stored.get(k) != report.flags()[k])
        bad.append("stored report differs in " + ", ".join(diff))
    return bad


def cmd_check_pair(args, out: _Out) -> int:
    objs = _load_json(args.file)
    reports = []
    good = 0
    for k, obj in enumerate(objs, 1):
        a, b = _pair(obj)
        report = classify_pair(a, b)
        bad = _pair_failures(report, obj.get("report"))
        reports.append(dict(report.flags(), a=a.to_json(), b=b.to_json()))
        if len(objs) == 1:
            _describe_pair(out, report)
        else:
            out.line(f"line {k}: " + ("ok" if not bad else "; ".join(bad)))
        good += not bad
        for msg in bad:
            out.check(f"pair {k}: {msg}", False)
    if len(objs) > 1:
        out.line(f"{good} of {len(objs)} pairs ok")
    out.payload["reports"] = reports
    return out.finish()


def _describe_pair(out: _Out, r) -> None:
    out.matrix("A", r.a)
    out.matrix("B", r.b)
    out.line(f"AB >= BA >= 0: {_yes(r.hypothesis)}")
    out.line(f"A >= 0: {_yes(r.a_positive)}   B >= 0: {_yes(r.b_positive)}")
    c = r.a @ r.b - r.b @ r.a
    verdict = "in radical" if r.radical_member else "NOT in radical"
    if c.is_zero():
        out.line(f"commutator zero; {verdict}")
    else:
        out.line(f"AB - BA nilpotent: {_yes(r.commutator_nilpotent)}; {verdict}")
    out.line(f"unitized algebra dimension: {r.algebra_dim}")
    out.line(f"completely decomposable: {_yes(r.completely_decomposable)}")
    out.line(f"triangularizable: {_yes(r.triangularizable)}")


# -- search ----------------------------------------------------------------


def cmd_search(args, out: _Out) -> int:
    (obj,) = _load_json(args.config)
    if not isinstance(obj, dict):
        raise UsageError("config must be a JSON object")
    obj = dict(obj)
    goals = obj.pop("goals", None)
    if not goals:
        raise UsageError(f"config needs a non-empty 'goals' list drawn from {GOALS}")
    obj["seed"] = args.seed
    cfg = SamplerConfig.from_json(obj)
    summary = run_campaign(cfg, goals, corpus=args.corpus, workers=args.workers)
    out.line(f"strategy {cfg.strategy}, dim {cfg.dim}, seed {cfg.seed}, goals {', '.join(goals)}")
    out.line(f"accepted {summary.accepted} of {cfg.count} requested ({summary.exhausted} hit the attempt budget)")
    out.line(f"acceptance rate {summary.acceptance_rate:.4f}, wall time {summary.wall_time:.2f} s")
    out.line(f"violations: {len(summary.violations)}")
    for v in summary.violations[:10]:
        out.line("  " + json.dumps(v, sort_keys=True))
    out.payload["summary"] = summary.to_json()
    out.check("no goal violations", not summary.violations)
    return out.finish()


# -- classical sweeps ------------------------------------------------------


def _csv_section(out: _Out, title: str, rows) -> None:
    out.line(f"# {title}")
    classical.write_csv(rows, out.stream)


def cmd_volterra(args, out: _Out) -> int:
    n = args.n
    if n < 1:
        raise UsageError("n must be positive")
    est = classical.gelfand_estimate(classical.volterra_matrix(n), n)
    ns = [m for m in (2 ** p for p in range(1, 20)) if m < n] + ([n] if n >= 2 else [])
    defects = classical.defect_sweep(ns)
    _csv_section(out, "gelfand_estimate", enumerate(est, 1))
    _csv_section(out, "commutator_defect", defects)
    nil = est[-1] == 0.0
    chain = classical.volterra_chain_check(n)
    out.line(f"# V_{n}^{n} = 0: {_yes(nil)}")
    out.line(f"# trailing coordinate chain invariant under V and M: {_yes(chain)}")
    out.payload.update(n=n, gelfand_estimate=est, commutator_defect=[list(r) for r in defects])
    out.check(f"V_{n} is nilpotent", nil)
    out.check("trailing chain invariant", chain)
    return out.finish()


def _load_weights(path: str) -> classical.WeightSequence:
    (obj,) = _load_json(path)
    if isinstance(obj, dict):
        obj = obj.get("weights")
    if not isinstance(obj, list):
        raise UsageError('weights file holds a list or {"weights": [...]}')
    return classical.WeightSequence(tuple(float(Fraction(str(x))) for x in obj))


def cmd_donoghue(args, out: _Out) -> int:
    k = args.k
    if k < 1:
        raise UsageError("k must be positive")
    w = _load_weights(args.weights) if args.weights else None
    est = classical.gelfand_estimate(classical.donoghue_matrix(k, w), k + 1)
    _csv_section(out, "gelfand_estimate", enumerate(est, 1))
    shift = classical.shift_maps_prefix_onto_predecessor(k, w)
    cases = classical.prefix_image_cases(k, w)
    out.line(f"# S M_m = M_(m-1) for 1 <= m <= {k}: {_yes(shift)}")
    out.line(f"# chain cases: {' '.join(cases)}")
    out.check("S maps each prefix onto its predecessor", shift)
    out.check("every prefix is case (c)", all(c == "c" for c in cases))
    try:
        chain = classical.donoghue_chain_check(k, w)
        out.line(f"# invariant coordinate subspaces are exactly the prefixes: {_yes(chain)}")
        out.check("prefix chain is the whole invariant ideal lattice", chain)
    except TooLarge:
        chain = None
        out.line(f"# exhaustive chain check skipped: k > {classical.MAX_CHAIN_CHECK}")
    out.payload.update(k=k, gelfand_estimate=est, cases=cases, prefix_chain=chain)
    return out.finish()


# -- radical ---------------------------------------------------------------

_GEN = re.compile(r"g(\d+)")


def evaluate_element(expr: str, gens: list[RationalMatrix]) -> RationalMatrix:
    """Evaluate a polynomial in named generators ``g0, g1, ...`` and ``I``.

    Only integer literals and the operators + - * (and ** with a literal
    exponent) are accepted; products of matrices are matrix products.
    """
    n = gens[0].rows
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse element: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id == "I":
                return RationalMatrix.identity(n)
            m = _GEN.fullmatch(node.id)
            if m and int(m.group(1)) < len(gens):
                return gens[int(m.group(1))]
            raise UsageError(f"unknown name {node.id!r}; use g0..g{len(gens) - 1} or I")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(right, Fraction) and right.denominator == 1 and right >= 0):
                    raise UsageError("exponents must be non-negative integer literals")
                return left ** int(right)
            if isinstance(node.op, ast.Mult):
                if isinstance(left, Fraction) or isinstance(right, Fraction):
                    return left * right
                return left @ right
            if isinstance(node.op, (ast.Add, ast.Sub)):
                if isinstance(left, Fraction) != isinstance(right, Fraction):
                    raise UsageError("write scalar multiples of the identity as c*I")
                return left + right if isinstance(node.op, ast.Add) else left - right
        raise UsageError(f"unsupported syntax: {ast.dump(node)[:40]}")

    value = ev(tree)
    if isinstance(value, Fraction):
        value = RationalMatrix.identity(n).scale(value)
    return value


def _generators(obj) -> tuple[list[RationalMatrix], bool]:
    if isinstance(obj, dict) and "generators" in obj:
        return [_matrix(g) for g in obj["generators"]], bool(obj.get("unitized", True))
    a, b = _pair(obj)
    return [a, b], True


def cmd_radical(args, out: _Out) -> int:
    (obj,) = _load_json(args.file)
    gens, unitized = _generators(obj)
    if not gens:
        raise UsageError("no generators given")
    x = evaluate_element(args.element, gens)
    alg = generate_algebra(gens, unitized=unitized)
    cert = radical_membership(alg, x)
    oracle = radical_membership_oracle(alg, x)
    rad = radical_basis(alg)
    out.matrix(args.element, x)
    out.line(f"algebra dimension: {alg.dim} ({'unitized' if unitized else 'non-unital'})")
    out.line(f"radical dimension: {len(rad)}")
    out.line(f"Gram rank of the trace form: {cert.gram_rank}")
    out.line(f"element: {'in radical' if cert.member else 'NOT in radical'}")
    if cert.witness is not None:
        out.line(f"  witness W with tr(x W) = {(x @ cert.witness).trace()}:")
        out.line(cert.witness.pretty())
    out.line(f"nil-ideal oracle agrees: {_yes(oracle == cert.member)}")
    out.payload.update(
        element=x.to_json(),
        member=cert.member,
        oracle=oracle,
        gram_rank=cert.gram_rank,
        algebra_dim=alg.dim,
        radical_dim=len(rad),
        witness=None if cert.witness is None else cert.witness.to_json(),
    )
    out.check("trace form and nil-ideal oracle agree", oracle == cert.member)
    return out.finish()


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="also write a machine-readable report here")
    p = argparse.ArgumentParser(prog="poscomm", description="Positive commutators of matrices: checks and searches.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-example", parents=[common], help="re-derive a named construction")
    s.add_argument("name", choices=sorted(EXAMPLES))
    s.set_defaults(func=cmd_verify_example)

    s = sub.add_parser("check-pair", parents=[common], help="classify a pair, or every line of a corpus")
    s.add_argument("file")
    s.set_defaults(func=cmd_check_pair)

    s = sub.add_parser("search", parents=[common], help="run a falsification campaign")
    s.add_argument("config")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--corpus", metavar="PATH", help="append JSONL lines here")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("volterra", parents=[common], help="Volterra discretization sweep (CSV)")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_volterra)

    s = sub.add_parser("donoghue", parents=[common], help="truncated Donoghue shift checks (CSV)")
    s.add_argument("k", type=int)
    s.add_argument("--weights", metavar="FILE")
    s.set_defaults(func=cmd_donoghue)

    s = sub.add_parser("radical", parents=[common], help="radical membership of an algebra element")
    s.add_argument("file")
    s.add_argument("--element", required=True, help='e.g. "g0*g1 - g1*g0"')
    s.set_defaults(func=cmd_radical)
    return p


def main(argv: Optional[list[str]] = None, stdout: TextIO = sys.stdout, stderr: TextIO = sys.stderr) -> int:
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=stderr)
    out = _Out(stdout)
    try:
        code = args.func(args, out)
    except (OSError, ValueError) as exc:
        print(f"poscomm: error: {exc}", file=stderr)
        return USAGE
    if args.json:
        try:
            with open(args.json, "w") as fh:
                json.dump(out.payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            print(f"poscomm: error: {exc}", file=stderr)
            return USAGE
    return code


def main_entry() -> None:
    sys.exit(main())
