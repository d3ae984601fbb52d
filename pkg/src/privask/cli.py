"""Command line front end.

Exit codes: 0 success, 1 domain failure (a negative decision, an infeasible
tree, an undefined test), 2 usage or validation errors.  The default seed for
seeded subcommands can also be supplied via the PRIVASK_SEED environment
variable; explicit flags win.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .bench import (
    SignTestUndefinedError,
    format_decimal,
    run_benchmark,
    sign_test,
)
from .exact import SearchBudget, decide_cdpc, solve_exact
from .ga import GaConfig, run_ga
from .gen import GenParams, generate
from .greedy import solve_greedy
from .model import (
    InfeasibleRootError,
    ValidationError,
    format_rational,
    parse_instance,
    parse_rational,
    parse_tree,
    serialize_instance,
    serialize_tree,
    answer_ratio,
    restrict,
    fit_ratio,
    split,
)
from .reduction import cdpc_to_gcopc, parse_sc, transform_sc
from .verify import decide_cdpc_tree, verify_gcopc

_SEED_ENV = "PRIVASK_SEED"


def _default_seed() -> int:
    raw = os.environ.get(_SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{_SEED_ENV} must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _write(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _fmt_goodness(g: Fraction) -> str:
    return f"{format_rational(g)} = {format_decimal(g)}"


def _parse_span(raw: str, name: str) -> tuple[int, int]:
    """"N" or "LO:HI" into an inclusive range."""
    try:
        if ":" in raw:
            lo, hi = raw.split(":", 1)
            return (int(lo), int(hi))
        return (int(raw), int(raw))
    except ValueError:
        raise ValidationError(f"bad {name} range {raw!r}; use N or LO:HI") from None


# -- subcommands -------------------------------------------------------------


def _cmd_generate(args) -> int:
    params = GenParams(
        n_types=_parse_span(args.types, "types"),
        n_questions=_parse_span(args.questions, "questions"),
        answers_per_question=_parse_span(args.answers, "answers"),
        private_count=_parse_span(args.private, "private"),
        question_limit=_parse_span(args.limit, "limit"),
        quantity_per_type=args.quantity,
        fitness_mode=args.fitness_mode,
        relevant_questions=args.relevant,
        planted_bias=parse_rational(args.bias),
        privacy_slack=parse_rational(args.slack),
        seed=args.seed if args.seed is not None else _default_seed(),
    )
    _write(args.output, serialize_instance(generate(params)))
    return 0


def _cmd_solve(args) -> int:
    instance = parse_instance(_read(args.instance))
    seed = args.seed if args.seed is not None else _default_seed()
    if args.algo == "greedy":
        tree = solve_greedy(instance)
        note = ""
    elif args.algo == "exact":
        budget = None
        if args.time_cap is not None or args.node_cap is not None:
            budget = SearchBudget(args.time_cap, args.node_cap)
        res = solve_exact(instance, budget)
        tree = res.tree
        note = "" if res.optimal else " (budget exhausted, may be suboptimal)"
    else:
        cfg = GaConfig(
            population_size=args.pop,
            iterations=args.iters,
            mutation_rate=parse_rational(args.mutation),
            reinforced=(args.algo == "ga-reinforced"),
            seed=seed,
        )
        tree = run_ga(instance, cfg).best_tree
        note = ""
    report = verify_gcopc(tree, instance)
    _write(args.output, serialize_tree(tree))
    out = sys.stdout if args.output else sys.stderr
    print(f"goodness: {_fmt_goodness(report.goodness)}{note}", file=out)
    return 0


def _cmd_verify(args) -> int:
    instance = parse_instance(_read(args.instance))
    tree = parse_tree(_read(args.tree))
    report = verify_gcopc(tree, instance, check_all_nodes=args.all_nodes)
    print(f"feasible: {'yes' if report.feasible else 'no'}")
    print(f"goodness: {_fmt_goodness(report.goodness)}")
    print(f"leaves: {report.leaf_count}")
    print(f"depth: {report.depth}")
    for v in report.violations:
        where = " -> ".join(f"{q}={a}" for q, a in v.path) or "(root)"
        print(
            f"violation: {where}: rule ({v.rule.question}, {v.rule.answer}) "
            f"ratio {format_rational(v.ratio)} outside "
            f"[{format_rational(v.rule.low)}, {format_rational(v.rule.high)}]"
        )
    for path, q in report.redundant_asks:
        where = " -> ".join(f"{a}={b}" for a, b in path) or "(root)"
        print(f"redundant ask: {where}: question {q} has a single realizable answer")
    ok = report.feasible
    if args.cdpc:
        accepted = decide_cdpc_tree(tree, instance)
        print(f"decision witness: {'accepted' if accepted else 'rejected'}")
        ok = ok and accepted
    return 0 if ok else 1


def _cmd_decide(args) -> int:
    instance = parse_instance(_read(args.instance))
    budget = SearchBudget(args.time_cap, None) if args.time_cap else None
    res = decide_cdpc(instance, budget)
    if not res.completed:
        print("undecided: budget exhausted")
        return 1
    print("positive" if res.positive else "negative")
    if res.positive and args.output:
        _write(args.output, serialize_tree(res.witness))
    return 0 if res.positive else 1


def _cmd_reduce_sc(args) -> int:
    sc = parse_sc(_read(args.instance))
    _write(args.output, serialize_instance(transform_sc(sc)))
    return 0


def _cmd_gcopc(args) -> int:
    instance = parse_instance(_read(args.instance))
    _write(args.output, serialize_instance(cdpc_to_gcopc(instance)))
    return 0


def _cmd_bench(args) -> int:
    instances = []
    for path in args.instances:
        instances.append((Path(path).stem, parse_instance(_read(path))))
    algorithms = [a.strip() for a in args.algos.split(",") if a.strip()]
    budget = SearchBudget(args.time_cap, None) if args.time_cap else None
    result = run_benchmark(
        instances,
        algorithms,
        runs_per_ga=args.runs,
        base_seed=args.seed if args.seed is not None else _default_seed(),
        exact_budget=budget,
    )
    include_timing = not args.no_timing
    text = (
        result.to_json(include_timing)
        if args.format == "json"
        else result.to_csv(include_timing)
    )
    _write(args.output, text)
    return 0


def _cmd_signtest(args) -> int:
    import csv as _csv

    with open(args.scores, newline="") as fh:
        reader = _csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValidationError(f"{args.scores} has no header row")
        col_a = args.col_a or reader.fieldnames[0]
        col_b = args.col_b or reader.fieldnames[1]
        for col in (col_a, col_b):
            if col not in reader.fieldnames:
                raise ValidationError(f"column {col!r} not in {reader.fieldnames}")
        a_scores, b_scores = [], []
        for row in reader:
            a_scores.append(parse_rational(row[col_a]))
            b_scores.append(parse_rational(row[col_b]))
    res = sign_test(a_scores, b_scores, parse_rational(args.alpha))
    print(f"pairs: {len(a_scores)} (ties dropped: {res.ties})")
    print(f"statistic: {res.statistic} of {res.n_effective}")
    print(f"p_value: {format_rational(res.p_value)} = {format_decimal(res.p_value, 6)}")
    print(
        f"H0 {'rejected' if res.reject_h0 else 'not rejected'} "
        f"at alpha = {format_decimal(res.alpha)}"
    )
    return 0


def _cmd_conduct(args) -> int:
    instance = parse_instance(_read(args.instance))
    tree = parse_tree(_read(args.tree))
    verify_gcopc(tree, instance)  # also validates shape and depth
    pop = instance.root_view()
    node = tree
    from .model import Ask, LEAF

    while isinstance(node, Ask):
        options = [aid for aid, _ in split(pop, instance, node.question)]
        if len(options) == 1:
            # the answer is implied, no need to ask
            answer = options[0]
            print(f"{node.question}: {answer} (implied)")
        else:
            while True:
                print(f"{node.question}? [{'/'.join(options)}]")
                line = sys.stdin.readline()
                if not line:
                    print("interview aborted", file=sys.stderr)
                    return 2
                answer = line.strip()
                if answer in options:
                    break
                print(f"please answer one of: {', '.join(options)}")
        pop = restrict(pop, instance, node.question, answer)
        node = node.branches.get(answer, LEAF)
    f = fit_ratio(pop, instance)
    print(f"fit ratio: {_fmt_goodness(f)}")
    for rule in instance.privacy_rules:
        ratio = answer_ratio(pop, instance, rule.question, rule.answer)
        print(
            f"privacy ({rule.question}, {rule.answer}): {format_rational(ratio)} "
            f"in [{format_rational(rule.low)}, {format_rational(rule.high)}]"
        )
    return 0


# -- parser ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="privask",
        description="Privacy-bounded adaptive interview trees: generate, solve, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a random instance")
    p.add_argument("--types", default="2000:4000")
    p.add_argument("--questions", default="150:300")
    p.add_argument("--answers", default="2:5")
    p.add_argument("--private", default="4:9")
    p.add_argument("--limit", default="10:15")
    p.add_argument("--quantity", type=int, default=100)
    p.add_argument(
        "--fitness-mode", choices=("uniform", "binary", "planted"), default="uniform"
    )
    p.add_argument("--relevant", type=int, default=3, help="planted mode only")
    p.add_argument("--bias", default="3/4", help="planted mode only")
    p.add_argument("--slack", default="1/10")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("solve", help="build an interview tree")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("--algo", choices=("exact", "greedy", "ga", "ga-reinforced"), default="greedy")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--pop", type=int, default=20)
    p.add_argument("--iters", type=int, default=400)
    p.add_argument("--mutation", default="1/5")
    p.add_argument("--time-cap", type=float, default=None)
    p.add_argument("--node-cap", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="verify a tree against an instance")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("-t", "--tree", required=True)
    p.add_argument("--cdpc", action="store_true", help="also check the decision thresholds")
    p.add_argument("--all-nodes", action="store_true", help="check privacy at every node")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("decide", help="decide a thresholded instance")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("--time-cap", type=float, default=None)
    p.add_argument("-o", "--output", default=None, help="where to write a witness tree")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("reduce-sc", help="transform a set-cover instance")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_reduce_sc)

    p = sub.add_parser("gcopc-from-cdpc", help="reinterpret a decision instance for optimization")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_gcopc)

    p = sub.add_parser("bench", help="run algorithms over instance files")
    p.add_argument("instances", nargs="+")
    p.add_argument("--algos", default="greedy,ga,ga-reinforced")
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--time-cap", type=float, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-timing", action="store_true", help="blank the seconds column")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("signtest", help="exact one-sided paired sign test over a CSV")
    p.add_argument("-i", "--scores", required=True)
    p.add_argument("--col-a", default=None)
    p.add_argument("--col-b", default=None)
    p.add_argument("--alpha", default="0.1")
    p.set_defaults(func=_cmd_signtest)

    p = sub.add_parser("conduct", help="run one interview interactively")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("-t", "--tree", required=True)
    p.set_defaults(func=_cmd_conduct)

    return parser


def dispatch(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InfeasibleRootError, SignTestUndefinedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    return dispatch(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
