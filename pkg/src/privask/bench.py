"""Benchmark harness and the exact paired sign test.

The sign test is one-sided: with ties dropped, the statistic counts pairs
where the second score strictly beats the first, and the p-value is the exact
binomial tail P[X >= statistic] for X ~ Binomial(n_effective, 1/2), computed
with big-integer arithmetic.  H0 (no difference) is rejected iff p < alpha.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .exact import SearchBudget, solve_exact
from .ga import GaConfig, run_ga
from .greedy import solve_greedy
from .model import Instance, RationalLike, ValidationError, format_rational, parse_rational
from .verify import goodness

__all__ = [
    "ALGORITHMS",
    "BenchRow",
    "BenchResult",
    "SignTestResult",
    "SignTestUndefinedError",
    "format_decimal",
    "run_benchmark",
    "sign_test",
]

ALGORITHMS = ("greedy", "ga", "ga-reinforced", "exact")

CSV_COLUMNS = ("instance_id", "algorithm", "goodness_exact", "goodness_decimal", "runs", "seconds")


class SignTestUndefinedError(ValueError):
    """Every pair is tied, so the test statistic carries no information."""


def format_decimal(value: Fraction, places: int = 4) -> str:
    """Exact round-half-even decimal rendering (no float in the pipeline)."""
    q = 10**places
    scaled = value * q
    floor = scaled.numerator // scaled.denominator
    rem = scaled - floor
    if rem > Fraction(1, 2) or (rem == Fraction(1, 2) and floor % 2):
        floor += 1
    sign = "-" if floor < 0 else ""
    floor = abs(floor)
    return f"{sign}{floor // q}.{floor % q:0{places}d}"


@dataclass(frozen=True)
class BenchRow:
    instance_id: str
    algorithm: str
    goodness: Fraction
    runs: int
    seconds: float
    budget_exhausted: bool = False


@dataclass(frozen=True)
class BenchResult:
    rows: tuple[BenchRow, ...]

    def to_csv(self, include_timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(
                [
                    r.instance_id,
                    r.algorithm,
                    format_rational(r.goodness),
                    format_decimal(r.goodness),
                    r.runs,
                    f"{r.seconds:.3f}" if include_timing else "",
                ]
            )
        return buf.getvalue()

    def to_json(self, include_timing: bool = True) -> str:
        rows = []
        for r in self.rows:
            d = {
                "instance_id": r.instance_id,
                "algorithm": r.algorithm,
                "goodness_exact": format_rational(r.goodness),
                "goodness_decimal": format_decimal(r.goodness),
                "runs": r.runs,
            }
            if include_timing:
                d["seconds"] = round(r.seconds, 3)
            if r.budget_exhausted:
                d["budget_exhausted"] = True
            rows.append(d)
        return json.dumps({"rows": rows}, indent=2) + "\n"


def run_benchmark(
    instances: Sequence[tuple[str, Instance]],
    algorithms: Sequence[str] = ("greedy", "ga", "ga-reinforced"),
    runs_per_ga: int = 3,
    base_seed: int = 0,
    ga_config: Optional[GaConfig] = None,
    exact_budget: Optional[SearchBudget] = None,
) -> BenchResult:
    """One row per (instance, algorithm) in input order, plus an average row
    per algorithm at the end.

    Greedy and exact run once per instance; each GA variant runs `runs_per_ga`
    times with seeds base_seed, base_seed+1, ... and keeps the best goodness.
    An exact run that exhausts its budget is recorded per row, not fatal.
    """
    for algo in algorithms:
        if algo not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm {algo!r}")
    if runs_per_ga < 1:
        raise ValidationError("runs_per_ga must be >= 1")
    template = ga_config if ga_config is not None else GaConfig()
    rows: list[BenchRow] = []
    for instance_id, instance in instances:
        for algo in algorithms:
            t0 = time.perf_counter()
            exhausted = False
            if algo == "greedy":
                best = goodness(solve_greedy(instance), instance)
                runs = 1
            elif algo == "exact":
                res = solve_exact(instance, exact_budget)
                best = res.goodness
                exhausted = not res.optimal
                runs = 1
            else:
                best = None
                runs = runs_per_ga
                for i in range(runs_per_ga):
                    cfg = replace(
                        template, seed=base_seed + i, reinforced=(algo == "ga-reinforced")
                    )
                    rec = run_ga(instance, cfg)
                    if best is None or rec.best_goodness > best:
                        best = rec.best_goodness
            rows.append(
                BenchRow(
                    instance_id, algo, best, runs, time.perf_counter() - t0, exhausted
                )
            )
    for algo in algorithms:
        pool = [r for r in rows if r.algorithm == algo]
        mean = sum((r.goodness for r in pool), Fraction(0)) / len(pool)
        rows.append(
            BenchRow(
                "average",
                algo,
                mean,
                sum(r.runs for r in pool),
                sum(r.seconds for r in pool),
                any(r.budget_exhausted for r in pool),
            )
        )
    return BenchResult(tuple(rows))


@dataclass(frozen=True)
class SignTestResult:
    statistic: int  # pairs where b strictly beats a
    n_effective: int  # pairs after dropping ties
    ties: int
    p_value: Fraction
    alpha: Fraction
    reject_h0: bool


def sign_test(
    a_scores: Sequence[RationalLike],
    b_scores: Sequence[RationalLike],
    alpha: RationalLike = Fraction(1, 10),
) -> SignTestResult:
    """Exact one-sided paired sign test of "b tends to beat a"."""
    if len(a_scores) != len(b_scores):
        raise ValidationError(
            f"paired samples differ in length: {len(a_scores)} vs {len(b_scores)}"
        )
    if not a_scores:
        raise ValidationError("empty samples")
    alpha_f = parse_rational(alpha)
    a_vals = [parse_rational(v) for v in a_scores]
    b_vals = [parse_rational(v) for v in b_scores]
    wins = sum(1 for a, b in zip(a_vals, b_vals) if b > a)
    ties = sum(1 for a, b in zip(a_vals, b_vals) if a == b)
    n_eff = len(a_vals) - ties
    if n_eff == 0:
        raise SignTestUndefinedError("all pairs tied; the sign test is undefined")
    p = Fraction(sum(comb(n_eff, j) for j in range(wins, n_eff + 1)), 2**n_eff)
    return SignTestResult(wins, n_eff, ties, p, alpha_f, p < alpha_f)
