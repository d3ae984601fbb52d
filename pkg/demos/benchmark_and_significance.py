"""Benchmark the solvers over a batch of instances and test significance.

Small instances keep the exact solver in the race so all four algorithms
can be averaged in one table.  The second half loads a shipped table of
fifty paired scores and runs the exact one-sided sign test on it: classic
basic-versus-reinforced, alpha 0.1.

Run: python3 demos/benchmark_and_significance.py   (about a minute)
"""

import csv
from fractions import Fraction
from pathlib import Path

from privask.bench import format_decimal, run_benchmark, sign_test
from privask.gen import GenParams, generate

SCORES = Path(__file__).parent.parent / "tests" / "data" / "benchmark_goodness_50.csv"


def make_instances():
    out = []
    for seed in (1, 2, 3):
        params = GenParams(
            n_types=(60, 120),
            n_questions=(7, 8),
            answers_per_question=(2, 3),
            private_count=(1, 3),
            question_limit=(3, 3),
            quantity_per_type=100,
            fitness_mode="binary",
            privacy_slack=Fraction(1, 6),
            seed=seed,
        )
        out.append((f"batch{seed}", generate(params)))
    return out


def main():
    result = run_benchmark(
        make_instances(),
        algorithms=("exact", "greedy", "ga", "ga-reinforced"),
        runs_per_ga=3,
        base_seed=0,
    )
    print(result.to_csv(include_timing=True))

    with open(SCORES) as fh:
        rows = list(csv.DictReader(fh))
    basic = [Fraction(r["basic_ga"]) for r in rows]
    reinforced = [Fraction(r["reinforced_ga"]) for r in rows]
    res = sign_test(basic, reinforced, alpha=Fraction(1, 10))

    print(f"sign test over {len(rows)} paired scores "
          f"(reinforced beat basic {res.statistic} times, {res.ties} ties):")
    print(f"  p = {format_decimal(res.p_value, 6)} "
          f"-> H0 {'rejected' if res.reject_h0 else 'kept'} at alpha 0.1")
    print("  the reinforced variant is significantly better on this table")


if __name__ == "__main__":
    main()
