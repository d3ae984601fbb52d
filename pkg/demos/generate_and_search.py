"""Generate planted-structure populations and compare the search strategies.

The planted generator hides a small rule: fitness is a biased 0/1 table
over a few of the questions, and the privacy rules stay off those
questions.  Because the table's one-question marginals hug the global
mean, the hidden questions rank near the bottom of the one-step ordering
that greedy relies on.

Two runs.  On a small instance the reinforced genetic search assembles
the hidden questions and hits the exact optimum while greedy fragments.
At benchmark scale nobody recovers the table, and the story flips to
restraint: stopping early preserves the population's bias, and greedy,
which has no stop option, pays heavily for asking.

Run: python3 demos/generate_and_search.py   (about twenty seconds)
"""

import time

from privask.exact import solve_exact
from privask.ga import GaConfig, run_ga
from privask.gen import GenParams, generate
from privask.greedy import solve_greedy
from privask.model import fit_ratio
from privask.verify import goodness, verify_gcopc


def floor_value(inst):
    """Goodness of the no-question interview."""
    f = fit_ratio(inst.root_view(), inst)
    return max(f, 1 - f)


def _leaves(count):
    return f"{count} leaf" if count == 1 else f"{count} leaves"


def small_instance_act():
    inst = generate(GenParams(
        n_types=(200, 200),
        n_questions=(12, 12),
        answers_per_question=(2, 3),
        private_count=(2, 3),
        question_limit=(4, 4),
        quantity_per_type=100,
        fitness_mode="planted",
        relevant_questions=2,
        seed=5,
    ))
    print(f"small instance: {inst.n_types} types, {inst.n_questions} questions, "
          f"limit {inst.question_limit}, fitness planted on 2 hidden questions")
    print(f"  ask nothing:   {float(floor_value(inst)):.4f}")
    print(f"  greedy:        {float(goodness(solve_greedy(inst), inst)):.4f}")
    exact = solve_exact(inst)
    print(f"  exact optimum: {float(exact.goodness):.4f}")
    best = max(
        run_ga(inst, GaConfig(reinforced=True, seed=r)).best_goodness
        for r in range(3)
    )
    print(f"  reinforced GA: {float(best):.4f} (best of 3 seeds)")
    assert best == exact.goodness == 1
    print("  the GA found the planted rule exactly; greedy never saw it\n")


def benchmark_scale_act():
    inst = generate(GenParams(
        n_types=(1000, 1000),
        n_questions=(60, 60),
        answers_per_question=(2, 5),
        private_count=(4, 9),
        question_limit=(8, 8),
        quantity_per_type=100,
        fitness_mode="planted",
        seed=11,
    ))
    print(f"benchmark scale: {inst.n_types} types, {inst.n_questions} questions, "
          f"{len(inst.privacy_rules)} privacy rules, limit {inst.question_limit}")
    print(f"  ask nothing: {float(floor_value(inst)):.4f}")

    t0 = time.perf_counter()
    g = verify_gcopc(solve_greedy(inst), inst)
    print(f"  greedy:      {float(g.goodness):.4f} "
          f"({_leaves(g.leaf_count)}, {time.perf_counter() - t0:.1f}s)")

    t0 = time.perf_counter()
    rec = run_ga(inst, GaConfig(seed=0))
    report = verify_gcopc(rec.best_tree, inst)
    print(f"  basic GA:    {float(rec.best_goodness):.4f} "
          f"({_leaves(report.leaf_count)}, {time.perf_counter() - t0:.1f}s)")
    print("  sixty questions bury the three hidden ones; the GA's win here is "
          "knowing when to stop,\n  while greedy must keep asking and "
          "fragments the population far below the no-question value")


def main():
    small_instance_act()
    benchmark_scale_act()


if __name__ == "__main__":
    main()
