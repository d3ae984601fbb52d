"""Build an interview for the hiring example and inspect every step.

Four questions, ten candidate types (900 applicants), and one privacy
rule: the share of locals must stay between 2/5 and 3/5 no matter which
answers an interviewer has heard so far.  At most two questions per
candidate.

Run: python3 demos/hiring_walkthrough.py
"""

from fractions import Fraction

from privask.datasets import hiring_instance
from privask.exact import solve_exact
from privask.greedy import solve_greedy
from privask.model import (
    Ask,
    answer_ratio,
    format_rational,
    probe_question,
    serialize_tree,
)
from privask.verify import leaves, verify_gcopc


def show_root_ranking(inst):
    print("One-step value of each question at the root:")
    root = inst.root_view()
    for q, _ in inst.questions:
        probe = probe_question(root, inst, q)
        tag = "feasible" if probe.feasible else "infeasible (privacy)"
        print(f"  {q:12s} stop value {format_rational(probe.stop_value)}  {tag}")
    print()


def walk(tree, indent="  "):
    if not isinstance(tree, Ask):
        return
    print(f"{indent}ask {tree.question}")
    for answer, child in tree.branches.items():
        print(f"{indent}  {answer} ->", "leaf" if not isinstance(child, Ask) else "")
        walk(child, indent + "    ")


def main():
    inst = hiring_instance()
    print(f"{inst.n_types} candidate types, {inst.n_questions} questions, "
          f"limit {inst.question_limit}\n")
    show_root_ranking(inst)

    # the three highest-ranked questions all break the privacy band at the
    # root, so the greedy pass is forced to open with Experience
    tree = solve_greedy(inst)
    print("Greedy tree:")
    walk(tree)
    print()

    report = verify_gcopc(tree, inst)
    print(f"feasible: {report.feasible}, goodness: {format_rational(report.goodness)}")
    rule = inst.privacy_rules[0]
    for rec in leaves(tree, inst):
        path = " -> ".join(f"{q}={a}" for q, a in rec.path) or "(root)"
        ratio = answer_ratio(rec.population, inst, rule.question, rule.answer)
        print(f"  leaf {path}: fit {format_rational(rec.fit)}, "
              f"locals {format_rational(ratio)}")

    assert all(
        answer_ratio(rec.population, inst, rule.question, rule.answer) == Fraction(1, 2)
        for rec in leaves(tree, inst)
    )
    print("\nEvery leaf keeps locals at exactly 1/2; nothing was leaked.")

    exact = solve_exact(inst)
    print(f"Exact search agrees: optimum {format_rational(exact.goodness)} "
          f"after {exact.nodes} nodes.")
    print("\nTree as it would be stored on disk:")
    print(serialize_tree(tree))


if __name__ == "__main__":
    main()
