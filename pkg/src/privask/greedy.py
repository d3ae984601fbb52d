"""Greedy interview construction.

At every node the remaining questions are ranked by their one-step stop value
(the goodness the interview would reach if it asked just that question and
stopped) and the best-ranked question whose every realizable child satisfies
all privacy rules is asked.  Questions with a single realizable answer split
nothing, so among equal scores they rank last.
"""

from __future__ import annotations

from .model import (
    Ask,
    InfeasibleRootError,
    Instance,
    InterviewTree,
    LEAF,
    PopulationView,
    privacy_ok,
    probe_question,
)

__all__ = ["solve_greedy", "greedy_completion"]


def greedy_completion(
    instance: Instance,
    pop: PopulationView,
    unused: tuple[str, ...],
    depth_budget: int,
) -> InterviewTree:
    """Greedily extend an interview below a node whose population is `pop`.

    `unused` must preserve declaration order so score ties break the same way
    everywhere.
    """
    if depth_budget <= 0 or not unused:
        return LEAF
    probes = [(q, probe_question(pop, instance, q)) for q in unused]
    probes.sort(key=lambda item: (-item[1].stop_value, item[1].vacuous))
    for q, probe in probes:
        if not probe.feasible:
            continue
        rest = tuple(u for u in unused if u != q)
        return Ask(
            q,
            {
                aid: greedy_completion(instance, child, rest, depth_budget - 1)
                for aid, child in probe.children
            },
        )
    return LEAF


def solve_greedy(instance: Instance) -> InterviewTree:
    """Build a feasible interview tree greedily.

    Always returns a feasible tree (possibly a bare leaf); deterministic.
    """
    root = instance.root_view()
    ok, violations = privacy_ok(root, instance)
    if not ok:
        rule, ratio = violations[0]
        raise InfeasibleRootError(
            f"root population violates privacy rule ({rule.question}, {rule.answer}): "
            f"ratio {ratio} outside [{rule.low}, {rule.high}]"
        )
    return greedy_completion(instance, root, instance.question_ids, instance.question_limit)
