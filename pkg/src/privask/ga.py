"""Genetic search over feasible interview trees.

Every individual in the population is always a feasible tree: construction
samples only privacy-safe questions, crossover prunes unsafe paths while
copying, and mutation regrows subtrees with the same machinery.  The
reinforced variant seeds the population with the greedy tree (and a mutation
of it) and lets mutation complete subtrees greedily half of the time.

A single seeded RNG stream drives every draw in a fixed order, so runs are
bit-for-bit reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .greedy import greedy_completion, solve_greedy
from .model import (
    Ask,
    InfeasibleRootError,
    Instance,
    InterviewTree,
    Leaf,
    LEAF,
    PopulationView,
    ValidationError,
    parse_rational,
    privacy_ok,
    probe_question,
    split,
    tree_nodes,
)
from .verify import goodness

__all__ = ["GaConfig", "GaRunRecord", "random_tree", "crossover", "mutate", "run_ga"]


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 20
    iterations: int = 400
    mutation_rate: Fraction = Fraction(1, 5)
    repair_attempts: int = 100
    reinforced: bool = False
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mutation_rate", parse_rational(self.mutation_rate))
        if self.population_size < 2 or self.population_size % 2:
            raise ValidationError(
                f"population_size must be even and >= 2, got {self.population_size}"
            )
        if self.iterations < 0:
            raise ValidationError("iterations must be >= 0")
        if not 0 <= self.mutation_rate <= 1:
            raise ValidationError(f"mutation_rate {self.mutation_rate} outside [0, 1]")
        if self.repair_attempts < 1:
            raise ValidationError("repair_attempts must be >= 1")


@dataclass(frozen=True)
class GaRunRecord:
    best_tree: InterviewTree
    best_goodness: Fraction
    history: tuple[tuple[int, Fraction], ...]  # (iteration, best so far)


@dataclass(frozen=True)
class _Individual:
    tree: InterviewTree
    goodness: Fraction
    nodes: int
    birth: int


def _better(a: _Individual, b: _Individual) -> _Individual:
    """Higher goodness wins; ties prefer fewer nodes, then earlier creation."""
    if a.goodness != b.goodness:
        return a if a.goodness > b.goodness else b
    if a.nodes != b.nodes:
        return a if a.nodes < b.nodes else b
    return a if a.birth <= b.birth else b


def _random_subtree(
    instance: Instance,
    pop: PopulationView,
    unused: tuple[str, ...],
    depth_budget: int,
    rng: random.Random,
    attempts: int,
) -> InterviewTree:
    # the attempts budget is shared by the whole construction, each privacy
    # test of a sampled question consumes one
    budget = [attempts]

    def build(p: PopulationView, avail: tuple[str, ...], depth_left: int) -> InterviewTree:
        if depth_left <= 0 or not avail or budget[0] <= 0:
            return LEAF
        order = list(avail)
        rng.shuffle(order)
        for q in order:
            if budget[0] <= 0:
                return LEAF
            budget[0] -= 1
            probe = probe_question(p, instance, q, want_score=False)
            if probe.feasible:
                rest = tuple(u for u in avail if u != q)
                return Ask(
                    q,
                    {
                        aid: build(child, rest, depth_left - 1)
                        for aid, child in probe.children
                    },
                )
        return LEAF

    target = rng.randint(0, depth_budget)
    return build(pop, unused, target)


def random_tree(
    instance: Instance, depth_budget: int, rng: random.Random, attempts: int = 100
) -> InterviewTree:
    """Sample a feasible tree of random depth <= depth_budget.

    The root population must satisfy the privacy rules.  In the worst case
    (every question unsafe everywhere, or the attempts budget exhausted) the
    result is a bare leaf, which is always feasible.
    """
    return _random_subtree(
        instance, instance.root_view(), instance.question_ids, depth_budget, rng, attempts
    )


def _questions_in(tree: InterviewTree, acc: set[str]) -> set[str]:
    if isinstance(tree, Ask):
        acc.add(tree.question)
        for sub in tree.branches.values():
            _questions_in(sub, acc)
    return acc


def _graft(
    tree: InterviewTree,
    instance: Instance,
    pop: PopulationView,
    used: frozenset[str],
    depth_left: int,
    path_answers: dict[str, str],
) -> InterviewTree:
    """Copy `tree` onto a node, repairing it: asks repeating an ancestor
    question contract to the branch the path already implies, unsafe asks are
    pruned to leaves, and anything below the depth budget is truncated."""
    while isinstance(tree, Ask) and tree.question in used:
        tree = tree.branches.get(path_answers[tree.question], LEAF)
    if isinstance(tree, Leaf) or depth_left <= 0:
        return LEAF
    probe = probe_question(pop, instance, tree.question, want_score=False)
    if not probe.feasible:
        return LEAF
    used = used | {tree.question}
    branches = {}
    for aid, child in probe.children:
        path_answers[tree.question] = aid
        branches[aid] = _graft(
            tree.branches.get(aid, LEAF), instance, child, used, depth_left - 1, path_answers
        )
    del path_answers[tree.question]
    return Ask(tree.question, branches)


def crossover(
    parent_a: InterviewTree,
    parent_b: InterviewTree,
    instance: Instance,
    rng: random.Random,
) -> InterviewTree:
    """Recombine two feasible trees into a new feasible tree.

    The offspring's root is a question used in neither parent that is safe at
    the root; each realizable branch copies one parent (chosen uniformly per
    branch) repaired by `_graft`.  When no fresh safe root question exists the
    offspring is a copy of the fitter parent.
    """
    root = instance.root_view()
    used = _questions_in(parent_a, set()) | _questions_in(parent_b, set())
    pool = [q for q in instance.question_ids if q not in used]
    rng.shuffle(pool)
    for q in pool:
        probe = probe_question(root, instance, q, want_score=False)
        if not probe.feasible:
            continue
        branches = {}
        for aid, child in probe.children:
            donor = parent_a if rng.random() < 0.5 else parent_b
            branches[aid] = _graft(
                donor, instance, child, frozenset((q,)), instance.question_limit - 1, {q: aid}
            )
        return Ask(q, branches)
    ga, gb = goodness(parent_a, instance), goodness(parent_b, instance)
    if ga != gb:
        return parent_a if ga > gb else parent_b
    return parent_a if tree_nodes(parent_a) <= tree_nodes(parent_b) else parent_b


def _collect_nodes(
    tree: InterviewTree,
    instance: Instance,
    pop: PopulationView,
    path: tuple,
    used: frozenset[str],
    out: list,
):
    out.append((path, pop, used, tree))
    if isinstance(tree, Ask):
        for aid, child in split(pop, instance, tree.question):
            _collect_nodes(
                tree.branches.get(aid, LEAF),
                instance,
                child,
                path + ((tree.question, aid),),
                used | {tree.question},
                out,
            )


def _replace_at(tree: InterviewTree, path: tuple, new: InterviewTree) -> InterviewTree:
    if not path:
        return new
    (q, aid) = path[0]
    branches = dict(tree.branches)
    branches[aid] = _replace_at(branches.get(aid, LEAF), path[1:], new)
    return Ask(q, branches)


def _mutate_once(
    tree: InterviewTree, instance: Instance, rng: random.Random, config: GaConfig
) -> InterviewTree:
    nodes: list = []
    _collect_nodes(tree, instance, instance.root_view(), (), frozenset(), nodes)
    max_depth = max(len(path) for path, _, _, _ in nodes)
    d = rng.randint(0, max_depth)
    at_depth = [entry for entry in nodes if len(entry[0]) == d]
    path, pop, used, _ = at_depth[rng.randrange(len(at_depth))]
    unused = tuple(q for q in instance.question_ids if q not in used)
    budget = instance.question_limit - d
    if config.reinforced and rng.random() < 0.5:
        replacement = greedy_completion(instance, pop, unused, budget)
    else:
        replacement = _random_subtree(
            instance, pop, unused, budget, rng, config.repair_attempts
        )
    return _replace_at(tree, path, replacement)


def mutate(
    tree: InterviewTree, instance: Instance, rng: random.Random, config: GaConfig
) -> InterviewTree:
    """With probability `mutation_rate`, regrow the subtree of a uniformly
    chosen node (uniform depth first, then uniform node at that depth)."""
    if rng.random() >= config.mutation_rate:
        return tree
    return _mutate_once(tree, instance, rng, config)


def run_ga(instance: Instance, config: Optional[GaConfig] = None) -> GaRunRecord:
    """Evolve feasible interview trees and return the best ever seen.

    Each iteration: survivors are paired randomly, every pair produces two
    crossover offspring (independent draws), offspring are mutated, and a
    pairwise tournament over the merged parent+offspring pool selects the next
    generation, into which the global best is always reinserted over the worst
    survivor.
    """
    if config is None:
        config = GaConfig()
    root = instance.root_view()
    ok, violations = privacy_ok(root, instance)
    if not ok:
        rule, ratio = violations[0]
        raise InfeasibleRootError(
            f"root population violates privacy rule ({rule.question}, {rule.answer}): "
            f"ratio {ratio} outside [{rule.low}, {rule.high}]"
        )
    rng = random.Random(config.seed)
    birth = 0

    def make(tree: InterviewTree) -> _Individual:
        nonlocal birth
        ind = _Individual(tree, goodness(tree, instance), tree_nodes(tree), birth)
        birth += 1
        return ind

    n = config.population_size
    population: list[_Individual] = []
    if config.reinforced:
        greedy_tree = solve_greedy(instance)
        population.append(make(greedy_tree))
        population.append(make(_mutate_once(greedy_tree, instance, rng, config)))
    while len(population) < n:
        population.append(
            make(random_tree(instance, instance.question_limit, rng, config.repair_attempts))
        )
    best = population[0]
    for ind in population[1:]:
        best = _better(best, ind)
    history = [(0, best.goodness)]

    for it in range(1, config.iterations + 1):
        order = list(range(n))
        rng.shuffle(order)
        offspring: list[_Individual] = []
        for t in range(0, n, 2):
            pa, pb = population[order[t]], population[order[t + 1]]
            for _ in range(2):
                child = crossover(pa.tree, pb.tree, instance, rng)
                child = mutate(child, instance, rng, config)
                offspring.append(make(child))
        for o in offspring:
            best = _better(best, o)
        merged = population + offspring
        rng.shuffle(merged)
        winners = [_better(merged[2 * t], merged[2 * t + 1]) for t in range(n)]
        worst_i = 0
        for i in range(1, n):
            if _better(winners[worst_i], winners[i]) is winners[i]:
                worst_i = i
        winners[worst_i] = best
        population = winners
        history.append((it, best.goodness))

    return GaRunRecord(best.tree, best.goodness, tuple(history))
