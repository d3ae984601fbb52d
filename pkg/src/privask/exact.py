"""Exact optimal interview search (max-min with alpha-beta pruning).

A node's value is the best of stopping (max(fit, 1 - fit) of its population)
and, for every unused question whose realizable children all satisfy the
privacy rules, the worst child value.  The search keeps two numbers per call:
the fail-soft alpha-beta value used for pruning, and the exact goodness of the
best complete subtree assembled so far.  The assembled goodness never exceeds
the true node value and the search value never understates what pruning may
rely on, so at the root, where the window is one-sided, both coincide with the
optimum.

Question options are tried in descending one-step stop value, answers in
ascending child population size; stopping is evaluated first and seeds alpha.
With pruning disabled the search visits everything and returns the same
goodness, which the tests exercise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import (
    Ask,
    InfeasibleRootError,
    Instance,
    InterviewTree,
    LEAF,
    PopulationView,
    QuestionProbe,
    ValidationError,
    extreme_of,
    fit_ratio,
    privacy_ok,
    probe_question,
)

__all__ = ["SearchBudget", "ExactResult", "CdpcResult", "solve_exact", "decide_cdpc"]

_ONE = Fraction(1)
_ALPHA_FLOOR = Fraction(-1)
_BETA_CEIL = Fraction(2)


@dataclass(frozen=True)
class SearchBudget:
    """Optional caps on the search; both must be positive when given."""

    time_cap: Optional[float] = None  # seconds
    node_cap: Optional[int] = None

    def __post_init__(self):
        if self.time_cap is not None and not self.time_cap > 0:
            raise ValidationError(f"time_cap must be positive, got {self.time_cap!r}")
        if self.node_cap is not None and not self.node_cap > 0:
            raise ValidationError(f"node_cap must be positive, got {self.node_cap!r}")


@dataclass(frozen=True)
class ExactResult:
    tree: InterviewTree
    goodness: Fraction
    optimal: bool  # False when the budget ran out and this is only best-so-far
    nodes: int
    seconds: float


@dataclass(frozen=True)
class CdpcResult:
    positive: bool
    witness: Optional[InterviewTree]
    completed: bool = True  # False when the budget ran out before a verdict


class _OutOfBudget(Exception):
    pass


class _Search:
    def __init__(self, instance: Instance, budget: Optional[SearchBudget], prune: bool, memo: bool):
        self.instance = instance
        self.prune = prune
        self.memo: Optional[dict] = {} if memo else None
        self.nodes = 0
        self.node_cap = budget.node_cap if budget else None
        self.deadline = (
            time.monotonic() + budget.time_cap if budget and budget.time_cap else None
        )

    def _tick(self):
        self.nodes += 1
        if self.node_cap is not None and self.nodes > self.node_cap:
            raise _OutOfBudget
        if self.deadline is not None and (self.nodes & 255) == 0:
            if time.monotonic() > self.deadline:
                raise _OutOfBudget

    def _max(self, pop: PopulationView, unused: tuple[str, ...], depth_left: int,
             alpha: Fraction, beta: Fraction):
        self._tick()
        key = None
        if self.memo is not None:
            key = (pop.member_indices.tobytes(), unused, depth_left)
            hit = self.memo.get(key)
            if hit is not None:
                flag, v, tree, g = hit
                if (
                    flag == "E"
                    or (flag == "L" and v >= beta)
                    or (flag == "U" and v <= alpha)
                ):
                    return v, tree, g
        alpha_in = alpha
        stop_g = extreme_of(pop, self.instance)
        best_v = stop_g
        best_tree: InterviewTree = LEAF
        best_g = stop_g
        cur = stop_g
        if (
            depth_left > 0
            and unused
            and cur < _ONE
            and not (self.prune and cur >= beta)
        ):
            if self.prune:
                alpha = max(alpha, cur)
            options = []
            for q in unused:
                probe = probe_question(pop, self.instance, q)
                if probe.feasible:
                    options.append((q, probe))
            options.sort(key=lambda item: -item[1].stop_value)
            for q, probe in options:
                rest = tuple(u for u in unused if u != q)
                v, tree, g = self._min(q, probe, rest, depth_left - 1, alpha, beta)
                if tree is not None and g > best_g:
                    best_g, best_tree = g, tree
                if v > best_v:
                    best_v = v
                cur = max(best_v, best_g)
                if self.prune and cur >= beta:
                    break
                alpha = max(alpha, cur)
                if cur >= _ONE:
                    break
        if self.memo is not None:
            if cur <= alpha_in:
                flag = "U"
            elif self.prune and cur >= beta:
                flag = "L"
            else:
                flag = "E"
            self.memo[key] = (flag, cur, best_tree, best_g)
        return cur, best_tree, best_g

    def _min(self, question: str, probe: QuestionProbe, unused: tuple[str, ...],
             depth_left: int, alpha: Fraction, beta: Fraction):
        order = sorted(
            range(len(probe.children)),
            key=lambda i: probe.children[i][1].total_quantity,
        )
        branches: dict[str, InterviewTree] = {}
        v_min: Optional[Fraction] = None
        g_min: Optional[Fraction] = None
        for i in order:
            aid, child = probe.children[i]
            v, tree, g = self._max(child, unused, depth_left, alpha, beta)
            branches[aid] = tree
            if v_min is None or v < v_min:
                v_min = v
            if g_min is None or g < g_min:
                g_min = g
            if self.prune:
                if v_min <= alpha:
                    return v_min, None, None
                beta = min(beta, v_min)
        decl_order = {aid: branches[aid] for aid, _ in probe.children}
        return v_min, Ask(question, decl_order), g_min


def _require_feasible_root(instance: Instance) -> PopulationView:
    root = instance.root_view()
    ok, violations = privacy_ok(root, instance)
    if not ok:
        rule, ratio = violations[0]
        raise InfeasibleRootError(
            f"root population violates privacy rule ({rule.question}, {rule.answer}): "
            f"ratio {ratio} outside [{rule.low}, {rule.high}]; no feasible tree exists"
        )
    return root


def solve_exact(
    instance: Instance,
    budget: Optional[SearchBudget] = None,
    *,
    use_pruning: bool = True,
    memoize: bool = False,
) -> ExactResult:
    """Find an interview tree of maximum goodness.

    Deterministic; `optimal` is False only when the budget ran out, in which
    case the best complete tree found so far is returned.
    """
    t0 = time.perf_counter()
    root = _require_feasible_root(instance)
    search = _Search(instance, budget, use_pruning, memoize)
    stop_g = extreme_of(root, instance)
    best_tree: InterviewTree = LEAF
    best_g = stop_g
    alpha = stop_g if use_pruning else _ALPHA_FLOOR
    optimal = True
    try:
        if instance.question_limit > 0 and best_g < _ONE:
            options = []
            for q in instance.question_ids:
                probe = probe_question(root, instance, q)
                if probe.feasible:
                    options.append((q, probe))
            options.sort(key=lambda item: -item[1].stop_value)
            for q, probe in options:
                rest = tuple(u for u in instance.question_ids if u != q)
                v, tree, g = search._min(
                    q, probe, rest, instance.question_limit - 1, alpha, _BETA_CEIL
                )
                if tree is not None and g > best_g:
                    best_g, best_tree = g, tree
                if use_pruning:
                    alpha = max(alpha, v if v is not None else alpha, best_g)
                if best_g >= _ONE:
                    break
    except _OutOfBudget:
        optimal = False
    return ExactResult(best_tree, best_g, optimal, search.nodes, time.perf_counter() - t0)


def decide_cdpc(instance: Instance, budget: Optional[SearchBudget] = None) -> CdpcResult:
    """Decide whether some feasible tree makes every leaf's fit <= x or >= y.

    Returns the first witness tree found (questions tried in declaration
    order), exiting as soon as one exists.
    """
    if instance.cdpc_thresholds is None:
        raise ValidationError("instance has no decision thresholds")
    x, y = instance.cdpc_thresholds
    root = _require_feasible_root(instance)
    search = _Search(instance, budget, True, False)

    def grow(pop: PopulationView, unused: tuple[str, ...], depth_left: int):
        search._tick()
        f = fit_ratio(pop, instance)
        if f <= x or f >= y:
            return LEAF
        if depth_left <= 0 or not unused:
            return None
        for q in unused:
            probe = probe_question(pop, instance, q, want_score=False)
            if not probe.feasible:
                continue
            rest = tuple(u for u in unused if u != q)
            branches = {}
            for aid, child in probe.children:
                sub = grow(child, rest, depth_left - 1)
                if sub is None:
                    break
                branches[aid] = sub
            else:
                return Ask(q, branches)
        return None

    try:
        witness = grow(root, instance.question_ids, instance.question_limit)
    except _OutOfBudget:
        return CdpcResult(False, None, completed=False)
    return CdpcResult(witness is not None, witness)
