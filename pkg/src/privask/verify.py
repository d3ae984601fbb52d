"""Interview tree verification: leaf enumeration, goodness, privacy feasibility.

Privacy only needs checking at the leaves: the leaf populations partition the
root, and every internal population's ratio is a quantity-weighted average of
the ratios of the leaves below it, so it cannot leave [low, high] if none of
the leaf ratios does.  `check_all_nodes` exists to cross-check that argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import (
    Ask,
    Instance,
    InterviewTree,
    Leaf,
    LEAF,
    PopulationView,
    PrivacyRule,
    ValidationError,
    fit_ratio,
    privacy_ok,
    split,
)

__all__ = [
    "LeafRecord",
    "Violation",
    "VerifyReport",
    "leaves",
    "goodness",
    "verify_gcopc",
    "decide_cdpc_tree",
]

Path = tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class LeafRecord:
    """One realizable root-to-leaf path with its final population."""

    path: Path
    population: PopulationView
    fit: Fraction
    extreme: Fraction  # max(fit, 1 - fit)


@dataclass(frozen=True)
class Violation:
    path: Path
    rule: PrivacyRule
    ratio: Fraction


@dataclass(frozen=True)
class VerifyReport:
    feasible: bool
    goodness: Fraction
    leaf_count: int
    depth: int
    violations: tuple[Violation, ...]
    redundant_asks: tuple[tuple[Path, str], ...]  # single-realizable-answer nodes


def _walk(
    tree: InterviewTree,
    instance: Instance,
    pop: PopulationView,
    path: Path,
    used: frozenset[str],
    records: list[LeafRecord],
    internals: Optional[list[tuple[Path, PopulationView]]],
    redundant: list[tuple[Path, str]],
):
    if internals is not None:
        internals.append((path, pop))
    if isinstance(tree, Leaf):
        f = fit_ratio(pop, instance)
        records.append(LeafRecord(path, pop, f, max(f, 1 - f)))
        return
    q = tree.question
    if q not in instance._qcol:
        raise ValidationError(f"tree asks undeclared question {q!r}")
    if q in used:
        raise ValidationError(f"tree repeats question {q!r} along a path")
    if len(path) + 1 > instance.question_limit:
        raise ValidationError(
            f"tree depth exceeds the question limit {instance.question_limit}"
        )
    declared = set(instance.answers_of(q))
    for aid in tree.branches:
        if aid not in declared:
            raise ValidationError(f"tree branches on undeclared answer {aid!r} to {q!r}")
    children = split(pop, instance, q)
    if len(children) == 1:
        redundant.append((path, q))
    used = used | {q}
    for aid, child in children:
        _walk(
            tree.branches.get(aid, LEAF),
            instance,
            child,
            path + ((q, aid),),
            used,
            records,
            internals,
            redundant,
        )


def leaves(tree: InterviewTree, instance: Instance) -> list[LeafRecord]:
    """All realizable leaves in path order (answers in declaration order)."""
    records: list[LeafRecord] = []
    _walk(tree, instance, instance.root_view(), (), frozenset(), records, None, [])
    return records


def goodness(tree: InterviewTree, instance: Instance) -> Fraction:
    """Worst-case verdict certainty over the tree's leaves; always in [1/2, 1]."""
    return min(rec.extreme for rec in leaves(tree, instance))


def verify_gcopc(
    tree: InterviewTree, instance: Instance, check_all_nodes: bool = False
) -> VerifyReport:
    """Check a tree's feasibility and measure its goodness.

    By default privacy is checked at the leaves, which is sufficient; with
    `check_all_nodes` every node population along every realizable path is
    checked and violations carry the node's path.
    """
    records: list[LeafRecord] = []
    internals: Optional[list[tuple[Path, PopulationView]]] = [] if check_all_nodes else None
    redundant: list[tuple[Path, str]] = []
    _walk(
        tree, instance, instance.root_view(), (), frozenset(), records, internals, redundant
    )
    violations: list[Violation] = []
    if check_all_nodes:
        for path, pop in internals:  # type: ignore[union-attr]
            ok, viol = privacy_ok(pop, instance)
            if not ok:
                violations.extend(Violation(path, r, ratio) for r, ratio in viol)
    else:
        for rec in records:
            ok, viol = privacy_ok(rec.population, instance)
            if not ok:
                violations.extend(Violation(rec.path, r, ratio) for r, ratio in viol)
    return VerifyReport(
        feasible=not violations,
        goodness=min(rec.extreme for rec in records),
        leaf_count=len(records),
        depth=max(len(rec.path) for rec in records),
        violations=tuple(violations),
        redundant_asks=tuple(redundant),
    )


def decide_cdpc_tree(tree: InterviewTree, instance: Instance) -> bool:
    """Does the tree witness a positive decision instance?

    True iff the tree is feasible and every leaf's fit ratio is <= x or >= y
    (both inclusive).
    """
    if instance.cdpc_thresholds is None:
        raise ValidationError("instance has no decision thresholds")
    x, y = instance.cdpc_thresholds
    records = leaves(tree, instance)
    for rec in records:
        ok, _ = privacy_ok(rec.population, instance)
        if not ok:
            return False
        if not (rec.fit <= x or rec.fit >= y):
            return False
    return True
