"""Set cover embedded into privacy-constrained interview decision instances.

A set-cover question "can k of these sets cover the universe?" becomes: one
binary question per set plus one `private` question, one candidate type per
element (quantity omega = 2|U||S|), one per set (quantity 1, the only types
answering 1 to `private`), and a heavily weighted all-zero `null` type
(quantity omega^2, the only fit one).  The privacy rule pins the share of
private-1 members to [a, 1] with a = (|S|-k) / (|U|*omega + omega^2 + |S|-k):
each question asked permanently rules out at most one set type on the all-zero
path, so staying above a means asking at most k questions that matter, and the
fit threshold y = omega^2 / (omega^2 + |S|) is reachable on that path only if
those questions rule out every element type, i.e. form a cover.

When k = |S| the question is trivially positive and the transform returns a
fixed known-positive decision instance instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .model import (
    Ask,
    CandidateType,
    Instance,
    InterviewTree,
    LEAF,
    PrivacyRule,
    ValidationError,
    format_rational,
)

__all__ = [
    "ScInstance",
    "ScTransformParams",
    "PRIVATE_QUESTION",
    "parse_sc",
    "sc_from_dict",
    "serialize_sc",
    "set_question_id",
    "transform_params",
    "transform_sc",
    "strategy_tree",
    "sc_bruteforce",
    "cdpc_to_gcopc",
    "shared_bound_rules",
]

PRIVATE_QUESTION = "private"

_BRUTEFORCE_SET_CAP = 25


@dataclass(frozen=True)
class ScInstance:
    """A set-cover decision instance: can <= k of `sets` cover `universe`?

    Normalization (applied on construction): duplicate elements collapse,
    empty and duplicate sets are dropped, set elements are ordered by their
    universe position, and k is capped at the number of surviving sets.
    """

    universe: tuple[str, ...]
    sets: tuple[tuple[str, ...], ...]
    k: int

    def __post_init__(self):
        uni: list[str] = []
        seen = set()
        for e in self.universe:
            e = str(e)
            if e not in seen:
                seen.add(e)
                uni.append(e)
        pos = {e: i for i, e in enumerate(uni)}
        norm_sets: list[tuple[str, ...]] = []
        seen_sets: set[frozenset] = set()
        for s in self.sets:
            elems = frozenset(str(e) for e in s)
            for e in elems:
                if e not in pos:
                    raise ValidationError(f"set element {e!r} not in the universe")
            if not elems or elems in seen_sets:
                continue
            seen_sets.add(elems)
            norm_sets.append(tuple(sorted(elems, key=pos.__getitem__)))
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 0:
            raise ValidationError(f"k must be a natural number, got {self.k!r}")
        covered = set().union(*map(set, norm_sets)) if norm_sets else set()
        if covered != set(uni):
            raise ValidationError("union of the sets must equal the universe")
        object.__setattr__(self, "universe", tuple(uni))
        object.__setattr__(self, "sets", tuple(norm_sets))
        object.__setattr__(self, "k", min(self.k, len(norm_sets)))

    def serialize(self) -> dict:
        return {"universe": list(self.universe), "sets": [list(s) for s in self.sets], "k": self.k}


def sc_from_dict(doc) -> ScInstance:
    if (
        not isinstance(doc, dict)
        or set(doc) != {"universe", "sets", "k"}
        or not isinstance(doc["universe"], list)
        or not isinstance(doc["sets"], list)
        or not all(isinstance(s, list) for s in doc["sets"])
        or not isinstance(doc["k"], int)
    ):
        raise ValidationError("malformed set-cover document")
    return ScInstance(tuple(doc["universe"]), tuple(tuple(s) for s in doc["sets"]), doc["k"])


def parse_sc(text: str) -> ScInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed set-cover document: {exc}") from exc
    return sc_from_dict(doc)


def serialize_sc(sc: ScInstance) -> str:
    return json.dumps(sc.serialize(), indent=2, ensure_ascii=False) + "\n"


def set_question_id(members: Iterable[str]) -> str:
    return "s{" + ",".join(members) + "}"


@dataclass(frozen=True)
class ScTransformParams:
    omega: int
    a: Fraction
    b: Fraction
    x: Fraction
    y: Fraction


def transform_params(sc: ScInstance) -> ScTransformParams:
    if not sc.sets:
        raise ValidationError("transform parameters are undefined for an empty instance")
    n_u, n_s = len(sc.universe), len(sc.sets)
    omega = 2 * n_u * n_s
    a = Fraction(n_s - sc.k, n_u * omega + omega * omega + n_s - sc.k)
    y = Fraction(omega * omega, omega * omega + n_s)
    return ScTransformParams(omega, a, Fraction(1), Fraction(0), y)


def transform_sc(sc: ScInstance) -> Instance:
    """Build the equivalent decision instance.

    The answer is positive iff the set-cover answer is; `decide_cdpc` on the
    result matches `sc_bruteforce` on the input.
    """
    if sc.k == len(sc.sets):
        # covering with all sets always works once the union equals the universe
        from .datasets import hiring_instance

        return replace(hiring_instance(cdpc=True), meta={"trivial": True})
    p = transform_params(sc)
    omega = p.omega
    set_qids = [set_question_id(s) for s in sc.sets]
    questions = [(qid, ("1", "0")) for qid in set_qids] + [(PRIVATE_QUESTION, ("1", "0"))]

    members = [frozenset(s) for s in sc.sets]
    rows: dict[tuple, list] = {}  # answer profile -> [answers, fitness, quantity]

    def add(answers: dict, fitness: Fraction, quantity: int):
        profile = tuple(answers[q] for q, _ in questions)
        row = rows.get(profile)
        if row is None:
            rows[profile] = [answers, fitness, quantity]
        else:
            # elements contained in exactly the same sets are interchangeable
            row[2] += quantity
    for e in sc.universe:
        ans = {qid: ("1" if e in mem else "0") for qid, mem in zip(set_qids, members)}
        ans[PRIVATE_QUESTION] = "0"
        add(ans, Fraction(0), omega)
    for qid in set_qids:
        ans = {q: ("1" if q == qid else "0") for q in set_qids}
        ans[PRIVATE_QUESTION] = "1"
        add(ans, Fraction(0), 1)
    add({q: "0" for q, _ in questions}, Fraction(1), omega * omega)

    types = [CandidateType(a, f, q) for a, f, q in rows.values()]
    rule = PrivacyRule(PRIVATE_QUESTION, "1", p.a, p.b)
    meta = {
        "omega": omega,
        "a": format_rational(p.a),
        "b": format_rational(p.b),
        "x": format_rational(p.x),
        "y": format_rational(p.y),
    }
    return Instance(questions, types, [rule], len(questions), (p.x, p.y), meta)


def strategy_tree(sc: ScInstance, cover: Sequence[Iterable[str]]) -> InterviewTree:
    """The interview a cover induces: ask each cover question, stop on any 1.

    For the trivial k = |S| case this returns the known solution of the fixed
    positive instance `transform_sc` emits.
    """
    known = {frozenset(s) for s in sc.sets}
    chosen = [frozenset(str(e) for e in c) for c in cover]
    for c in chosen:
        if c not in known:
            raise ValidationError(f"cover member {sorted(c)!r} is not one of the sets")
    if len(chosen) > sc.k:
        raise ValidationError(f"cover uses {len(chosen)} sets, more than k={sc.k}")
    union = set().union(*chosen) if chosen else set()
    if union != set(sc.universe):
        raise ValidationError("cover does not cover the universe")
    if sc.k == len(sc.sets):
        from .datasets import hiring_solution_tree

        return hiring_solution_tree()
    pos = {e: i for i, e in enumerate(sc.universe)}
    tree: InterviewTree = LEAF
    for c in reversed(chosen):
        qid = set_question_id(sorted(c, key=pos.__getitem__))
        tree = Ask(qid, {"1": LEAF, "0": tree})
    return tree


def sc_bruteforce(sc: ScInstance) -> tuple[bool, Optional[tuple[tuple[str, ...], ...]]]:
    """Exhaustive oracle; returns the lexicographically first smallest witness.

    Only intended for small instances (at most 25 sets).
    """
    if len(sc.sets) > _BRUTEFORCE_SET_CAP:
        raise ValidationError(
            f"brute force capped at {_BRUTEFORCE_SET_CAP} sets, got {len(sc.sets)}"
        )
    target = set(sc.universe)
    members = [set(s) for s in sc.sets]
    for r in range(sc.k + 1):
        for picks in combinations(range(len(sc.sets)), r):
            covered: set = set()
            for i in picks:
                covered |= members[i]
            if covered == target:
                return True, tuple(sc.sets[i] for i in picks)
    return False, None


def shared_bound_rules(
    questions: Iterable[str], low, high, answer: str = "1"
) -> list[PrivacyRule]:
    """Per-question rules from a shared bound pair, one per private question."""
    return [PrivacyRule(q, answer, low, high) for q in questions]


def cdpc_to_gcopc(instance: Instance) -> Instance:
    """Reinterpret a decision instance as an optimization one.

    The thresholds stop constraining anything and move into `meta`; the
    question limit is lifted to the number of questions (paths cannot repeat
    questions anyway).
    """
    if instance.cdpc_thresholds is None:
        raise ValidationError("instance has no decision thresholds")
    x, y = instance.cdpc_thresholds
    meta = dict(instance.meta or {})
    meta["cdpc_x"] = format_rational(x)
    meta["cdpc_y"] = format_rational(y)
    return replace(
        instance,
        question_limit=instance.n_questions,
        cdpc_thresholds=None,
        meta=meta,
    )
