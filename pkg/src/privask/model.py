"""Core domain model: instances, populations, privacy rules and interview trees.

All ratio arithmetic is exact. Fractions only ever hold normalized values
(lowest terms, positive denominator), and the hot paths compare ratios by
cross-multiplying Python ints so no float ever participates in a feasibility
decision.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

__all__ = [
    "ValidationError",
    "InfeasibleRootError",
    "RootPrivacyWarning",
    "parse_rational",
    "format_rational",
    "CandidateType",
    "PrivacyRule",
    "Instance",
    "PopulationView",
    "Leaf",
    "Ask",
    "InterviewTree",
    "LEAF",
    "restrict",
    "split",
    "fit_ratio",
    "answer_ratio",
    "privacy_ok",
    "extreme_of",
    "probe_question",
    "tree_depth",
    "tree_nodes",
    "tree_to_dict",
    "tree_from_dict",
    "parse_tree",
    "serialize_tree",
    "parse_instance",
    "instance_from_dict",
    "serialize_instance",
]


class ValidationError(ValueError):
    """Raised when a document or constructor argument violates the schema."""


class InfeasibleRootError(ValueError):
    """Raised by solvers when the root population already breaks a privacy rule."""


class RootPrivacyWarning(UserWarning):
    """The instance is legal but degenerate: no interview tree can be feasible."""


# ---------------------------------------------------------------------------
# rationals

RationalLike = Union[Fraction, int, str, Decimal, float]

# int64 sums stay exact below this; larger instances fall back to object arrays
_INT64_SAFE = 1 << 62


def parse_rational(value: RationalLike) -> Fraction:
    """Parse a ratio from "p/q" text, a decimal literal, an int or a Fraction.

    Floats are interpreted through their shortest decimal repr, so 0.2 means
    exactly 1/5 rather than the nearest binary float.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
    raise ValidationError(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# static data types


@dataclass(frozen=True)
class CandidateType:
    """One row of the population table: a full answer profile with a weight."""

    answers: Mapping[str, str]
    fitness: Fraction
    quantity: int

    def __post_init__(self):
        object.__setattr__(self, "answers", dict(self.answers))
        object.__setattr__(self, "fitness", parse_rational(self.fitness))
        if not isinstance(self.quantity, int) or isinstance(self.quantity, bool):
            raise ValidationError(f"quantity must be an int, got {self.quantity!r}")
        if self.quantity < 1:
            raise ValidationError("candidate type with zero or negative quantity")
        if not 0 <= self.fitness <= 1:
            raise ValidationError(f"fitness {self.fitness} outside [0, 1]")


@dataclass(frozen=True)
class PrivacyRule:
    """Keep the share of members answering `answer` to `question` in [low, high]."""

    question: str
    answer: str
    low: Fraction
    high: Fraction

    def __post_init__(self):
        object.__setattr__(self, "low", parse_rational(self.low))
        object.__setattr__(self, "high", parse_rational(self.high))
        if not (0 <= self.low <= self.high <= 1):
            raise ValidationError(
                f"privacy bounds out of order for ({self.question}, {self.answer}): "
                f"low={self.low} high={self.high}"
            )


@dataclass(frozen=True, eq=False)
class PopulationView:
    """An immutable selection of candidate-type rows, never empty."""

    member_indices: np.ndarray
    total_quantity: int

    def __len__(self) -> int:
        return len(self.member_indices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PopulationView):
            return NotImplemented
        return self.total_quantity == other.total_quantity and np.array_equal(
            self.member_indices, other.member_indices
        )

    __hash__ = None  # type: ignore[assignment]

    def indices(self) -> tuple[int, ...]:
        return tuple(int(i) for i in self.member_indices)


@dataclass(frozen=True)
class Instance:
    """A population of candidate types plus the questions an interview may ask.

    questions: ordered (id, answer ids) pairs; every question has >= 2 answers.
    question_limit: max number of questions along any interview path.
    cdpc_thresholds: optional (x, y) pair; when present the instance is a
    decision-problem instance and every fitness must be 0 or 1.
    meta: free-form mapping, round-tripped verbatim through serialization.
    """

    questions: Sequence[tuple[str, tuple[str, ...]]]
    candidate_types: Sequence[CandidateType]
    privacy_rules: Sequence[PrivacyRule] = ()
    question_limit: int = 0
    cdpc_thresholds: Optional[tuple[Fraction, Fraction]] = None
    meta: Optional[dict] = None

    def __post_init__(self):
        qs = tuple((str(q), tuple(str(a) for a in answers)) for q, answers in self.questions)
        object.__setattr__(self, "questions", qs)
        object.__setattr__(
            self,
            "candidate_types",
            tuple(
                t if isinstance(t, CandidateType) else CandidateType(**t)
                for t in self.candidate_types
            ),
        )
        object.__setattr__(self, "privacy_rules", tuple(self.privacy_rules))
        if self.cdpc_thresholds is not None:
            x, y = self.cdpc_thresholds
            object.__setattr__(
                self, "cdpc_thresholds", (parse_rational(x), parse_rational(y))
            )
        self._validate()
        self._build_caches()
        ok, _ = privacy_ok(self.root_view(), self)
        if not ok:
            warnings.warn(
                "root population already violates a privacy rule; "
                "no interview tree over this instance can be feasible",
                RootPrivacyWarning,
                stacklevel=2,
            )

    # -- validation ---------------------------------------------------------

    def _validate(self):
        if not self.questions:
            raise ValidationError("instance declares no questions")
        seen_q: set[str] = set()
        for qid, answers in self.questions:
            if not qid:
                raise ValidationError("empty question id")
            if qid in seen_q:
                raise ValidationError(f"duplicate question id {qid!r}")
            seen_q.add(qid)
            if len(answers) < 2:
                raise ValidationError(f"question {qid!r} declares fewer than 2 answers")
            if len(set(answers)) != len(answers):
                raise ValidationError(f"question {qid!r} has duplicate answer ids")
        if not self.candidate_types:
            raise ValidationError("instance declares no candidate types")
        by_q = {qid: set(answers) for qid, answers in self.questions}
        seen_profiles: set[tuple] = set()
        for t in self.candidate_types:
            if set(t.answers) != set(by_q):
                missing = set(by_q) - set(t.answers)
                extra = set(t.answers) - set(by_q)
                if missing:
                    raise ValidationError(
                        f"candidate type missing answer for question(s) {sorted(missing)}"
                    )
                raise ValidationError(
                    f"candidate type answers undeclared question(s) {sorted(extra)}"
                )
            for qid, aid in t.answers.items():
                if aid not in by_q[qid]:
                    raise ValidationError(
                        f"candidate type gives undeclared answer {aid!r} to question {qid!r}"
                    )
            profile = tuple(t.answers[qid] for qid, _ in self.questions)
            if profile in seen_profiles:
                raise ValidationError(f"duplicate candidate type {profile!r}")
            seen_profiles.add(profile)
        for r in self.privacy_rules:
            if r.question not in by_q:
                raise ValidationError(f"privacy rule references undeclared question {r.question!r}")
            if r.answer not in by_q[r.question]:
                raise ValidationError(
                    f"privacy rule references undeclared answer {r.answer!r} "
                    f"to question {r.question!r}"
                )
        k = self.question_limit
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            raise ValidationError(f"question_limit must be a natural number, got {k!r}")
        if k > len(self.questions):
            raise ValidationError(
                f"question_limit {k} exceeds the number of questions {len(self.questions)}"
            )
        if self.cdpc_thresholds is not None:
            x, y = self.cdpc_thresholds
            if not (0 <= x <= y <= 1):
                raise ValidationError(f"decision thresholds out of order: x={x} y={y}")
            for t in self.candidate_types:
                if t.fitness not in (0, 1):
                    raise ValidationError(
                        "decision-mode instance requires 0/1 fitness, "
                        f"got {t.fitness}"
                    )

    # -- caches -------------------------------------------------------------

    def _build_caches(self):
        qcol = {qid: j for j, (qid, _) in enumerate(self.questions)}
        acode = [
            {aid: c for c, aid in enumerate(answers)} for _, answers in self.questions
        ]
        n, m = len(self.candidate_types), len(self.questions)
        ans = np.empty((n, m), dtype=np.int32)
        for i, t in enumerate(self.candidate_types):
            for j, (qid, _) in enumerate(self.questions):
                ans[i, j] = acode[j][t.answers[qid]]

        scale = lcm(*(t.fitness.denominator for t in self.candidate_types))
        total = sum(t.quantity for t in self.candidate_types)
        big = scale * total >= _INT64_SAFE
        dtype = object if big else np.int64
        qty = np.array([t.quantity for t in self.candidate_types], dtype=dtype)
        fitw = np.array(
            [
                t.quantity * t.fitness.numerator * (scale // t.fitness.denominator)
                for t in self.candidate_types
            ],
            dtype=dtype,
        )
        rule_qty = []
        rules_fast = []
        for r in self.privacy_rules:
            j = qcol[r.question]
            code = acode[j][r.answer]
            w = np.where(ans[:, j] == code, qty, 0 if big else np.int64(0))
            rule_qty.append(w.astype(dtype) if big else w)
            rules_fast.append(
                (
                    r.low.numerator,
                    r.low.denominator,
                    r.high.numerator,
                    r.high.denominator,
                )
            )
        object.__setattr__(self, "_qcol", qcol)
        object.__setattr__(self, "_acode", acode)
        object.__setattr__(self, "_ans", ans)
        object.__setattr__(self, "_qty", qty)
        object.__setattr__(self, "_fitw", fitw)
        object.__setattr__(self, "_fit_scale", scale)
        object.__setattr__(self, "_total_quantity", total)
        object.__setattr__(self, "_rule_qty", rule_qty)
        object.__setattr__(self, "_rules_fast", rules_fast)

    # -- accessors ----------------------------------------------------------

    @property
    def n_types(self) -> int:
        return len(self.candidate_types)

    @property
    def n_questions(self) -> int:
        return len(self.questions)

    @property
    def question_ids(self) -> tuple[str, ...]:
        return tuple(q for q, _ in self.questions)

    def answers_of(self, question: str) -> tuple[str, ...]:
        try:
            return self.questions[self._qcol[question]][1]
        except KeyError:
            raise ValidationError(f"undeclared question {question!r}") from None

    def root_view(self) -> PopulationView:
        return PopulationView(np.arange(self.n_types, dtype=np.int64), self._total_quantity)

    def serialize(self) -> dict:
        doc: dict = {
            "questions": [{"id": q, "answers": list(a)} for q, a in self.questions],
            "candidate_types": [
                {
                    "answers": dict(t.answers),
                    "fitness": format_rational(t.fitness),
                    "quantity": t.quantity,
                }
                for t in self.candidate_types
            ],
            "privacy_rules": [
                {
                    "question": r.question,
                    "answer": r.answer,
                    "low": format_rational(r.low),
                    "high": format_rational(r.high),
                }
                for r in self.privacy_rules
            ],
            "question_limit": self.question_limit,
        }
        if self.cdpc_thresholds is not None:
            x, y = self.cdpc_thresholds
            doc["cdpc"] = {"x": format_rational(x), "y": format_rational(y)}
        if self.meta is not None:
            doc["meta"] = self.meta
        return doc


# ---------------------------------------------------------------------------
# population operations


def restrict(
    pop: PopulationView, instance: Instance, question: str, answer: str
) -> Optional[PopulationView]:
    """Members of `pop` that give `answer` to `question`; None if there are none."""
    j = instance._qcol.get(question)
    if j is None:
        raise ValidationError(f"undeclared question {question!r}")
    code = instance._acode[j].get(answer)
    if code is None:
        raise ValidationError(f"undeclared answer {answer!r} to question {question!r}")
    idx = pop.member_indices
    sub = idx[instance._ans[idx, j] == code]
    if len(sub) == 0:
        return None
    return PopulationView(sub, int(instance._qty[sub].sum()))


def split(
    pop: PopulationView, instance: Instance, question: str
) -> list[tuple[str, PopulationView]]:
    """Partition `pop` by question, keeping only realizable answers (declaration order)."""
    j = instance._qcol.get(question)
    if j is None:
        raise ValidationError(f"undeclared question {question!r}")
    idx = pop.member_indices
    codes = instance._ans[idx, j]
    qty = instance._qty
    out = []
    for code, aid in enumerate(instance.questions[j][1]):
        sub = idx[codes == code]
        if len(sub):
            out.append((aid, PopulationView(sub, int(qty[sub].sum()))))
    return out


def fit_ratio(pop: PopulationView, instance: Instance) -> Fraction:
    """Quantity-weighted average fitness of the population."""
    w = int(instance._fitw[pop.member_indices].sum())
    return Fraction(w, instance._fit_scale * pop.total_quantity)


def extreme_of(pop: PopulationView, instance: Instance) -> Fraction:
    """max(fit, 1 - fit): how certain a verdict is if the interview stops here."""
    f = fit_ratio(pop, instance)
    return max(f, 1 - f)


def answer_ratio(
    pop: PopulationView, instance: Instance, question: str, answer: str
) -> Fraction:
    """Share of the population (by quantity) answering `answer` to `question`."""
    j = instance._qcol.get(question)
    if j is None:
        raise ValidationError(f"undeclared question {question!r}")
    code = instance._acode[j].get(answer)
    if code is None:
        raise ValidationError(f"undeclared answer {answer!r} to question {question!r}")
    idx = pop.member_indices
    matched = int(instance._qty[idx[instance._ans[idx, j] == code]].sum())
    return Fraction(matched, pop.total_quantity)


def privacy_ok(
    pop: PopulationView, instance: Instance
) -> tuple[bool, list[tuple[PrivacyRule, Fraction]]]:
    """Check every privacy rule against the population.

    Returns (all satisfied, violations) where each violation pairs the failing
    rule with the offending ratio.
    """
    violations = []
    tq = pop.total_quantity
    idx = pop.member_indices
    for r, rw, (lo_n, lo_d, hi_n, hi_d) in zip(
        instance.privacy_rules, instance._rule_qty, instance._rules_fast
    ):
        matched = int(rw[idx].sum())
        if matched * lo_d < lo_n * tq or matched * hi_d > hi_n * tq:
            violations.append((r, Fraction(matched, tq)))
    return (not violations, violations)


@dataclass(frozen=True)
class QuestionProbe:
    """One-pass summary of asking a question of a population."""

    feasible: bool
    children: tuple[tuple[str, PopulationView], ...]
    stop_value: Optional[Fraction]  # min over children of their extreme

    @property
    def vacuous(self) -> bool:
        return len(self.children) == 1


def probe_question(
    pop: PopulationView, instance: Instance, question: str, want_score: bool = True
) -> QuestionProbe:
    """Partition `pop` by `question`, check privacy of every realizable child and
    (optionally) compute the one-step stop value.

    A question is feasible iff every realizable child satisfies every privacy
    rule; the stop value is the goodness the interview would have if it asked
    this one question and stopped.
    """
    j = instance._qcol.get(question)
    if j is None:
        raise ValidationError(f"undeclared question {question!r}")
    idx = pop.member_indices
    codes = instance._ans[idx, j]
    qty = instance._qty
    fitw = instance._fitw
    scale = instance._fit_scale
    rule_qty = instance._rule_qty
    rules_fast = instance._rules_fast

    feasible = True
    score: Optional[Fraction] = None
    children = []
    for code, aid in enumerate(instance.questions[j][1]):
        sub = idx[codes == code]
        if len(sub) == 0:
            continue
        tq = int(qty[sub].sum())
        children.append((aid, PopulationView(sub, tq)))
        if feasible:
            for rw, (lo_n, lo_d, hi_n, hi_d) in zip(rule_qty, rules_fast):
                matched = int(rw[sub].sum())
                if matched * lo_d < lo_n * tq or matched * hi_d > hi_n * tq:
                    feasible = False
                    break
        if want_score:
            w = int(fitw[sub].sum())
            f = Fraction(w, scale * tq)
            ext = max(f, 1 - f)
            if score is None or ext < score:
                score = ext
    return QuestionProbe(feasible, tuple(children), score)


# ---------------------------------------------------------------------------
# interview trees


@dataclass(frozen=True)
class Leaf:
    """The interview stops here."""


@dataclass(frozen=True)
class Ask:
    """Ask `question`; `branches` maps answer ids to subtrees.

    A realizable answer without a branch simply ends the interview there.
    """

    question: str
    branches: Mapping[str, "InterviewTree"]

    def __post_init__(self):
        object.__setattr__(self, "branches", dict(self.branches))


InterviewTree = Union[Leaf, Ask]

LEAF = Leaf()


def tree_depth(tree: InterviewTree) -> int:
    """Number of questions on the longest path."""
    if isinstance(tree, Leaf):
        return 0
    if not tree.branches:
        return 1
    return 1 + max(tree_depth(sub) for sub in tree.branches.values())


def tree_nodes(tree: InterviewTree) -> int:
    if isinstance(tree, Leaf):
        return 1
    return 1 + sum(tree_nodes(sub) for sub in tree.branches.values())


def tree_to_dict(tree: InterviewTree) -> dict:
    if isinstance(tree, Leaf):
        return {"leaf": True}
    return {
        "ask": {
            "question": tree.question,
            "branches": {aid: tree_to_dict(sub) for aid, sub in tree.branches.items()},
        }
    }


def tree_from_dict(doc) -> InterviewTree:
    if not isinstance(doc, dict):
        raise ValidationError(f"malformed tree node: {doc!r}")
    if set(doc) == {"leaf"}:
        if doc["leaf"] is not True:
            raise ValidationError("leaf node must be {\"leaf\": true}")
        return LEAF
    if set(doc) == {"ask"}:
        body = doc["ask"]
        if (
            not isinstance(body, dict)
            or set(body) != {"question", "branches"}
            or not isinstance(body["question"], str)
            or not isinstance(body["branches"], dict)
        ):
            raise ValidationError("malformed ask node")
        return Ask(
            body["question"],
            {str(a): tree_from_dict(sub) for a, sub in body["branches"].items()},
        )
    raise ValidationError(f"malformed tree node with keys {sorted(doc)!r}")


def serialize_tree(tree: InterviewTree) -> str:
    return json.dumps(tree_to_dict(tree), indent=2, ensure_ascii=False) + "\n"


def parse_tree(text: str) -> InterviewTree:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed tree document: {exc}") from exc
    return tree_from_dict(doc)


# ---------------------------------------------------------------------------
# instance (de)serialization


def _require(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise ValidationError(f"missing {key!r} in {where}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise ValidationError(f"{where}.{key} has the wrong type")
    return value


def instance_from_dict(doc) -> Instance:
    if not isinstance(doc, dict):
        raise ValidationError("instance document must be an object")
    allowed = {"questions", "candidate_types", "privacy_rules", "question_limit", "cdpc", "meta"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValidationError(f"unexpected key(s) in instance document: {sorted(unknown)}")
    questions = []
    for q in _require(doc, "questions", list, "instance"):
        if not isinstance(q, dict) or set(q) != {"id", "answers"}:
            raise ValidationError(f"malformed question entry: {q!r}")
        if not isinstance(q["id"], str) or not isinstance(q["answers"], list):
            raise ValidationError(f"malformed question entry: {q!r}")
        questions.append((q["id"], tuple(str(a) for a in q["answers"])))
    types = []
    for t in _require(doc, "candidate_types", list, "instance"):
        if not isinstance(t, dict) or set(t) != {"answers", "fitness", "quantity"}:
            raise ValidationError(f"malformed candidate type entry: {t!r}")
        if not isinstance(t["answers"], dict):
            raise ValidationError("candidate type answers must be an object")
        types.append(
            CandidateType(
                {str(k): str(v) for k, v in t["answers"].items()},
                parse_rational(t["fitness"]),
                t["quantity"],
            )
        )
    rules = []
    for r in doc.get("privacy_rules", []):
        if not isinstance(r, dict) or set(r) != {"question", "answer", "low", "high"}:
            raise ValidationError(f"malformed privacy rule entry: {r!r}")
        rules.append(
            PrivacyRule(
                str(r["question"]),
                str(r["answer"]),
                parse_rational(r["low"]),
                parse_rational(r["high"]),
            )
        )
    limit = _require(doc, "question_limit", int, "instance")
    thresholds = None
    if "cdpc" in doc:
        c = doc["cdpc"]
        if not isinstance(c, dict) or set(c) != {"x", "y"}:
            raise ValidationError("malformed cdpc thresholds")
        thresholds = (parse_rational(c["x"]), parse_rational(c["y"]))
    meta = doc.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise ValidationError("meta must be an object")
    return Instance(questions, types, rules, limit, thresholds, meta)


def parse_instance(text: str) -> Instance:
    """Parse and fully validate an instance document."""
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed instance document: {exc}") from exc
    return instance_from_dict(doc)


def serialize_instance(instance: Instance) -> str:
    return json.dumps(instance.serialize(), indent=2, ensure_ascii=False) + "\n"
