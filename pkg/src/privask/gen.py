"""Seeded random instance generation.

Privacy rules are centered on the root population's actual answer ratios
(base +/- slack, clipped to [0, 1]), so the root is always feasible by
construction.  All draws come from one seeded RNG in a fixed order, making
generated instances byte-for-byte reproducible.

Fitness modes:
  uniform  i/1000 drawn independently per type
  binary   0 or 1 drawn independently per type
  planted  0/1 given by a random truth table over a hidden subset of
           "relevant" questions, so fitness is determined by answers and
           trees asking the right questions reach goodness near 1; table
           entries are fit with probability planted_bias, which pushes
           the overall fit ratio away from 1/2
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .model import CandidateType, Instance, PrivacyRule, ValidationError, parse_rational

__all__ = ["GenParams", "generate"]

_MAX_COLLISIONS = 1000
_FITNESS_GRAIN = 1000  # uniform fitness is drawn as i/1000


def _check_range(name: str, rng_pair: tuple[int, int], lo_min: int):
    lo, hi = rng_pair
    if not (isinstance(lo, int) and isinstance(hi, int) and lo_min <= lo <= hi):
        raise ValidationError(f"bad {name} range {rng_pair!r}")


@dataclass(frozen=True)
class GenParams:
    """Ranges are inclusive (lo, hi) pairs sampled uniformly."""

    n_types: tuple[int, int] = (2000, 4000)
    n_questions: tuple[int, int] = (150, 300)
    answers_per_question: tuple[int, int] = (2, 5)
    private_count: tuple[int, int] = (4, 9)
    question_limit: tuple[int, int] = (10, 15)
    quantity_per_type: int = 100
    fitness_mode: str = "uniform"
    relevant_questions: int = 3
    planted_bias: Fraction = Fraction(3, 4)
    privacy_slack: Fraction = Fraction(1, 10)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "privacy_slack", parse_rational(self.privacy_slack))
        _check_range("n_types", self.n_types, 1)
        _check_range("n_questions", self.n_questions, 1)
        _check_range("answers_per_question", self.answers_per_question, 2)
        _check_range("private_count", self.private_count, 0)
        _check_range("question_limit", self.question_limit, 0)
        if self.quantity_per_type < 1:
            raise ValidationError("quantity_per_type must be >= 1")
        if self.fitness_mode not in ("uniform", "binary", "planted"):
            raise ValidationError(f"unknown fitness_mode {self.fitness_mode!r}")
        if self.relevant_questions < 1:
            raise ValidationError("relevant_questions must be >= 1")
        object.__setattr__(self, "planted_bias", parse_rational(self.planted_bias))
        if not 0 <= self.planted_bias <= 1:
            raise ValidationError(f"planted_bias must lie in [0, 1], got {self.planted_bias}")
        if not 0 < self.privacy_slack <= Fraction(1, 2):
            raise ValidationError(
                f"privacy_slack must lie in (0, 1/2], got {self.privacy_slack}"
            )


def generate(params: GenParams) -> Instance:
    """Draw an instance; raises when the answer space is too small to hold
    the requested number of distinct candidate types."""
    rng = random.Random(params.seed)
    n = rng.randint(*params.n_types)
    m = rng.randint(*params.n_questions)
    answer_counts = [rng.randint(*params.answers_per_question) for _ in range(m)]
    k = min(rng.randint(*params.question_limit), m)
    questions = [
        (f"q{j}", tuple(f"a{c}" for c in range(answer_counts[j]))) for j in range(m)
    ]

    # planted mode: fitness is a hidden 0/1 function of a few relevant
    # questions, so high-goodness trees exist and search skill matters
    relevant: tuple[int, ...] = ()
    table: dict[tuple[int, ...], Fraction] = {}
    if params.fitness_mode == "planted":
        relevant = tuple(sorted(rng.sample(range(m), min(params.relevant_questions, m))))
        combos = list(itertools.product(*(range(answer_counts[j]) for j in relevant)))
        bias = float(params.planted_bias)
        while True:
            values = [
                Fraction(1) if rng.random() < bias else Fraction(0) for _ in combos
            ]
            if len(combos) == 1 or len(set(values)) > 1:
                break
        table = dict(zip(combos, values))

    profiles: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    collisions = 0
    fitness: list[Fraction] = []
    for _ in range(n):
        while True:
            profile = tuple(rng.randrange(answer_counts[j]) for j in range(m))
            if profile not in seen:
                break
            collisions += 1
            if collisions > _MAX_COLLISIONS:
                raise ValidationError(
                    "could not draw distinct candidate types "
                    f"(gave up after {_MAX_COLLISIONS} collisions)"
                )
        seen.add(profile)
        profiles.append(profile)
        if params.fitness_mode == "binary":
            fitness.append(Fraction(rng.randint(0, 1)))
        elif params.fitness_mode == "planted":
            fitness.append(table[tuple(profile[j] for j in relevant)])
        else:
            fitness.append(Fraction(rng.randint(0, _FITNESS_GRAIN), _FITNESS_GRAIN))

    types = [
        CandidateType(
            {f"q{j}": f"a{profile[j]}" for j in range(m)}, fit, params.quantity_per_type
        )
        for profile, fit in zip(profiles, fitness)
    ]

    # private rules stay off the relevant questions: you cannot ask a
    # question one of whose answers is ratio-pinned (the matching child
    # would sit at ratio 1), so a rule there would wall off the signal
    all_pairs = [
        (j, c)
        for j in range(m)
        for c in range(answer_counts[j])
        if j not in relevant
    ]
    p_count = min(rng.randint(*params.private_count), len(all_pairs))
    rules = []
    slack = params.privacy_slack
    for j, c in rng.sample(all_pairs, p_count):
        matching = sum(1 for profile in profiles if profile[j] == c)
        base = Fraction(matching, n)  # constant per-type quantity cancels
        rules.append(
            PrivacyRule(
                f"q{j}",
                f"a{c}",
                max(Fraction(0), base - slack),
                min(Fraction(1), base + slack),
            )
        )
    return Instance(questions, types, rules, k)
