"""Small bundled datasets used by demos, docs and the trivial reduction case."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .model import Ask, CandidateType, Instance, LEAF, PrivacyRule

# nationality / programming / experience / education / fit / quantity
_HIRING_ROWS = [
    ("local", "High", "Yes", "Master's", 1, 100),
    ("local", "Low", "Yes", "Master's", 0, 100),
    ("local", "Low", "No", "Master's", 1, 100),
    ("local", "Low", "No", "Bachelor's", 0, 100),
    ("local", "Low", "No", "None", 0, 50),
    ("foreign", "High", "Yes", "Bachelor's", 1, 100),
    ("foreign", "Low", "Yes", "Bachelor's", 0, 100),
    ("foreign", "High", "No", "Master's", 1, 100),
    ("foreign", "High", "No", "Bachelor's", 0, 100),
    ("foreign", "High", "No", "None", 0, 50),
]


def hiring_instance(
    *, question_limit: Optional[int] = None, cdpc: bool = False, with_rule: bool = True
) -> Instance:
    """A 900-candidate hiring survey where nationality is private.

    Ten candidate types over four questions; the privacy rule keeps the share
    of locals in every reachable population between 2/5 and 3/5.  There is a
    feasible depth-2 interview that classifies every candidate exactly, so with
    thresholds (0, 1) this doubles as a trivially positive decision instance.
    """
    questions = [
        ("Nationality", ("local", "foreign")),
        ("Programming", ("High", "Low")),
        ("Experience", ("Yes", "No")),
        ("Education", ("Master's", "Bachelor's", "None")),
    ]
    types = [
        CandidateType(
            {
                "Nationality": nat,
                "Programming": prog,
                "Experience": exp,
                "Education": edu,
            },
            Fraction(fit),
            qty,
        )
        for nat, prog, exp, edu, fit, qty in _HIRING_ROWS
    ]
    rules = (
        [PrivacyRule("Nationality", "local", Fraction(2, 5), Fraction(3, 5))]
        if with_rule
        else []
    )
    if question_limit is None:
        question_limit = 4 if cdpc else 2
    thresholds = (Fraction(0), Fraction(1)) if cdpc else None
    return Instance(questions, types, rules, question_limit, thresholds)


def hiring_solution_tree() -> Ask:
    """The known optimal interview for `hiring_instance`: every leaf is pure."""
    return Ask(
        "Experience",
        {
            "Yes": Ask("Programming", {"High": LEAF, "Low": LEAF}),
            "No": Ask("Education", {"Master's": LEAF, "Bachelor's": LEAF, "None": LEAF}),
        },
    )
