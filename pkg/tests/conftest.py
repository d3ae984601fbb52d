import random
from fractions import Fraction

import pytest

from privask.datasets import hiring_instance
from privask.gen import GenParams, generate

# acceptance tests append their one-line verdicts here; printed after the
# run so they survive output capture
criterion_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in criterion_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def hiring():
    return hiring_instance()


def small_params(seed, **overrides):
    """Instance sizes the exact solver handles in well under a second."""
    base = dict(
        n_types=(10, 20),
        n_questions=(5, 7),
        answers_per_question=(2, 3),
        private_count=(1, 2),
        question_limit=(2, 3),
        quantity_per_type=10,
        fitness_mode="binary",
        privacy_slack=Fraction(1, 4),
        seed=seed,
    )
    base.update(overrides)
    return GenParams(**base)


def small_instance(seed, **overrides):
    return generate(small_params(seed, **overrides))


def random_feasible_tree(instance, seed):
    """Random-tree helper with a private RNG so callers stay independent."""
    from privask.ga import random_tree

    return random_tree(instance, instance.question_limit, random.Random(seed))
