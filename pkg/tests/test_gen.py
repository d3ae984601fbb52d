from fractions import Fraction

import pytest

from privask.gen import GenParams, generate
from privask.model import ValidationError, parse_instance, privacy_ok, serialize_instance

from conftest import small_params


class TestParams:
    def test_range_validation(self):
        with pytest.raises(ValidationError):
            GenParams(n_types=(5, 3))
        with pytest.raises(ValidationError):
            GenParams(answers_per_question=(1, 4))
        with pytest.raises(ValidationError):
            GenParams(quantity_per_type=0)

    def test_fitness_mode_checked(self):
        with pytest.raises(ValidationError):
            GenParams(fitness_mode="gaussian")

    def test_slack_bounds(self):
        with pytest.raises(ValidationError):
            GenParams(privacy_slack=Fraction(0))
        with pytest.raises(ValidationError):
            GenParams(privacy_slack=Fraction(2, 3))

    def test_planted_knob_bounds(self):
        with pytest.raises(ValidationError):
            GenParams(relevant_questions=0)
        with pytest.raises(ValidationError):
            GenParams(planted_bias=Fraction(5, 4))


def test_deterministic_per_seed():
    p = small_params(17)
    assert serialize_instance(generate(p)) == serialize_instance(generate(p))


def test_different_seeds_differ():
    a = serialize_instance(generate(small_params(1)))
    b = serialize_instance(generate(small_params(2)))
    assert a != b


def test_dimensions_within_ranges():
    p = GenParams(
        n_types=(30, 50),
        n_questions=(6, 9),
        answers_per_question=(2, 4),
        private_count=(1, 3),
        question_limit=(2, 4),
        quantity_per_type=7,
        fitness_mode="binary",
        seed=5,
    )
    inst = generate(p)
    assert 30 <= inst.n_types <= 50
    assert 6 <= inst.n_questions <= 9
    assert 1 <= len(inst.privacy_rules) <= 3
    assert 2 <= inst.question_limit <= 4
    for _, answers in inst.questions:
        assert 2 <= len(answers) <= 4
    assert all(t.quantity == 7 for t in inst.candidate_types)


def test_root_always_feasible():
    for seed in range(20):
        inst = generate(small_params(seed))
        ok, violations = privacy_ok(inst.root_view(), inst)
        assert ok, violations


def test_roundtrips_through_json():
    inst = generate(small_params(23))
    assert parse_instance(serialize_instance(inst)) == inst


def test_binary_mode_fitness_values():
    inst = generate(small_params(3, fitness_mode="binary"))
    assert {t.fitness for t in inst.candidate_types} <= {Fraction(0), Fraction(1)}


def test_uniform_mode_fitness_grain():
    inst = generate(small_params(3, fitness_mode="uniform"))
    assert all((t.fitness * 1000).denominator == 1 for t in inst.candidate_types)


def test_planted_mode_binary_and_mixed():
    inst = generate(small_params(3, fitness_mode="planted", n_types=(18, 20)))
    values = {t.fitness for t in inst.candidate_types}
    assert values == {Fraction(0), Fraction(1)}


def test_planted_fitness_follows_answers():
    """Types sharing answers on every question share fitness by construction;
    planted mode further ties fitness to a fixed subset of questions, so a
    second generation with the same seed reproduces the same assignment."""
    p = small_params(9, fitness_mode="planted")
    a, b = generate(p), generate(p)
    assert [t.fitness for t in a.candidate_types] == [t.fitness for t in b.candidate_types]


def test_impossible_distinctness_raises():
    # 2 binary questions give 4 profiles; 40 distinct types cannot exist
    p = small_params(0, n_types=(40, 40), n_questions=(2, 2), answers_per_question=(2, 2))
    with pytest.raises(ValidationError, match="collision"):
        generate(p)
