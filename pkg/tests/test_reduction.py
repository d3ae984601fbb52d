import itertools
from fractions import Fraction

import pytest

from privask.exact import decide_cdpc
from privask.model import (
    LEAF,
    Ask,
    ValidationError,
    answer_ratio,
    fit_ratio,
    parse_instance,
    restrict,
    serialize_instance,
)
from privask.reduction import (
    PRIVATE_QUESTION,
    ScInstance,
    cdpc_to_gcopc,
    parse_sc,
    sc_bruteforce,
    sc_from_dict,
    serialize_sc,
    set_question_id,
    shared_bound_rules,
    strategy_tree,
    transform_params,
    transform_sc,
)
from privask.verify import decide_cdpc_tree, goodness, verify_gcopc

# the running four-element example: U = {1,2,3,4}, two-set covers exist
EX = ScInstance((1, 2, 3, 4), ((1, 2, 4), (1, 3), (2, 3)), 2)


class TestScInstance:
    def test_normalization_dedupes(self):
        s = ScInstance((1, 1, 2), ((2, 1), (1,), (1, 2), ()), 1)
        # elements normalize to strings; members reorder by universe position;
        # the duplicate of {1,2} and the empty set are dropped
        assert s.universe == ("1", "2")
        assert s.sets == (("1", "2"), ("1",))
        assert s.k == 1

    def test_k_capped_at_set_count(self):
        s = ScInstance((1,), ((1,),), 99)
        assert s.k == 1

    def test_union_must_cover(self):
        with pytest.raises(ValidationError):
            ScInstance((1, 2), ((1,),), 1)

    def test_roundtrip(self):
        assert parse_sc(serialize_sc(EX)) == EX

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ValidationError):
            sc_from_dict({"universe": [1], "sets": [[1]], "k": 1, "x": 2})


class TestWorkedExample:
    """Four elements, three sets, k = 2."""

    def test_params(self):
        p = transform_params(EX)
        assert p.omega == 24
        assert p.a == Fraction(1, 673)
        assert p.b == Fraction(1)
        assert p.x == Fraction(0)
        assert p.y == Fraction(576, 579)

    def test_transformed_shape(self):
        inst = transform_sc(EX)
        # one type per element, one per set, one null block
        assert inst.n_types == 4 + 3 + 1
        assert inst.question_limit == inst.n_questions
        assert inst.cdpc_thresholds == (Fraction(0), Fraction(576, 579))
        assert len(inst.privacy_rules) == 1
        rule = inst.privacy_rules[0]
        assert rule.question == PRIVATE_QUESTION
        assert (rule.low, rule.high) == (Fraction(1, 673), Fraction(1))

    def test_root_ratios(self):
        inst = transform_sc(EX)
        root = inst.root_view()
        assert answer_ratio(root, inst, PRIVATE_QUESTION, "1") == Fraction(1, 225)
        assert fit_ratio(root, inst) == Fraction(64, 75)

    def test_strategy_tree_walk(self):
        inst = transform_sc(EX)
        cover = ((1, 2, 4), (1, 3))
        tree = strategy_tree(EX, cover)
        root = inst.root_view()

        q1 = set_question_id(("1", "2", "4"))
        yes1 = restrict(root, inst, q1, "1")
        assert answer_ratio(yes1, inst, PRIVATE_QUESTION, "1") == Fraction(1, 73)

        no1 = restrict(root, inst, q1, "0")
        assert answer_ratio(no1, inst, PRIVATE_QUESTION, "1") == Fraction(1, 301)

        q2 = set_question_id(("1", "3"))
        yes2 = restrict(no1, inst, q2, "1")
        assert answer_ratio(yes2, inst, PRIVATE_QUESTION, "1") == Fraction(1, 25)

        final = restrict(no1, inst, q2, "0")
        assert answer_ratio(final, inst, PRIVATE_QUESTION, "1") == Fraction(1, 577)
        assert fit_ratio(final, inst) == Fraction(576, 577)

        assert decide_cdpc_tree(tree, inst)

    def test_oracle_agrees(self):
        found, witness = sc_bruteforce(EX)
        assert found
        assert decide_cdpc(transform_sc(EX)).positive
        assert decide_cdpc_tree(strategy_tree(EX, witness), transform_sc(EX))


class TestStrategyTree:
    def test_rejects_foreign_sets(self):
        with pytest.raises(ValidationError):
            strategy_tree(EX, ((9, 9),))

    def test_rejects_oversized_cover(self):
        with pytest.raises(ValidationError):
            strategy_tree(EX, EX.sets)

    def test_rejects_non_cover(self):
        with pytest.raises(ValidationError):
            strategy_tree(EX, ((1, 3),))

    def test_chain_shape(self):
        tree = strategy_tree(EX, ((1, 2, 4), (1, 3)))
        assert isinstance(tree, Ask)
        assert tree.question == set_question_id(("1", "2", "4"))
        assert tree.branches["1"] == LEAF
        inner = tree.branches["0"]
        assert inner.question == set_question_id(("1", "3"))


class TestBruteforce:
    def test_negative_instance(self):
        s = ScInstance((1, 2), ((1,), (2,)), 1)
        found, witness = sc_bruteforce(s)
        assert not found and witness is None

    def test_minimal_cover_found_first(self):
        found, witness = sc_bruteforce(EX)
        assert found
        assert len(witness) <= 2

    def test_size_guard(self):
        big = ScInstance(tuple(range(26)), tuple((i,) for i in range(26)), 3)
        with pytest.raises(ValidationError):
            sc_bruteforce(big)


def test_private_question_infeasible_to_ask():
    """Splitting on the private question always breaks its own rule."""
    inst = transform_sc(EX)
    tree = Ask(PRIVATE_QUESTION, {"1": LEAF, "0": LEAF})
    report = verify_gcopc(tree, cdpc_to_gcopc(inst))
    assert not report.feasible


def test_trivial_full_cover_instance():
    s = ScInstance((1, 2), ((1,), (2,)), 2)  # k equals the number of sets
    inst = transform_sc(s)
    assert inst.meta == {"trivial": True}
    assert decide_cdpc(inst).positive
    tree = strategy_tree(s, s.sets)
    assert decide_cdpc_tree(tree, inst)


def test_transform_size_linear():
    # distinct membership profiles keep element types unmerged
    for n in (2, 3, 5):
        universe = tuple(range(1, n + 1))
        sets = tuple((i,) for i in universe)
        s = ScInstance(universe, sets, 1)
        inst = transform_sc(s)
        assert inst.n_types == 2 * n + 1


def test_cdpc_to_gcopc_moves_thresholds():
    inst = transform_sc(EX)
    g = cdpc_to_gcopc(inst)
    assert g.cdpc_thresholds is None
    assert g.meta["cdpc_x"] == "0/1"
    assert g.question_limit == g.n_questions
    parse_instance(serialize_instance(g))


def test_shared_bound_rules():
    rules = shared_bound_rules(["p", "q"], Fraction(1, 4), Fraction(3, 4))
    assert [(r.question, r.answer) for r in rules] == [("p", "1"), ("q", "1")]
    assert all(r.low == Fraction(1, 4) and r.high == Fraction(3, 4) for r in rules)
