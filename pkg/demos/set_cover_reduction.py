"""Turn a set-cover question into an interview-design question.

Universe {1,2,3,4}, sets {1,2,4}, {1,3}, {2,3}, budget k = 2.  The
transformation builds one question per set, one heavy block of always-fit
null types, one unfit type per element, and a single private marker type
per set, then pins the private marker's share into a narrow band.  An
interview that meets the thresholds exists exactly when a cover of size k
does, so deciding the transformed instance answers the original question.

Run: python3 demos/set_cover_reduction.py
"""

from privask.exact import decide_cdpc
from privask.model import answer_ratio, fit_ratio, format_rational, restrict
from privask.reduction import (
    PRIVATE_QUESTION,
    ScInstance,
    sc_bruteforce,
    set_question_id,
    strategy_tree,
    transform_params,
    transform_sc,
)
from privask.verify import decide_cdpc_tree


def main():
    sc = ScInstance((1, 2, 3, 4), ((1, 2, 4), (1, 3), (2, 3)), k=2)
    print(f"universe {sc.universe}, sets {sc.sets}, k = {sc.k}\n")

    p = transform_params(sc)
    print("transform parameters:")
    for name in ("omega", "a", "b", "x", "y"):
        value = getattr(p, name)
        print(f"  {name} = {value if name == 'omega' else format_rational(value)}")

    inst = transform_sc(sc)
    root = inst.root_view()
    print(f"\ntransformed instance: {inst.n_types} types, "
          f"{inst.n_questions} questions, thresholds "
          f"x = {format_rational(inst.cdpc_thresholds[0])}, "
          f"y = {format_rational(inst.cdpc_thresholds[1])}")
    print(f"root private share {format_rational(answer_ratio(root, inst, PRIVATE_QUESTION, '1'))}, "
          f"root fit {format_rational(fit_ratio(root, inst))}\n")

    # walk the strategy tree for the cover {1,2,4}, {1,3} by hand
    cover = ((1, 2, 4), (1, 3))
    tree = strategy_tree(sc, cover)
    q1 = set_question_id(("1", "2", "4"))
    q2 = set_question_id(("1", "3"))

    print(f"strategy tree: ask {q1}, then {q2} on the 'no' branch")
    yes1 = restrict(root, inst, q1, "1")
    print(f"  answered 1 to {q1}: private share "
          f"{format_rational(answer_ratio(yes1, inst, PRIVATE_QUESTION, '1'))}")
    no1 = restrict(root, inst, q1, "0")
    yes2 = restrict(no1, inst, q2, "1")
    print(f"  then 1 to {q2}:   private share "
          f"{format_rational(answer_ratio(yes2, inst, PRIVATE_QUESTION, '1'))}")
    final = restrict(no1, inst, q2, "0")
    print(f"  answered 0, 0:    private share "
          f"{format_rational(answer_ratio(final, inst, PRIVATE_QUESTION, '1'))}, "
          f"fit {format_rational(fit_ratio(final, inst))}")

    print(f"\ntree accepted by the threshold check: {decide_cdpc_tree(tree, inst)}")

    found, witness = sc_bruteforce(sc)
    verdict = decide_cdpc(inst)
    print(f"brute-force cover exists: {found} (witness {witness})")
    print(f"search on the transformed instance: "
          f"{'positive' if verdict.positive else 'negative'}")

    # and a cover that cannot exist: same sets, k = 1
    small = ScInstance(sc.universe, sc.sets, k=1)
    print(f"\nwith k = 1: brute force {sc_bruteforce(small)[0]}, "
          f"search {'positive' if decide_cdpc(transform_sc(small)).positive else 'negative'}")


if __name__ == "__main__":
    main()
