import random

import pytest

from cosettile.coset import CosetSystem, SubgroupShape
from cosettile.mirsky import (
    TheoremViolation,
    Witness,
    WitnessPreconditionError,
    cancelers,
    full_order_at_principal,
    is_vacuous,
    max_index_coset,
    theorem_check,
    witness,
)
from generators import perturb, random_subset_system, split_cover


def test_max_index_examples(running_example):
    assert max_index_coset(running_example) == 1
    assert max_index_coset(CosetSystem.from_pairs([((2, 1), (0, 0)), ((1, 2), (0, 0))])) == 1
    assert max_index_coset(CosetSystem.from_pairs([(1, 0)])) == 0


def test_max_index_tie_breaks_by_offset_then_position():
    system = CosetSystem.from_pairs([(4, 3), (2, 0), (4, 1)])
    assert max_index_coset(system) == 2
    system = CosetSystem.from_pairs([(4, 1), (4, 1)])
    assert max_index_coset(system) == 0


def test_cancelers_examples(running_example):
    assert cancelers(running_example, 1) == {2}
    assert cancelers(CosetSystem.from_pairs([(2, 0), (2, 1)]), 0) == {1}
    assert cancelers(CosetSystem.from_pairs([((2, 3), (0, 0)), ((6, 3), (1, 0))]), 1) == set()


def test_cancelers_index_error(running_example):
    with pytest.raises(IndexError):
        cancelers(running_example, 3)


def test_cancelers_agree_with_pole_orders():
    rng = random.Random(4)
    for _ in range(200):
        system = random_subset_system(rng, rng.randint(1, 3), hi=6, k=rng.randint(2, 6))
        for j in range(len(system)):
            assert cancelers(system, j) == full_order_at_principal(system, j)


def test_witness_examples(running_example):
    w = witness(running_example)
    assert w == Witness(1, 2, SubgroupShape((4,)))
    assert running_example[w.j_star].m == (1,) and running_example[w.j_partner].m == (3,)

    two_d = CosetSystem.from_pairs([((2, 1), (0, 0)), ((2, 1), (1, 0))])
    w = witness(two_d)
    assert {w.j_star, w.j_partner} == {0, 1} and w.shared_shape == SubgroupShape((2, 1))

    w = witness(CosetSystem.from_pairs([(2, 0), (2, 1)]))
    assert w.shared_shape == SubgroupShape((2,))


def test_witness_preconditions():
    with pytest.raises(WitnessPreconditionError, match="trivial"):
        witness(CosetSystem.from_pairs([(1, 0)]))
    with pytest.raises(WitnessPreconditionError, match="not an exact partition"):
        witness(CosetSystem.from_pairs([(2, 0), (3, 1)]))


def test_theorem_violation_is_loud(monkeypatch):
    import cosettile.mirsky as mirsky

    monkeypatch.setattr(mirsky, "cancelers", lambda system, j: set())
    with pytest.raises(TheoremViolation, match="THEOREM VIOLATED") as info:
        mirsky.witness(CosetSystem.from_pairs([(2, 0), (2, 1)]))
    assert info.value.system == CosetSystem.from_pairs([(2, 0), (2, 1)])


def test_theorem_check_examples(running_example):
    assert theorem_check(running_example)
    assert theorem_check(CosetSystem.from_pairs([(2, 0), (3, 1)]))
    assert is_vacuous(CosetSystem.from_pairs([(2, 0), (3, 1)]))
    assert theorem_check(CosetSystem.from_pairs([(1, 0)]))
    assert is_vacuous(CosetSystem.from_pairs([(1, 0)]))


def test_random_splits_satisfy_both_routes():
    rng = random.Random(31)
    for _ in range(300):
        system = split_cover(rng, steps=rng.randint(1, 8))
        w = witness(system)
        assert w.shared_shape == system[max_index_coset(system)].shape
        assert theorem_check(system) and not is_vacuous(system)
        # every canceler of the top coset has exactly its shape
        for k in cancelers(system, w.j_star):
            assert system[k].shape == w.shared_shape
            assert system[k].shape.index == system[w.j_star].shape.index


def test_witness_iff_theorem_check_on_non_vacuous():
    rng = random.Random(8)
    for k in range(300):
        base = split_cover(rng)
        system = base if k % 2 else perturb(base, rng)
        if is_vacuous(system):
            continue
        try:
            witness(system)
            ok = True
        except TheoremViolation:
            ok = False
        assert ok == theorem_check(system)


def test_cancelers_invariant_under_permutation():
    rng = random.Random(2)
    for _ in range(100):
        system = random_subset_system(rng, rng.randint(1, 3), hi=5, k=rng.randint(2, 6))
        perm = list(range(len(system)))
        rng.shuffle(perm)
        shuffled = CosetSystem(system.d, tuple(system[p] for p in perm))
        for new_j, old_j in enumerate(perm):
            mapped = {perm[k] for k in cancelers(shuffled, new_j)}
            assert mapped == cancelers(system, old_j)
