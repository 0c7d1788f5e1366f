import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosettile.coset import (
    Coset,
    CosetSystem,
    DimensionError,
    InstanceTooLarge,
    SubgroupShape,
    canonicalize,
    contains,
    density,
    disjoint,
    lcm_box,
    verify_partition,
)
from generators import cosets, perturb, random_subset_system, split_cover
from oracles import cover_count_table, intersect_bruteforce, is_partition_bruteforce


@pytest.mark.parametrize(
    "n, m, expected",
    [([4], [7], [3]), ([2, 3], [-1, 3], [1, 0]), ([2], [0], [0])],
)
def test_canonicalize_examples(n, m, expected):
    assert canonicalize(Coset.of(n, m)) == Coset.of(n, expected)


def test_canonicalize_dimension_mismatch():
    with pytest.raises(DimensionError):
        Coset.of([2, 3], [1])


def test_shape_rejects_nonpositive():
    with pytest.raises(ValueError, match="positive"):
        SubgroupShape((2, 0))


def test_index_is_exact_for_huge_moduli():
    shape = SubgroupShape((10**12, 10**12, 10**12))
    assert shape.index == 10**36


@pytest.mark.parametrize(
    "n, m, z, expected",
    [([2], [0], [6], True), ([4], [1], [3], False), ([2, 3], [1, 2], [5, -1], True)],
)
def test_contains_examples(n, m, z, expected):
    assert contains(Coset.of(n, m), z) is expected


def test_contains_dimension_mismatch():
    with pytest.raises(DimensionError):
        contains(Coset.of([2], [0]), [1, 1])


@pytest.mark.parametrize(
    "n, expected",
    [([2], Fraction(1, 2)), ([2, 3], Fraction(1, 6)), ([1, 1], Fraction(1))],
)
def test_density_examples(n, expected):
    assert density(Coset.of(n, [0] * len(n))) == expected


def test_disjoint_examples():
    assert disjoint(Coset.of(2, 0), Coset.of(4, 1))
    assert not disjoint(Coset.of(2, 0), Coset.of(4, 2))
    c = Coset.of([3, 5], [1, 4])
    assert not disjoint(c, c)


@pytest.mark.parametrize(
    "pairs, L",
    [
        ([(2, 0), (4, 1), (4, 3)], (4,)),
        ([((2, 3), (0, 0)), ((4, 1), (0, 0))], (4, 3)),
        ([(1, 0)], (1,)),
    ],
)
def test_lcm_box_examples(pairs, L):
    assert lcm_box(CosetSystem.from_pairs(pairs)).L == L


def test_verify_running_example(running_example):
    rep = verify_partition(running_example)
    assert rep.is_partition and rep.is_disjoint
    assert rep.density_sum == 1
    assert rep.counterexample is None


def test_verify_density_one_but_overlapping():
    rep = verify_partition(CosetSystem.from_pairs([(2, 0), (4, 1), (8, 3), (8, 5)]))
    assert not rep.is_partition
    assert rep.density_sum == 1
    assert rep.counterexample == (5,)
    assert rep.counterexample_count == 2
    # 7 is the uncovered cell, listed after 5 in box order
    assert cover_count_table([((2,), (0,)), ((4,), (1,)), ((8,), (3,)), ((8,), (5,))])[(7,)] == 0


def test_verify_trivial_and_2d():
    assert verify_partition(CosetSystem.from_pairs([(1, 0)])).is_partition
    assert verify_partition(CosetSystem.from_pairs([((2, 1), (0, 0)), ((2, 1), (1, 0))])).is_partition


def test_verify_reports_uncovered_cell():
    rep = verify_partition(CosetSystem.from_pairs([(3, 0), (3, 1)]))
    assert rep.counterexample == (2,) and rep.counterexample_count == 0


def test_verify_budget_is_enforced():
    system = CosetSystem.from_pairs([((1000, 1000), (0, 0))])
    with pytest.raises(InstanceTooLarge, match="instance too large"):
        verify_partition(system, budget=10**5)


def test_system_requires_canonical_offsets():
    with pytest.raises(ValueError, match="canonical"):
        CosetSystem(1, (Coset.of(4, 5),))


@settings(max_examples=200, deadline=None)
@given(cosets(), st.lists(st.integers(-50, 50), min_size=3, max_size=3))
def test_canonicalize_idempotent_and_membership_preserving(c, z):
    z = z[: c.d]
    cc = canonicalize(c)
    assert cc.is_canonical
    assert canonicalize(cc) == cc
    assert contains(c, z) == contains(cc, z)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_disjoint_matches_exhaustive_intersection(data):
    d = data.draw(st.integers(1, 3))
    c1 = canonicalize(data.draw(cosets(d, hi=12)))
    c2 = canonicalize(data.draw(cosets(d, hi=12)))
    assert disjoint(c1, c2) == (not intersect_bruteforce(c1.n, c1.m, c2.n, c2.m))


def _random_systems(count, seed):
    rng = random.Random(seed)
    for k in range(count):
        kind = k % 3
        if kind == 0:
            yield split_cover(rng)
        elif kind == 1:
            yield perturb(split_cover(rng), rng)
        else:
            yield random_subset_system(rng, rng.randint(1, 3))


@pytest.mark.parametrize("seed", range(3))
def test_verify_matches_bruteforce(seed):
    for system in _random_systems(60, seed):
        pairs = [(c.n, c.m) for c in system]
        assert verify_partition(system).is_partition == is_partition_bruteforce(pairs)


def test_partition_iff_disjoint_and_density_one():
    for system in _random_systems(600, 7):
        rep = verify_partition(system)
        if rep.is_partition:
            assert rep.is_disjoint and rep.density_sum == 1
        assert rep.is_partition == (rep.is_disjoint and rep.density_sum == 1)
        assert (rep.counterexample is None) == rep.is_partition


def test_permutation_only_changes_nothing():
    rng = random.Random(3)
    for system in _random_systems(100, 11):
        cs = list(system.cosets)
        rng.shuffle(cs)
        a = verify_partition(system)
        b = verify_partition(CosetSystem(system.d, tuple(cs)))
        assert a == b
