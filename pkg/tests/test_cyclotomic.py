import cmath
import math
import random
from fractions import Fraction

import pytest

from cosettile.cyclotomic import (
    ConductorError,
    CycloNumber,
    RootPoint,
    add,
    cyclotomic_poly,
    embed_root,
    eq,
    euler_phi,
    eval_at_point,
    mul,
)
from cosettile.multipoly import MultiPoly
from oracles import complex_eval


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@pytest.mark.parametrize(
    "M, expected",
    [(1, (-1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1))],
)
def test_cyclotomic_examples(M, expected):
    assert cyclotomic_poly(M) == expected


def test_cyclotomic_matches_numeric_product_over_primitive_roots():
    for M in range(1, 61):
        # build prod (x - r) low-degree-first
        coeffs = [1 + 0j]
        for k in range(1, M + 1):
            if math.gcd(k, M) == 1:
                r = cmath.exp(2j * math.pi * k / M)
                coeffs = [(coeffs[i - 1] if i else 0) - r * (coeffs[i] if i < len(coeffs) else 0)
                          for i in range(len(coeffs) + 1)]
        rounded = tuple(round(c.real) for c in coeffs)
        assert max(abs(c - r) for c, r in zip(coeffs, rounded)) < 0.25
        assert cyclotomic_poly(M) == rounded, M


def test_product_over_divisors_is_x_m_minus_one():
    for M in range(1, 201):
        prod = [1]
        for e in range(1, M + 1):
            if M % e == 0:
                prod = _poly_mul(prod, list(cyclotomic_poly(e)))
        assert prod == [-1] + [0] * (M - 1) + [1], M


def test_euler_phi():
    assert [euler_phi(M) for M in (1, 2, 6, 12, 97)] == [1, 1, 2, 4, 96]


def test_conductor_bound():
    with pytest.raises(ConductorError):
        cyclotomic_poly(10**4 + 1)


def test_embed_root_examples():
    assert embed_root(0, 1, 4) == CycloNumber.one(4)
    assert embed_root(1, 2, 4) == CycloNumber.from_rational(-1, 4)
    assert embed_root(1, 4, 4) == CycloNumber(4, (0, 1))


def test_embed_root_requires_divisibility():
    with pytest.raises(ConductorError):
        embed_root(1, 3, 4)


def test_ring_operations():
    z4 = embed_root(1, 4, 4)
    assert mul(z4, z4) == CycloNumber.from_rational(-1, 4)
    assert add(z4, CycloNumber.zero(4)) == z4
    # zeta_6^3: x^2 = x - 1, so x^3 = x^2 - x = -1
    assert eq(CycloNumber.zeta_power(3, 6), CycloNumber.from_rational(-1, 6))
    with pytest.raises(ConductorError):
        z4 + CycloNumber.one(6)


def test_no_inverses():
    with pytest.raises(ValueError):
        embed_root(1, 4, 4) ** -1


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 30])
def test_root_powers(N):
    M = 60 if 60 % N == 0 else N * 4
    for k in range(N):
        r = embed_root(k, N, M)
        assert r**N == CycloNumber.one(M)
    prime = all(N % p for p in range(2, N)) and N > 1
    if prime:
        r = embed_root(1, N, M)
        for t in range(1, N):
            assert r**t != CycloNumber.one(M)


def test_lift_preserves_value():
    a = CycloNumber(6, (Fraction(1, 3), 2))
    b = a.lift(12)
    assert b.M == 12
    assert abs(a.to_complex() - b.to_complex()) < 1e-12


def test_eval_examples():
    P = MultiPoly(1, {(0,): 1, (1,): 1, (2,): 1, (3,): 1})
    assert eval_at_point(P, RootPoint.parse("1/4")).is_zero()
    assert eval_at_point(MultiPoly(1, {(2,): 1}), RootPoint.parse("1/4")) == CycloNumber.from_rational(-1, 4)
    v = eval_at_point(MultiPoly(2, {(1, 1): 1}), RootPoint.parse("1/2,1/3"))
    assert v == CycloNumber.zeta_power(5, 6)
    # zeta_6^5 = -zeta_6^2 = 1 - zeta_6
    assert v.coeffs == (1, -1)


def test_root_point_parsing_and_order():
    p = RootPoint.parse("2/4, 0/1, 3/6")
    assert p.coords == (Fraction(1, 2), Fraction(0), Fraction(1, 2))
    assert p.order == 2
    assert str(RootPoint.parse("5/4")) == "1/4"
    with pytest.raises(ValueError):
        RootPoint.parse("1/0")
    with pytest.raises(ValueError):
        RootPoint.parse("a/b")


def _random_pair(rng):
    d = rng.randint(1, 3)
    denoms = [rng.choice([1, 2, 3, 4, 5, 6, 10, 12]) for _ in range(d)]
    while math.lcm(*denoms) > 60:
        denoms = [rng.choice([1, 2, 3, 4, 6]) for _ in range(d)]
    angles = [Fraction(rng.randrange(N), N) for N in denoms]
    terms = {}
    for _ in range(rng.randint(1, 8)):
        e = tuple(rng.randint(0, 9) for _ in range(d))
        terms[e] = rng.randint(-1000, 1000)
    return MultiPoly(d, terms), RootPoint(tuple(angles))


def test_eval_matches_complex_arithmetic():
    rng = random.Random(2024)
    for _ in range(200):
        P, p = _random_pair(rng)
        exact = eval_at_point(P, p).to_complex()
        direct = complex_eval(dict(P.items()), p.coords)
        assert abs(exact - direct) < 1e-9


def test_eval_is_a_ring_homomorphism():
    rng = random.Random(99)
    for _ in range(60):
        P, p = _random_pair(rng)
        Q = MultiPoly(P.nvars, {tuple(rng.randint(0, 5) for _ in range(P.nvars)): rng.randint(-9, 9) for _ in range(4)})
        assert eval_at_point(P * Q, p) == eval_at_point(P, p) * eval_at_point(Q, p)
        assert eval_at_point(P + Q, p) == eval_at_point(P, p) + eval_at_point(Q, p)
