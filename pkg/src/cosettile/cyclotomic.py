"""Exact arithmetic in cyclotomic fields Q(zeta_M).

Elements are polynomials in ``zeta_M`` of degree below ``phi(M)``, reduced
modulo the cyclotomic polynomial ``Phi_M``.  This is enough to evaluate
integer polynomials at roots of unity and decide exactly whether the value is
zero.  Inverses are deliberately not provided.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .multipoly import MultiPoly

MAX_CONDUCTOR = 10**4


class ConductorError(ValueError):
    pass


def _check_conductor(M: int):
    if M < 1:
        raise ConductorError(f"conductor must be positive, got {M}")
    if M > MAX_CONDUCTOR:
        raise ConductorError(f"conductor {M} exceeds bound {MAX_CONDUCTOR}")


def _divisors(M: int) -> list[int]:
    small = [e for e in range(1, math.isqrt(M) + 1) if M % e == 0]
    return sorted(set(small + [M // e for e in small]))


def _poly_divmod_monic(num: list, den: Sequence[int]) -> tuple[list, list]:
    """Long division by a monic polynomial; coefficient lists are low degree first."""
    num = list(num)
    dd = len(den) - 1
    if len(num) <= dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quot[k - dd] = c
            for t in range(dd + 1):
                num[k - dd + t] -= c * den[t]
    return quot, num[:dd]


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int) -> tuple[int, ...]:
    """Coefficients of ``Phi_M`` (low degree first).

    Obtained by dividing ``x^M - 1`` by ``Phi_e`` for every proper divisor ``e``.
    """
    _check_conductor(M)
    num = [-1] + [0] * (M - 1) + [1]
    for e in _divisors(M)[:-1]:
        q, r = _poly_divmod_monic(num, cyclotomic_poly(e))
        if any(r):
            raise ArithmeticError(f"Phi_{e} does not divide x^{M}-1 remainder")  # unreachable
        num = q
    return tuple(num)


def euler_phi(M: int) -> int:
    return len(cyclotomic_poly(M)) - 1


@lru_cache(maxsize=256)
def _reduce_table(M: int) -> tuple[tuple[int, ...], ...]:
    """Row ``k`` holds ``zeta_M^k`` reduced mod ``Phi_M``, for ``0 <= k < M``."""
    phi = cyclotomic_poly(M)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg else []
    for _ in range(M):
        rows.append(tuple(cur))
        # multiply by zeta and reduce the overflow coefficient
        top = cur[-1] if deg else 0
        nxt = [0] + cur[:-1] if deg else []
        if top:
            nxt = [a - top * b for a, b in zip(nxt, phi[:-1])]
        cur = nxt
    return tuple(rows)


def reduce_mod_cyclotomic(coeffs: Sequence, M: int) -> tuple:
    """Reduce a polynomial in ``zeta_M`` (any degree) to canonical form."""
    deg = euler_phi(M)
    folded = [0] * M
    for k, c in enumerate(coeffs):
        if c:
            folded[k % M] += c
    _, rem = _poly_divmod_monic(folded, cyclotomic_poly(M))
    rem = list(rem) + [0] * (deg - len(rem))
    return tuple(Fraction(c) for c in rem[:deg])


@dataclass(frozen=True)
class CycloNumber:
    """An element of Q(zeta_M) as reduced rational coefficients of powers of zeta_M."""

    M: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        _check_conductor(self.M)
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != euler_phi(self.M):
            coeffs = reduce_mod_cyclotomic(coeffs, self.M)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, M: int) -> "CycloNumber":
        return cls(M, (0,) * euler_phi(M))

    @classmethod
    def one(cls, M: int) -> "CycloNumber":
        return cls.from_rational(1, M)

    @classmethod
    def from_rational(cls, q, M: int) -> "CycloNumber":
        return cls(M, (q,) + (0,) * (euler_phi(M) - 1))

    @classmethod
    def zeta_power(cls, k: int, M: int) -> "CycloNumber":
        _check_conductor(M)
        return cls(M, _reduce_table(M)[k % M])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _same(self, other: "CycloNumber"):
        if not isinstance(other, CycloNumber):
            raise TypeError(f"expected CycloNumber, got {type(other).__name__}")
        if other.M != self.M:
            raise ConductorError(f"conductor mismatch: {self.M} != {other.M}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.from_rational(other, self.M)
        self._same(other)
        return CycloNumber(self.M, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.M, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.M, tuple(a * other for a in self.coeffs))
        self._same(other)
        prod = [Fraction(0)] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycloNumber(self.M, reduce_mod_cyclotomic(prod, self.M))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("inverses are not supported")
        out = CycloNumber.one(self.M)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def lift(self, M2: int) -> "CycloNumber":
        """The same number viewed in Q(zeta_M2); requires ``M | M2``."""
        if M2 % self.M:
            raise ConductorError(f"{self.M} does not divide {M2}")
        step = M2 // self.M
        spread = [Fraction(0)] * (step * len(self.coeffs))
        for k, c in enumerate(self.coeffs):
            spread[k * step] = c
        return CycloNumber(M2, reduce_mod_cyclotomic(spread, M2))

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.M)
        return sum((float(c) * z**k for k, c in enumerate(self.coeffs)), 0j)

    def __str__(self):
        terms = [
            (f"{c}" if k == 0 else f"{c}*z^{k}") for k, c in enumerate(self.coeffs) if c
        ]
        return (" + ".join(terms) or "0") + f" in Q(zeta_{self.M})"


def add(a: CycloNumber, b: CycloNumber) -> CycloNumber:
    return a + b


def mul(a: CycloNumber, b: CycloNumber) -> CycloNumber:
    return a * b


def eq(a: CycloNumber, b: CycloNumber) -> bool:
    a._same(b)
    return a.coeffs == b.coeffs


@dataclass(frozen=True)
class RootPoint:
    """A point of (C*)^d with root-of-unity coordinates ``exp(2 pi i k_i / N_i)``.

    Coordinates are stored as reduced fractions of a full turn in ``[0, 1)``;
    the value 1 is ``Fraction(0)`` i.e. ``0/1``.
    """

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) % 1 for c in self.coords)
        if not coords:
            raise ValueError("root point needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def parse(cls, text: str) -> "RootPoint":
        """Parse ``"k1/N1,k2/N2,..."``; a bare integer ``k`` means ``k/1``."""
        out = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                raise ValueError(f"empty coordinate in point {text!r}")
            k, _, N = part.partition("/")
            try:
                k, N = int(k), int(N or 1)
            except ValueError:
                raise ValueError(f"coordinate {part!r} is not of the form k/N") from None
            if N < 1:
                raise ValueError(f"coordinate {part!r}: denominator must be positive")
            out.append(Fraction(k, N))
        return cls(tuple(out))

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def denominators(self) -> tuple[int, ...]:
        return tuple(c.denominator for c in self.coords)

    @property
    def order(self) -> int:
        return math.lcm(*self.denominators)

    def to_complex(self) -> tuple[complex, ...]:
        return tuple(cmath.exp(2j * math.pi * float(c)) for c in self.coords)

    def exact_complex(self):
        """Coordinates as floats using exact quadrant values where available."""
        return tuple(_root_value(c) for c in self.coords)

    def __str__(self):
        return ",".join(f"{c.numerator}/{c.denominator}" for c in self.coords)


def _root_value(c: Fraction) -> complex:
    # exact for the four axis points, which keeps 1, -1, i, -i free of rounding
    quarter = {Fraction(0): 1, Fraction(1, 4): 1j, Fraction(1, 2): -1, Fraction(3, 4): -1j}
    if c in quarter:
        return complex(quarter[c])
    return cmath.exp(2j * math.pi * float(c))


def embed_root(k: int, N: int, M: int) -> CycloNumber:
    """``exp(2 pi i k / N)`` as the element ``zeta_M^(k M / N)``."""
    if N < 1 or M % N:
        raise ConductorError(f"{N} does not divide conductor {M}")
    if not 0 <= k < N:
        raise ValueError(f"need 0 <= k < N, got k={k}, N={N}")
    return CycloNumber.zeta_power(k * (M // N), M)


def eval_at_point(P: MultiPoly, p: RootPoint, M: int | None = None) -> CycloNumber:
    """Exact value of ``P`` at the root point ``p``.

    Works in Q(zeta_M) with ``M = order(p)`` unless a multiple is given.  Each
    monomial collapses to a single power of zeta_M, so the polynomial is first
    folded into ``Z[x]/(x^M - 1)`` and then reduced once.
    """
    if P.nvars != p.d:
        raise ValueError(f"polynomial has {P.nvars} variables, point has {p.d} coordinates")
    if M is None:
        M = p.order
    elif M % p.order:
        raise ConductorError(f"order {p.order} of the point does not divide {M}")
    _check_conductor(M)
    steps = [int(c * M) for c in p.coords]  # zeta_M exponent of each coordinate
    folded = [0] * M
    for e, c in P.items():
        folded[sum(a * s for a, s in zip(e, steps)) % M] += c
    return CycloNumber(M, reduce_mod_cyclotomic(folded, M))
