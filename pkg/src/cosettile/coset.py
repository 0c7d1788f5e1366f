"""Cosets of Cartesian sublattices of Z^d and exact partition checks.

A Cartesian sublattice is ``n_1 Z x ... x n_d Z``; a coset of it is fixed by
the shape ``n`` and an offset ``m``.  Every coset is periodic with period
``n_i`` along axis ``i``, so a finite system of cosets is determined by its
behaviour on the fundamental box ``prod [0, L_i)`` with ``L_i = lcm_j n_{j,i}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CELL_BUDGET = 10**8


class DimensionError(ValueError):
    """Vectors of different length were combined."""


class InstanceTooLarge(ValueError):
    """The fundamental box (or an expansion) exceeds the configured budget."""

    def __init__(self, size: int, budget: int, what: str = "cells"):
        super().__init__(f"instance too large: {size} {what} exceeds budget of {budget}")
        self.size = size
        self.budget = budget


@dataclass(frozen=True)
class SubgroupShape:
    """The sublattice ``prod_i n_i Z``."""

    n: tuple[int, ...]

    def __post_init__(self):
        n = tuple(int(v) for v in self.n)
        if not n:
            raise ValueError("shape must have at least one axis")
        for i, v in enumerate(n):
            if v < 1:
                raise ValueError(f"n[{i}] = {v}: modulus must be positive")
        object.__setattr__(self, "n", n)

    @property
    def d(self) -> int:
        return len(self.n)

    @property
    def index(self) -> int:
        return math.prod(self.n)

    def __str__(self):
        return "(" + ",".join(map(str, self.n)) + ")"


@dataclass(frozen=True)
class Coset:
    """The set ``{z : z_i = m_i (mod n_i) for all i}``.

    Offsets may be arbitrary integers here; :func:`canonicalize` reduces them
    into ``[0, n_i)``.  Systems only accept canonical cosets.
    """

    shape: SubgroupShape
    m: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.shape, SubgroupShape):
            object.__setattr__(self, "shape", SubgroupShape(tuple(self.shape)))
        m = tuple(int(v) for v in self.m)
        if len(m) != self.shape.d:
            raise DimensionError(
                f"offset has {len(m)} entries but shape has {self.shape.d}"
            )
        object.__setattr__(self, "m", m)

    @classmethod
    def of(cls, n: Sequence[int] | int, m: Sequence[int] | int) -> "Coset":
        """Shorthand: ``Coset.of([4], [1])`` or ``Coset.of(4, 1)`` in 1D."""
        if isinstance(n, int):
            n = (n,)
        if isinstance(m, int):
            m = (m,)
        return cls(SubgroupShape(tuple(n)), tuple(m))

    @property
    def n(self) -> tuple[int, ...]:
        return self.shape.n

    @property
    def d(self) -> int:
        return self.shape.d

    @property
    def is_canonical(self) -> bool:
        return all(0 <= mi < ni for mi, ni in zip(self.m, self.n))

    def __str__(self):
        return f"{self.shape}+[{','.join(map(str, self.m))}]"


def canonicalize(coset: Coset) -> Coset:
    m = tuple(mi % ni for mi, ni in zip(coset.m, coset.n))
    if m == coset.m:
        return coset
    return Coset(coset.shape, m)


def _check_dim(a: int, b: int):
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} != {b}")


def contains(coset: Coset, z: Sequence[int]) -> bool:
    _check_dim(len(z), coset.d)
    return all((zi - mi) % ni == 0 for zi, mi, ni in zip(z, coset.m, coset.n))


def density(coset: Coset) -> Fraction:
    return Fraction(1, coset.shape.index)


def disjoint(c1: Coset, c2: Coset) -> bool:
    """Two cosets meet iff every axis congruence pair is solvable (CRT)."""
    _check_dim(c1.d, c2.d)
    for m1, n1, m2, n2 in zip(c1.m, c1.n, c2.m, c2.n):
        if (m1 - m2) % math.gcd(n1, n2) != 0:
            return True
    return False


@dataclass(frozen=True)
class CosetSystem:
    d: int
    cosets: tuple[Coset, ...]

    def __post_init__(self):
        cosets = tuple(self.cosets)
        if self.d < 1:
            raise ValueError(f"dimension must be positive, got {self.d}")
        if not cosets:
            raise ValueError("a coset system needs at least one coset")
        for j, c in enumerate(cosets):
            if c.d != self.d:
                raise DimensionError(f"coset {j} has dimension {c.d}, system has {self.d}")
            if not c.is_canonical:
                raise ValueError(f"coset {j} ({c}) is not canonical; canonicalize it first")
        object.__setattr__(self, "cosets", cosets)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple], canonical: bool = True) -> "CosetSystem":
        """Build from ``(n, m)`` pairs, canonicalizing offsets by default."""
        cosets = [Coset.of(n, m) for n, m in pairs]
        if canonical:
            cosets = [canonicalize(c) for c in cosets]
        if not cosets:
            raise ValueError("a coset system needs at least one coset")
        return cls(cosets[0].d, tuple(cosets))

    def __len__(self):
        return len(self.cosets)

    def __iter__(self):
        return iter(self.cosets)

    def __getitem__(self, j: int) -> Coset:
        return self.cosets[j]

    def shapes(self) -> list[SubgroupShape]:
        return [c.shape for c in self.cosets]

    def sorted(self) -> "CosetSystem":
        """Canonical order: by shape, then offset."""
        return CosetSystem(self.d, tuple(sorted(self.cosets, key=lambda c: (c.n, c.m))))


@dataclass(frozen=True)
class LcmBox:
    L: tuple[int, ...]

    @property
    def volume(self) -> int:
        return math.prod(self.L)

    def cells(self) -> Iterable[tuple[int, ...]]:
        """Cells of the box in lexicographic order."""
        return itertools.product(*(range(v) for v in self.L))


def lcm_box(system: CosetSystem) -> LcmBox:
    return LcmBox(tuple(math.lcm(*(c.n[i] for c in system)) for i in range(system.d)))


@dataclass(frozen=True)
class VerificationReport:
    is_disjoint: bool
    density_sum: Fraction
    is_partition: bool
    counterexample: tuple[int, ...] | None = None
    counterexample_count: int | None = None
    box: LcmBox | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        out = {
            "is_disjoint": self.is_disjoint,
            "density_sum": format_fraction(self.density_sum),
            "is_partition": self.is_partition,
            "counterexample": None,
        }
        if self.counterexample is not None:
            out["counterexample"] = {
                "cell": list(self.counterexample),
                "cover_count": self.counterexample_count,
            }
        if self.box is not None:
            out["box"] = list(self.box.L)
        return out


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _count_dtype(k: int):
    for dt in (np.uint8, np.uint16, np.uint32):
        if k <= np.iinfo(dt).max:
            return dt
    return np.uint64


def cover_counts(system: CosetSystem, budget: int = DEFAULT_CELL_BUDGET) -> np.ndarray:
    """Array over the fundamental box holding the number of cosets covering each cell."""
    box = lcm_box(system)
    if box.volume > budget:
        raise InstanceTooLarge(box.volume, budget)
    counts = np.zeros(box.L, dtype=_count_dtype(len(system)))
    for c in system:
        counts[tuple(slice(mi, None, ni) for mi, ni in zip(c.m, c.n))] += 1
    return counts


def pairwise_disjoint(system: CosetSystem) -> bool:
    cs = system.cosets
    return all(disjoint(cs[a], cs[b]) for a in range(len(cs)) for b in range(a + 1, len(cs)))


def verify_partition(system: CosetSystem, budget: int = DEFAULT_CELL_BUDGET) -> VerificationReport:
    """Check that the cosets tile Z^d exactly, by counting covers over one period.

    The counterexample, if any, is the first cell in lexicographic box order
    whose cover count differs from one.
    """
    box = lcm_box(system)
    counts = cover_counts(system, budget)
    bad = counts != 1
    is_partition = not bad.any()
    cell = count = None
    if not is_partition:
        flat = int(np.argmax(bad.ravel()))
        cell = tuple(int(v) for v in np.unravel_index(flat, box.L))
        count = int(counts[cell])
    return VerificationReport(
        is_disjoint=pairwise_disjoint(system),
        density_sum=sum((density(c) for c in system), Fraction(0)),
        is_partition=is_partition,
        counterexample=cell,
        counterexample_count=count,
        box=box,
    )
