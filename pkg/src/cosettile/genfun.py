"""Multivariate generating functions of coset systems and their poles.

The canonical coset ``(n, m)`` restricted to the nonnegative orthant has the
generating function ``G = prod_i x_i^{m_i} / (1 - x_i^{n_i})``.  A system's
sum is kept over the common denominator ``prod_i (1 - x_i^{L_i})``, where the
numerator is an honest polynomial.  All pole analysis works from that form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .coset import Coset, CosetSystem, InstanceTooLarge, SubgroupShape, lcm_box
from .cyclotomic import RootPoint, eval_at_point
from .multipoly import MultiPoly

DEFAULT_TERM_BUDGET = 10**6


class PoleEstimateError(ArithmeticError):
    """Numeric probing produced a non-finite value."""


@dataclass(frozen=True)
class GenTerm:
    coset: Coset

    @property
    def d(self) -> int:
        return self.coset.d

    def series_coefficient(self, z: Sequence[int]) -> int:
        """Coefficient of ``x^z`` in the power-series expansion (0 or 1)."""
        return int(all(zi >= mi and (zi - mi) % ni == 0 for zi, mi, ni in zip(z, self.coset.m, self.coset.n)))

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.complex128)
        m = np.array(self.coset.m)
        n = np.array(self.coset.n)
        return np.prod(xs**m / (1 - xs**n), axis=1)

    def __str__(self):
        names = ["x", "y", "z"] if self.d <= 3 else [f"x{i + 1}" for i in range(self.d)]
        num = "*".join(f"{v}^{k}" for v, k in zip(names, self.coset.m) if k) or "1"
        den = "*".join(f"(1-{v}^{k})" for v, k in zip(names, self.coset.n))
        return f"{num}/({den})"


def term_from_coset(c: Coset) -> GenTerm:
    if not c.is_canonical:
        raise ValueError(f"coset {c} is not canonical")
    return GenTerm(c)


@dataclass(frozen=True)
class RationalGF:
    """``numerator / prod_i (1 - x_i^{L_i})``."""

    numerator: MultiPoly
    denom_exponents: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.denom_exponents)

    def series_coefficient(self, z: Sequence[int]) -> Fraction | int:
        """Coefficient of ``x^z`` in the expansion about the origin.

        Each ``1/(1 - x_i^{L_i})`` contributes ``x_i^{k L_i}`` for all ``k >= 0``,
        so a numerator term ``x^e`` reaches ``z`` iff ``e <= z`` and ``L | z - e``.
        """
        total = 0
        for e, c in self.numerator.items():
            if all(ei <= zi and (zi - ei) % Li == 0 for ei, zi, Li in zip(e, z, self.denom_exponents)):
                total += c
        return total

    def denominator_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.complex128)
        return np.prod(1 - xs ** np.array(self.denom_exponents), axis=1)

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        return self.numerator.evaluate_many(xs) / self.denominator_many(xs)


def system_sum(system: CosetSystem, term_budget: int = DEFAULT_TERM_BUDGET) -> RationalGF:
    """Sum of the system's terms over the common denominator.

    Coset ``j`` contributes ``x^{m_j} prod_i (1 + x_i^{n_i} + ... + x_i^{L_i - n_i})``,
    since ``(1 - x^L)/(1 - x^n)`` is that geometric sum when ``n | L``.
    """
    L = lcm_box(system).L
    total = sum(math.prod(Li // ni for Li, ni in zip(L, c.n)) for c in system)
    if total > term_budget:
        raise InstanceTooLarge(total, term_budget, what="numerator terms")
    acc: dict[tuple[int, ...], int] = {}
    for c in system:
        axes = [range(mi, Li, ni) for mi, ni, Li in zip(c.m, c.n, L)]
        for e in itertools.product(*axes):
            acc[e] = acc.get(e, 0) + 1
    return RationalGF(MultiPoly(system.d, acc), L)


def full_lattice_numerator(L: Sequence[int]) -> MultiPoly:
    """``prod_i (1 + x_i + ... + x_i^{L_i - 1})``, the numerator of ``prod 1/(1-x_i)``."""
    d = len(L)
    out = MultiPoly.constant(d, 1)
    for i, Li in enumerate(L):
        out = out * MultiPoly.geometric(d, i, 1, Li)
    return out


def identity_check(system: CosetSystem, term_budget: int = DEFAULT_TERM_BUDGET) -> bool:
    """Whether the system's sum equals ``prod_i 1/(1 - x_i)`` identically."""
    S = system_sum(system, term_budget)
    if len(S.numerator) != math.prod(S.denom_exponents):
        return False
    return S.numerator == full_lattice_numerator(S.denom_exponents)


def principal_point(shape: SubgroupShape) -> RootPoint:
    return RootPoint(tuple(Fraction(1, ni) for ni in shape.n))


def _check_point(d: int, p: RootPoint):
    if p.d != d:
        raise ValueError(f"point has {p.d} coordinates, expected {d}")


def term_pole_order(term: GenTerm, p: RootPoint) -> int:
    """Number of axes with ``p_i^{n_i} = 1``; each such factor is a simple pole."""
    _check_point(term.d, p)
    return sum(ni % Ni == 0 for ni, Ni in zip(term.coset.n, p.denominators))


def denominator_order(S: RationalGF, p: RootPoint) -> int:
    _check_point(S.d, p)
    return sum(Li % Ni == 0 for Li, Ni in zip(S.denom_exponents, p.denominators))


def vanishing_order(P: MultiPoly, p: RootPoint) -> int:
    """Smallest total order of a mixed partial of ``P`` that is nonzero at ``p``.

    Values are decided exactly in Q(zeta_M).  Derivatives of order ``k`` are
    built from those of order ``k - 1`` so each is computed once.
    """
    if P.is_zero():
        raise ValueError("the zero polynomial vanishes to infinite order")
    _check_point(P.nvars, p)
    M = p.order
    layer = {(0,) * P.nvars: P}
    k = 0
    while True:
        for alpha in sorted(layer, reverse=True):
            if not eval_at_point(layer[alpha], p, M).is_zero():
                return k
        nxt = {}
        for alpha, Q in layer.items():
            for axis in range(P.nvars):
                beta = alpha[:axis] + (alpha[axis] + 1,) + alpha[axis + 1:]
                if beta not in nxt:
                    D = Q.derivative(axis)
                    if not D.is_zero():
                        nxt[beta] = D
        layer = nxt
        k += 1
        if not layer:  # unreachable for a nonzero polynomial
            raise ArithmeticError("ran out of derivatives")


def sum_pole_order_exact(S: RationalGF, p: RootPoint) -> int:
    """Pole order of ``S`` at ``p`` along a generic line.

    Denominator vanishing order minus numerator vanishing order, clamped at 0
    (an excess numerator zero is a removable singularity).
    """
    den = denominator_order(S, p)
    if den == 0:
        return 0
    return max(0, den - vanishing_order(S.numerator, p))


@dataclass(frozen=True)
class PoleProbeParams:
    t_max: float = 1e-2
    t_min: float = 1e-6
    samples_per_decade: int = 8
    directions: int = 5
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.t_min < self.t_max < 1:
            raise ValueError(f"need 0 < t_min < t_max < 1, got {self.t_min}, {self.t_max}")
        if self.samples_per_decade < 1 or self.directions < 1:
            raise ValueError("samples_per_decade and directions must be positive")

    def t_grid(self) -> np.ndarray:
        decades = math.log10(self.t_max / self.t_min)
        count = max(2, int(round(decades * self.samples_per_decade)) + 1)
        return np.geomspace(self.t_max, self.t_min, count)

    def line_directions(self, d: int) -> np.ndarray:
        """Seeded unit-norm complex direction vectors, one per row."""
        rng = np.random.default_rng(self.seed)
        v = rng.standard_normal((self.directions, d)) + 1j * rng.standard_normal((self.directions, d))
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    def to_dict(self) -> dict:
        return {
            "t_max": self.t_max,
            "t_min": self.t_min,
            "samples_per_decade": self.samples_per_decade,
            "directions": self.directions,
            "seed": self.seed,
        }


def line_points(p: RootPoint, direction: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Points ``p + t * direction`` for each real ``t``; shape ``(len(ts), d)``."""
    base = np.array(p.exact_complex(), dtype=np.complex128)
    return base[None, :] + ts[:, None] * np.asarray(direction)[None, :]


def _working_bits(S: RationalGF, t_min: float) -> int:
    # the numerator can vanish to order d at p, so |N| may be as small as t_min^d
    lost = S.d * math.ceil(math.log2(1 / t_min))
    return 96 + lost + len(S.numerator).bit_length() + max(S.denom_exponents).bit_length()


class _FixedPointLine:
    """Evaluates ``|S|`` on ``p + t v`` in binary fixed point with ``bits`` fractional bits.

    Near a cancelled pole the numerator is a sum of O(1) terms cancelling down
    to about ``t^k``; double precision cannot resolve that for ``k >= 3`` at
    ``t = 1e-6``.  The root-of-unity coordinates come from mpmath, everything
    after that is exact integer arithmetic up to the final magnitude.
    """

    def __init__(self, S: RationalGF, p: RootPoint, bits: int):
        self.S = S
        self.bits = bits
        self.items = S.numerator.items()
        with mpmath.workprec(bits + 32):
            self.base = [
                (self._fix_mp(mpmath.cospi(2 * mpmath.mpf(c.numerator) / c.denominator)),
                 self._fix_mp(mpmath.sinpi(2 * mpmath.mpf(c.numerator) / c.denominator)))
                for c in p.coords
            ]

    def _fix_mp(self, v) -> int:
        return int(mpmath.nint(mpmath.ldexp(v, self.bits)))

    def _fix_float(self, v: float) -> int:
        return int(math.ldexp(float(v), self.bits))  # exact: floats are dyadic

    def _mul(self, a, b):
        P = self.bits
        return ((a[0] * b[0] - a[1] * b[1]) >> P, (a[0] * b[1] + a[1] * b[0]) >> P)

    def _powers(self, x, top: int) -> list:
        out = [(1 << self.bits, 0)]
        for _ in range(top):
            out.append(self._mul(out[-1], x))
        return out

    def abs_value(self, direction: np.ndarray, t: float) -> float:
        P = self.bits
        tf = self._fix_float(t)
        xs = []
        for (br, bi), v in zip(self.base, direction):
            vr, vi = self._fix_float(v.real), self._fix_float(v.imag)
            xs.append((br + ((tf * vr) >> P), bi + ((tf * vi) >> P)))
        tables = [self._powers(x, L) for x, L in zip(xs, self.S.denom_exponents)]
        d = self.S.d
        # contract the last axis with integer coefficients, then fold prefixes
        acc: dict[tuple, list] = {}
        last = tables[-1]
        for e, c in self.items:
            tr, ti = last[e[-1]]
            slot = acc.setdefault(e[:-1], [0, 0])
            slot[0] += c * tr
            slot[1] += c * ti
        for axis in range(d - 2, -1, -1):
            nxt: dict[tuple, list] = {}
            table = tables[axis]
            for prefix, val in acc.items():
                r, i = self._mul(table[prefix[-1]], val)
                slot = nxt.setdefault(prefix[:-1], [0, 0])
                slot[0] += r
                slot[1] += i
            acc = nxt
        nr, ni = acc.get((), (0, 0))
        dr, di = 1 << P, 0
        for table, L in zip(tables, self.S.denom_exponents):
            xr, xi = table[L]
            dr, di = self._mul((dr, di), ((1 << P) - xr, -xi))
        num = math.hypot(_to_float(nr, P), _to_float(ni, P))
        den = math.hypot(_to_float(dr, P), _to_float(di, P))
        if den == 0:
            raise PoleEstimateError("line passes through a zero of the denominator")
        return num / den


def _to_float(v: int, bits: int) -> float:
    try:
        return math.ldexp(float(v), -bits)
    except OverflowError:
        raise PoleEstimateError("overflow while probing the line") from None


def _fit_growth(ts: np.ndarray, mags: np.ndarray) -> float:
    if not np.all(np.isfinite(mags)) or np.any(mags == 0):
        raise PoleEstimateError("non-finite or zero value while probing the line")
    slope, _ = np.polyfit(np.log(1 / ts), np.log(mags), 1)
    return float(slope)


def abs_along_line(S: RationalGF, p: RootPoint, direction: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """``|S(p + t v)|`` for each ``t``, evaluated in extended fixed point."""
    line = _FixedPointLine(S, p, _working_bits(S, float(np.min(ts))))
    return np.array([line.abs_value(np.asarray(direction), float(t)) for t in ts])


def numeric_pole_order(
    system: CosetSystem | RationalGF,
    p: RootPoint,
    params: PoleProbeParams | None = None,
) -> float:
    """Estimate the growth exponent of ``|S|`` approaching ``p`` along random real lines.

    ``S`` is evaluated as numerator over common denominator; summing the
    individual terms near their poles would cancel catastrophically.  Returns
    the median least-squares slope of ``log|S|`` against ``log(1/t)``.
    """
    params = params or PoleProbeParams()
    S = system if isinstance(system, RationalGF) else system_sum(system)
    _check_point(S.d, p)
    ts = params.t_grid()
    line = _FixedPointLine(S, p, _working_bits(S, params.t_min))
    slopes = []
    for v in params.line_directions(S.d):
        mags = np.array([line.abs_value(v, float(t)) for t in ts])
        slopes.append(_fit_growth(ts, mags))
    return float(np.median(slopes))


@dataclass(frozen=True)
class PoleReport:
    point: RootPoint
    exact_order: int
    numeric_estimate: float | None = None
    per_term_orders: tuple[tuple[int, int], ...] = ()
    denominator_order: int = 0
    numerator_order: int | None = None
    params: PoleProbeParams | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        out = {
            "point": [f"{c.numerator}/{c.denominator}" for c in self.point.coords],
            "exact_order": self.exact_order,
            "denominator_order": self.denominator_order,
            "numerator_vanishing_order": self.numerator_order,
            "per_term_orders": [list(t) for t in self.per_term_orders],
        }
        if self.numeric_estimate is not None:
            out["numeric_estimate"] = round(self.numeric_estimate, 6)
            out["probe"] = self.params.to_dict()
        return out


def pole_report(
    system: CosetSystem,
    p: RootPoint,
    numeric: bool = False,
    params: PoleProbeParams | None = None,
) -> PoleReport:
    S = system_sum(system)
    den = denominator_order(S, p)
    num = vanishing_order(S.numerator, p) if den else None
    est = None
    if numeric:
        params = params or PoleProbeParams()
        est = numeric_pole_order(S, p, params)
    return PoleReport(
        point=p,
        exact_order=max(0, den - num) if den else 0,
        numeric_estimate=est,
        per_term_orders=tuple((j, term_pole_order(term_from_coset(c), p)) for j, c in enumerate(system)),
        denominator_order=den,
        numerator_order=num,
        params=params if numeric else None,
    )
