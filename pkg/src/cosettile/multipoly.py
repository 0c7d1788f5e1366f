"""Sparse multivariate polynomials with exact (int or Fraction) coefficients."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

import numpy as np

Coeff = Union[int, Fraction]
Exponent = tuple[int, ...]


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables.

    Stored as ``{exponent tuple: coefficient}`` with zero coefficients dropped.
    Iteration is in sorted (lexicographic) exponent order.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Coeff] | Iterable[tuple[Exponent, Coeff]] = ()):
        self.nvars = nvars
        acc: dict[Exponent, Coeff] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(int(v) for v in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            if any(v < 0 for v in e):
                raise ValueError(f"negative exponent {e}")
            acc[e] = acc.get(e, 0) + c
        self._terms = {e: _normalize(c) for e, c in acc.items() if c != 0}

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MultiPoly":
        # trusted constructor: terms already validated and zero-free
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        return p

    @classmethod
    def constant(cls, nvars: int, c: Coeff) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exponent: Exponent, c: Coeff = 1) -> "MultiPoly":
        return cls(len(exponent), {tuple(exponent): c})

    @classmethod
    def geometric(cls, nvars: int, axis: int, step: int, count: int) -> "MultiPoly":
        """``1 + x_axis^step + ... + x_axis^((count-1)*step)``."""
        terms = {}
        for r in range(count):
            e = [0] * nvars
            e[axis] = r * step
            terms[tuple(e)] = 1
        return cls._raw(nvars, terms)

    # mapping-like access
    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms))

    def items(self) -> list[tuple[Exponent, Coeff]]:
        return sorted(self._terms.items())

    def coeff(self, e: Exponent) -> Coeff:
        return self._terms.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {dict(self.items())!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        names = _var_names(self.nvars)
        parts = []
        for e, c in self.items():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} != {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = _normalize(v)
            else:
                terms.pop(e, None)
        return MultiPoly._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Exponent, Coeff] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.nvars, {e: _normalize(c) for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self, axis: int, times: int = 1) -> "MultiPoly":
        """Partial derivative of order ``times`` with respect to ``x_axis``."""
        if times == 0:
            return self
        terms = {}
        for e, c in self._terms.items():
            k = e[axis]
            if k < times:
                continue
            f = math.perm(k, times)
            ne = e[:axis] + (k - times,) + e[axis + 1:]
            terms[ne] = c * f
        return MultiPoly._raw(self.nvars, terms)

    def partial(self, orders: Exponent) -> "MultiPoly":
        """Mixed partial derivative with ``orders[i]`` derivatives along axis ``i``."""
        p = self
        for axis, k in enumerate(orders):
            if k:
                p = p.derivative(axis, k)
        return p

    # numeric evaluation
    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Exponents as an ``(terms, nvars)`` int array and coefficients as floats."""
        items = self.items()
        exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), self.nvars)
        coeffs = np.array([float(c) for _, c in items], dtype=np.float64)
        return exps, coeffs

    def evaluate(self, x) -> complex:
        """Floating-point value at a single point (complex allowed)."""
        return complex(self.evaluate_many(np.asarray([x], dtype=complex))[0])

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate at each row of ``xs`` (shape ``(k, nvars)``), complex128 result."""
        xs = np.asarray(xs, dtype=np.complex128)
        exps, coeffs = self.as_arrays()
        if not len(coeffs):
            return np.zeros(len(xs), dtype=np.complex128)
        vals = np.ones((len(xs), len(coeffs)), dtype=np.complex128)
        for i in range(self.nvars):
            vals *= _power_table(xs[:, i], exps[:, i])
        return vals @ coeffs


def _power_table(x: np.ndarray, e: np.ndarray) -> np.ndarray:
    """``x[k] ** e[t]`` for every k, t, by repeated multiplication (no log/exp)."""
    top = int(e.max()) if len(e) else 0
    table = np.empty((len(x), top + 1), dtype=np.complex128)
    table[:, 0] = 1
    for k in range(1, top + 1):
        table[:, k] = table[:, k - 1] * x
    return table[:, e]


def _normalize(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def _var_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]
