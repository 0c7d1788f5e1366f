"""Exhaustive search for tilings of Z^d by Cartesian cosets with bounded moduli.

With every modulus at most ``B``, all candidate cosets are periodic on the box
``prod [0, lcm(1..B))``, so tilings of Z^d are exactly the exact covers of
that box by candidate cosets.  Those are found with Knuth's algorithm X
(dict-of-sets formulation).
"""

from __future__ import annotations

import itertools
import math
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coset import DEFAULT_CELL_BUDGET, Coset, CosetSystem, InstanceTooLarge, SubgroupShape


class SearchTimeout(Exception):
    pass


@dataclass(frozen=True)
class SearchSpec:
    d: int
    max_n: int
    distinct_shapes_only: bool = False
    max_cosets: int | None = None
    exclude_trivial: bool = False
    column_order: str = "mrv"  # "mrv" (fewest candidates first) or "naive" (first cell)
    cell_budget: int = DEFAULT_CELL_BUDGET
    timeout: float | None = None

    def __post_init__(self):
        if self.d < 1 or self.max_n < 1:
            raise ValueError(f"need d >= 1 and max_n >= 1, got d={self.d}, max_n={self.max_n}")
        if self.max_cosets is not None and self.max_cosets < 1:
            raise ValueError("max_cosets must be positive")
        if self.column_order not in ("mrv", "naive"):
            raise ValueError(f"unknown column order {self.column_order!r}")

    @property
    def period(self) -> int:
        return math.lcm(*range(1, self.max_n + 1))

    @property
    def box(self) -> tuple[int, ...]:
        return (self.period,) * self.d

    @property
    def volume(self) -> int:
        return self.period**self.d


@dataclass
class SearchStats:
    nodes: int = 0
    solutions: int = 0
    wall_time: float = 0.0


@dataclass
class SearchResult:
    spec: SearchSpec
    solutions: list[CosetSystem]
    stats: SearchStats
    complete: bool = True

    def to_dict(self, timing: bool = False) -> dict:
        stats = {"nodes": self.stats.nodes, "solutions": self.stats.solutions}
        if timing:
            stats["wall_time"] = round(self.stats.wall_time, 6)
        return {
            "spec": {
                "d": self.spec.d,
                "max_n": self.spec.max_n,
                "distinct_shapes_only": self.spec.distinct_shapes_only,
                "exclude_trivial": self.spec.exclude_trivial,
                "max_cosets": self.spec.max_cosets,
                "box": list(self.spec.box),
            },
            "complete": self.complete,
            "stats": stats,
            "solutions": [
                [{"n": list(c.n), "m": list(c.m)} for c in sol] for sol in self.solutions
            ],
        }


def enumerate_candidates(spec: SearchSpec) -> list[Coset]:
    """Every canonical coset with all moduli in ``[1, max_n]``, sorted by shape then offset."""
    if spec.volume > spec.cell_budget:
        raise InstanceTooLarge(spec.volume, spec.cell_budget)
    out = []
    for n in itertools.product(range(1, spec.max_n + 1), repeat=spec.d):
        shape = SubgroupShape(n)
        for m in itertools.product(*(range(v) for v in n)):
            out.append(Coset(shape, m))
    return out


def coset_cells(c: Coset, box: tuple[int, ...]) -> np.ndarray:
    """Flat (row-major) indices of the box cells lying in ``c``."""
    axes = [np.arange(mi, Li, ni) for mi, ni, Li in zip(c.m, c.n, box)]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.ravel_multi_index([g.ravel() for g in grids], box)


class _ExactCover:
    """Algorithm X state for one search; rows are candidate indices, columns are cells."""

    def __init__(self, spec: SearchSpec, candidates: list[Coset]):
        self.spec = spec
        self.candidates = candidates
        rows = [
            j for j, c in enumerate(candidates)
            if not (spec.exclude_trivial and c.shape.index == 1)
        ]
        self.Y = {j: coset_cells(candidates[j], spec.box).tolist() for j in rows}
        self.X: dict[int, set[int]] = {cell: set() for cell in range(spec.volume)}
        for j, cells in self.Y.items():
            for cell in cells:
                self.X[cell].add(j)
        self.shape_of = {j: candidates[j].shape for j in rows}
        self.size_of = {j: len(cells) for j, cells in self.Y.items()}
        # largest coset per shape, for the distinct-shapes capacity bound
        self.shape_size: dict[SubgroupShape, int] = {}
        for j in rows:
            self.shape_size[self.shape_of[j]] = self.size_of[j]
        self.max_size = max(self.size_of.values(), default=0)
        self.stats = SearchStats()
        self.found: list[tuple[int, ...]] = []
        self.deadline = None
        self.remaining = spec.volume
        self.used_shapes: Counter[SubgroupShape] = Counter()
        self.spare_capacity = sum(self.shape_size.values())

    def select(self, r: int) -> list[set[int]]:
        cols = []
        for j in self.Y[r]:
            for i in self.X[j]:
                for k in self.Y[i]:
                    if k != j:
                        self.X[k].remove(i)
            cols.append(self.X.pop(j))
        self.remaining -= self.size_of[r]
        shape = self.shape_of[r]
        if not self.used_shapes[shape]:
            self.spare_capacity -= self.shape_size[shape]
        self.used_shapes[shape] += 1
        return cols

    def deselect(self, r: int, cols: list[set[int]]):
        shape = self.shape_of[r]
        self.used_shapes[shape] -= 1
        if not self.used_shapes[shape]:
            self.spare_capacity += self.shape_size[shape]
        self.remaining += self.size_of[r]
        for j in reversed(self.Y[r]):
            self.X[j] = cols.pop()
            for i in self.X[j]:
                for k in self.Y[i]:
                    if k != j:
                        self.X[k].add(i)

    def choose_column(self) -> int:
        if self.spec.column_order == "naive":
            return min(self.X)
        return min(self.X, key=lambda c: (len(self.X[c]), c))

    def pruned(self, depth: int) -> bool:
        spec = self.spec
        if spec.max_cosets is not None:
            left = spec.max_cosets - depth
            if left <= 0 or self.remaining > left * self.max_size:
                return True
        if spec.distinct_shapes_only and self.remaining > self.spare_capacity:
            return True
        return False

    def branch_rows(self, col: int) -> list[int]:
        rows = sorted(self.X[col])
        if self.spec.distinct_shapes_only:
            rows = [r for r in rows if not self.used_shapes[self.shape_of[r]]]
        return rows

    def run(self, partial: list[int]):
        self.stats.nodes += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout
        if not self.X:
            self.found.append(tuple(sorted(partial)))
            return
        if self.pruned(len(partial)):
            return
        col = self.choose_column()
        for r in self.branch_rows(col):
            partial.append(r)
            cols = self.select(r)
            self.run(partial)
            self.deselect(r, cols)
            partial.pop()


def _run_subtree(spec: SearchSpec, first_row: int | None, deadline: float | None):
    """Run the search below ``first_row`` (or the whole tree); picklable for worker processes."""
    ec = _ExactCover(spec, enumerate_candidates(spec))
    ec.deadline = deadline
    complete = True
    try:
        if first_row is None:
            ec.run([])
        else:
            cols = ec.select(first_row)
            ec.run([first_row])
            ec.deselect(first_row, cols)
    except SearchTimeout:
        complete = False
    return ec.found, ec.stats.nodes, complete


def search_exact_covers(spec: SearchSpec, workers: int = 1) -> SearchResult:
    """All tilings allowed by ``spec``, each as a sorted system, in canonical order.

    With ``workers > 1`` the branches below the root are farmed out to
    processes; solutions and node counts are identical to a serial run.
    """
    start = time.monotonic()
    deadline = None if spec.timeout is None else start + spec.timeout
    candidates = enumerate_candidates(spec)
    if workers <= 1:
        found, nodes, complete = _run_subtree(spec, None, deadline)
    else:
        root = _ExactCover(spec, candidates)
        nodes, found, complete = 1, [], True
        if not root.pruned(0):
            rows = root.branch_rows(root.choose_column())
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(_run_subtree, spec, r, deadline) for r in rows]
                for fut in futures:
                    f, k, ok = fut.result()
                    found.extend(f)
                    nodes += k
                    complete = complete and ok
    unique = sorted(set(found), key=lambda sol: [(candidates[j].n, candidates[j].m) for j in sol])
    solutions = [CosetSystem(spec.d, tuple(candidates[j] for j in sol)) for sol in unique]
    stats = SearchStats(nodes=nodes, solutions=len(solutions), wall_time=time.monotonic() - start)
    return SearchResult(spec, solutions, stats, complete)


def random_split_cover(d: int, steps: int, max_factor: int = 3, seed: int = 0) -> CosetSystem:
    """A random tiling grown from the full lattice by repeated coset splitting.

    Each step replaces a coset ``(n, m)`` by the ``q`` cosets obtained by
    multiplying ``n_i`` by ``q`` and shifting ``m_i`` by ``r n_i`` for
    ``r = 0..q-1``; the pieces tile the original, so every output is exact.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if max_factor < 2:
        raise ValueError("max_factor must be at least 2")
    rng = random.Random(seed)
    cosets = [Coset(SubgroupShape((1,) * d), (0,) * d)]
    for _ in range(steps):
        j = rng.randrange(len(cosets))
        axis = rng.randrange(d)
        q = rng.randint(2, max_factor)
        c = cosets[j]
        n = list(c.n)
        step = n[axis]
        n[axis] *= q
        pieces = []
        for r in range(q):
            m = list(c.m)
            m[axis] += r * step
            pieces.append(Coset(SubgroupShape(tuple(n)), tuple(m)))
        cosets[j:j + 1] = pieces
    return CosetSystem(d, tuple(cosets))
