"""The repeated-shape guarantee for exact tilings by Cartesian cosets.

In any tiling of Z^d by at least two cosets of Cartesian sublattices, the
coset of largest index shares its shape with another tile.  :func:`witness`
finds that partner the way the pole argument does: take the principal
root-of-unity point of the largest-index term, collect the terms that also
blow up to full order there, and use maximality to force equal shapes.
:func:`theorem_check` reaches the same verdict by a direct count of shapes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .coset import DEFAULT_CELL_BUDGET, CosetSystem, SubgroupShape, verify_partition
from .genfun import principal_point, term_from_coset, term_pole_order


class WitnessPreconditionError(ValueError):
    """The system is not a nontrivial exact partition."""


class TheoremViolation(RuntimeError):
    """No coset cancels the top pole.  Would be a counterexample; never expected."""

    def __init__(self, system: CosetSystem, j_star: int):
        cosets = ", ".join(str(c) for c in system)
        super().__init__(
            f"THEOREM VIOLATED: no coset cancels the pole of coset {j_star} "
            f"in the exact partition [{cosets}]"
        )
        self.system = system
        self.j_star = j_star


@dataclass(frozen=True)
class Witness:
    j_star: int
    j_partner: int
    shared_shape: SubgroupShape

    def to_dict(self, system: CosetSystem) -> dict:
        return {
            "j_star": self.j_star,
            "j_partner": self.j_partner,
            "shared_shape": list(self.shared_shape.n),
            "index": self.shared_shape.index,
            "offsets": {
                "j_star": list(system[self.j_star].m),
                "j_partner": list(system[self.j_partner].m),
            },
            # the partner is the j_star coset shifted by this vector
            "translation": [b - a for a, b in zip(system[self.j_star].m, system[self.j_partner].m)],
        }


def max_index_coset(system: CosetSystem) -> int:
    """Position of the coset with the largest index ``prod n_i``.

    Ties go to the smaller shape vector, then the smaller offset, then the
    earlier position.
    """
    return min(
        range(len(system)),
        key=lambda j: (-system[j].shape.index, system[j].n, system[j].m, j),
    )


def cancelers(system: CosetSystem, j: int) -> set[int]:
    """Cosets ``j' != j`` whose term has a full-order pole at the principal point of ``j``.

    Decided by divisibility; :func:`full_order_at_principal` checks the same set
    through the pole orders themselves.
    """
    if not 0 <= j < len(system):
        raise IndexError(f"coset index {j} out of range for {len(system)} cosets")
    nj = system[j].n
    return {
        k
        for k, c in enumerate(system)
        if k != j and all(c.n[i] % nj[i] == 0 for i in range(system.d))
    }


def full_order_at_principal(system: CosetSystem, j: int) -> set[int]:
    p = principal_point(system[j].shape)
    return {
        k
        for k, c in enumerate(system)
        if k != j and term_pole_order(term_from_coset(c), p) == system.d
    }


def witness(system: CosetSystem, budget: int = DEFAULT_CELL_BUDGET) -> Witness:
    if len(system) < 2:
        raise WitnessPreconditionError("trivial system: a single coset has nothing to pair with")
    report = verify_partition(system, budget)
    if not report.is_partition:
        raise WitnessPreconditionError(
            f"not an exact partition (cell {list(report.counterexample)} "
            f"covered {report.counterexample_count} times)"
        )
    j_star = max_index_coset(system)
    partners = sorted(cancelers(system, j_star))
    if not partners:
        raise TheoremViolation(system, j_star)
    shape = system[j_star].shape
    for k in partners:
        # divisibility plus maximal index leaves only equality
        if system[k].shape != shape:
            raise AssertionError(
                f"canceler {k} has shape {system[k].shape}, expected {shape}"
            )
    return Witness(j_star, partners[0], shape)


def theorem_check(system: CosetSystem, budget: int = DEFAULT_CELL_BUDGET) -> bool:
    """True unless ``system`` is a nontrivial exact partition whose top shapes do not repeat.

    Non-partitions and single-coset systems pass vacuously.
    """
    if len(system) < 2 or not verify_partition(system, budget).is_partition:
        return True
    counts = Counter(system.shapes())
    top = max(s.index for s in counts)
    return all(k >= 2 for s, k in counts.items() if s.index == top)


def is_vacuous(system: CosetSystem, budget: int = DEFAULT_CELL_BUDGET) -> bool:
    return len(system) < 2 or not verify_partition(system, budget).is_partition

