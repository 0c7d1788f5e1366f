"""Tilings of Z^d by cosets of Cartesian sublattices.

Exact partition checks, generating-function identities, pole orders at
roots of unity, the repeated-shape witness, and exhaustive search.
"""

__version__ = "0.1.0"

from .coset import (
    Coset,
    CosetSystem,
    DimensionError,
    InstanceTooLarge,
    LcmBox,
    SubgroupShape,
    VerificationReport,
    canonicalize,
    contains,
    density,
    disjoint,
    lcm_box,
    verify_partition,
)
from .cyclotomic import CycloNumber, RootPoint, cyclotomic_poly, embed_root, eval_at_point
from .genfun import (
    GenTerm,
    PoleProbeParams,
    PoleReport,
    RationalGF,
    identity_check,
    numeric_pole_order,
    pole_report,
    principal_point,
    sum_pole_order_exact,
    system_sum,
    term_from_coset,
    term_pole_order,
)
from .mirsky import TheoremViolation, Witness, cancelers, max_index_coset, theorem_check, witness
from .multipoly import MultiPoly
from .search import SearchResult, SearchSpec, enumerate_candidates, random_split_cover, search_exact_covers
