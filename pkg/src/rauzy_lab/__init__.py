"""Exact Rauzy induction for interval exchange transformations.

Lengths are kept exact (rationals or elements of a real quadratic field),
so every comparison the induction makes is decided without rounding.
"""

from .exact import ContextError, NotUnimodular, QuadraticNumber, sqrt
from .iet import (
    IET,
    DomainError,
    InductionStep,
    InductionTrace,
    ReducibleError,
    StepCapExceeded,
    StepKind,
    TieError,
    drive,
    elementary_matrix,
    first_positive_window,
    group_products,
    make_iet,
    permutation_step,
    step,
    step_left,
    step_right,
)
from .induced import (
    NaturalDecomposition,
    NotAdmissible,
    ReturnOverflow,
    induced_iet,
    is_admissible,
    natural_decomposition,
    return_time,
    visitation_from_decomposition,
)
from .instances import golden, self_similar_iet, silver
from .permutations import (
    Permutation,
    b_vector,
    irreducible_permutations,
    is_irreducible,
    l_matrix,
    permutation_from_l,
    sigma_partition,
    tau_dual,
)
from .recovery import (
    InvalidProduct,
    RealizationPath,
    peel_decompose,
    realize_interval,
    recover_strict,
    recover_weak,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
