"""Feasibility checks for cloning, deleting and compressing non-orthogonal states."""

from ._qperm import (
    GramMismatch,
    InfeasibleError,
    OrthogonalPairError,
    QpermError,
    cloning_feasible,
    construct_cloner,
    counterexample,
    ensembles_equivalent,
    entropy_from_invariants,
    generation_feasible,
    gram,
    invariants_from_states,
    is_valid_deleter,
    make_swap_deleter,
    recover_deleted,
    schumacher,
    shannon_entropy,
    teleport,
    triple_determinant,
    two_state_entropy,
    von_neumann_entropy,
    xi_scan,
)

__all__ = [
    "GramMismatch",
    "InfeasibleError",
    "OrthogonalPairError",
    "QpermError",
    "cloning_feasible",
    "construct_cloner",
    "counterexample",
    "ensembles_equivalent",
    "entropy_from_invariants",
    "generation_feasible",
    "gram",
    "invariants_from_states",
    "is_valid_deleter",
    "make_swap_deleter",
    "recover_deleted",
    "schumacher",
    "shannon_entropy",
    "teleport",
    "triple_determinant",
    "two_state_entropy",
    "von_neumann_entropy",
    "xi_scan",
]
