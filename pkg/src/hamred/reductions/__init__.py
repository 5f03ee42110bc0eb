from .engine import (
    DomainError,
    LinearReduction,
    PlanError,
    ReductionTerm,
    apply_reduction,
    eval_reduction,
    identity_reduction,
    merge_terms,
    oracle_backend,
    parse_reduction,
    reduction_grid,
    serialize_reduction,
    shift_inputs,
    source_grid,
    term,
)
from .catalog import (
    eliminate_stars_ham,
    expand_eq_to_ham,
    reduce_dom_to_ham,
    reduce_dom_to_l1,
    reduce_dom_to_thr,
    reduce_ham_to_dom,
    reduce_ham_to_l1,
    reduce_l1_to_dom,
    reduce_l1_to_min,
    reduce_min_to_l1,
    reduce_thr_to_dom,
    reduce_weighted_eq_to_ham,
)
