"""Build fully-lowered plans: any catalog score down to {ham, eq, mult} targets.

The planner is range-driven: each stage declares the half-open integer range
its identity needs, and composition propagates filter ranges by interval
arithmetic, inserting input shifts wherever a shift-invariant stage sits
outside its range.  The emitted plan is what the generic pattern-matching and
all-pairs solvers consume, one backend call per term.
"""

from __future__ import annotations

from functools import lru_cache

from .. import scores as sc
from ..scores import ScoreFunction
from .catalog import (
    reduce_dom_to_ham,
    reduce_l1_to_dom,
    reduce_min_to_l1,
    reduce_thr_to_dom,
    reduce_weighted_eq_to_ham,
)
from .engine import LinearReduction, PlanError, ReductionTerm, identity_reduction, merge_terms, shift_inputs, term
from .piecewise import reduce_piecewise_to_ham

#: target kinds every solver backend registry must provide
LOWERED_KINDS = frozenset({"ham", "eq", "mult"})


@lru_cache(maxsize=None)
def plan_score(score: ScoreFunction, lo: int, hi: int, weight_bound: int | None = None) -> LinearReduction:
    """A plan for ``score`` valid on integer inputs in [lo, hi), lowered to
    {ham, eq, mult} targets."""
    if hi <= lo:
        raise PlanError("empty input range")
    k = score.kind
    if k in LOWERED_KINDS:
        return identity_reduction(score)
    if k == "dom":
        return _with_domain(shift_inputs(reduce_dom_to_ham(hi - lo), -lo), lo, hi)
    if k == "thr":
        return _lower(reduce_thr_to_dom(score.delta), lo, hi)
    if k == "l1":
        return _lower(shift_inputs(reduce_l1_to_dom(hi - lo), -lo), lo, hi)
    if k == "min":
        return _lower(reduce_min_to_l1(), lo, hi)
    if k in ("max", "l2p", "l2p1", "pw"):
        from dataclasses import replace

        return replace(reduce_piecewise_to_ham(sc.expansion(score), lo, hi), source=score)
    if k == "weq":
        if weight_bound is None:
            if hi - lo > 1 << 20:
                raise PlanError("weighted equality needs an explicit weight bound for large ranges")
            weight_bound = max(score.weight(v) for v in range(lo, hi))
        return _with_domain(reduce_weighted_eq_to_ham(score.weight, weight_bound), lo, hi)
    raise PlanError(f"no plan for score kind {k!r}")


def _with_domain(r: LinearReduction, lo: int, hi: int) -> LinearReduction:
    from dataclasses import replace

    return replace(r, domain=(lo, hi))


def _lower(r: LinearReduction, lo: int, hi: int) -> LinearReduction:
    """Replace every non-lowered target with its own plan at the filtered range."""
    terms: list[ReductionTerm] = []
    const: list[ReductionTerm] = []
    for t, into in [(t, terms) for t in r.terms] + [(t, const) for t in r.constant_terms]:
        if t.f.always_star or t.g.always_star:
            continue
        if t.target.kind in LOWERED_KINDS:
            into.append(t)
            continue
        flo, fhi = t.f.interval(lo, hi - 1)
        glo, ghi = t.g.interval(lo, hi - 1)
        sub = plan_score(t.target, min(flo, glo), max(fhi, ghi) + 1)
        for s in sub.terms:
            terms.append(term(t.alpha * s.alpha, s.target, t.f.then(s.f), t.g.then(s.g)))
        for s in sub.constant_terms:
            const.append(term(t.alpha * s.alpha, s.target, t.f.then(s.f), t.g.then(s.g)))
    return merge_terms(LinearReduction(r.source, tuple(terms), tuple(const), domain=(lo, hi), name=f"plan[{r.source.tag()}]"))


def plan_for_data(score: ScoreFunction, *sequences) -> LinearReduction:
    """Plan for concrete inputs: range taken from the data (STARs ignored)."""
    values = [v for seq in sequences for v in seq if v is not sc.STAR]
    if not values:
        return plan_score(score, 0, 1)
    return plan_score(score, min(values), max(values) + 1)
