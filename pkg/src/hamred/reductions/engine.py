"""Linear-reduction engine.

A reduction expresses one binary score as an exact linear combination of
target scores applied to filtered copies of the inputs:

    x <> y  =  sum_i alpha_i * target_i(f_i(x), g_i(y))

The same term list lifts verbatim to the elementwise vector product, to
convolution and to the matrix product, which is how every solver pipeline in
this package consumes it.  Coefficients are exact rationals; the aggregate is
asserted to be an integer at every evaluation site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .. import scores as sc
from ..scores import Filter, IDENTITY, ScoreFunction, apply_filter, eval_score


class DomainError(ValueError):
    """An input lies outside the declared valid range of a reduction."""


class PlanError(ValueError):
    """A reduction plan does not match the instance or the backend registry."""


@dataclass(frozen=True)
class ReductionTerm:
    alpha: Fraction
    target: ScoreFunction
    f: Filter = IDENTITY
    g: Filter = IDENTITY

    def key(self):
        return (self.target, self.f.steps, self.g.steps)


def term(alpha, target: ScoreFunction, f: Filter = IDENTITY, g: Filter = IDENTITY) -> ReductionTerm:
    return ReductionTerm(Fraction(alpha), target, f, g)


@dataclass(frozen=True)
class LinearReduction:
    """An ordered list of terms plus a single-argument polynomial correction.

    ``constant_terms`` carries the correction part: multiplication terms whose
    value depends on one argument only (the other side is a constant-1 filter),
    still vanishing whenever either input is STAR.  ``domain`` is the half-open
    integer range on which the identity is guaranteed; ``None`` means every
    integer input is valid.
    """

    source: ScoreFunction
    terms: tuple[ReductionTerm, ...]
    constant_terms: tuple[ReductionTerm, ...] = ()
    domain: tuple[int, int | None] | None = None
    name: str = ""

    @property
    def all_terms(self) -> tuple[ReductionTerm, ...]:
        return self.terms + self.constant_terms

    @property
    def term_count(self) -> int:
        return len(self.terms) + len(self.constant_terms)

    def count_targets(self, kind: str) -> int:
        return sum(1 for t in self.all_terms if t.target.kind == kind)

    def target_kinds(self) -> set:
        return {t.target.kind for t in self.all_terms}

    def check_domain(self, values) -> None:
        if self.domain is None:
            return
        lo, hi = self.domain
        for v in values:
            if v is sc.STAR:
                continue
            if v < lo or (hi is not None and v >= hi):
                raise DomainError(f"input {v} outside declared domain [{lo}, {hi})")

    def star_preserving(self) -> bool:
        return all(t.f.preserves_star and t.g.preserves_star for t in self.all_terms)


def identity_reduction(score: ScoreFunction) -> LinearReduction:
    return LinearReduction(score, (term(1, score),), name=f"id[{score.tag()}]")


def merge_terms(r: LinearReduction) -> LinearReduction:
    def merged(ts):
        acc: dict = {}
        order: list = []
        for t in ts:
            if t.f.always_star or t.g.always_star or t.alpha == 0:
                continue
            k = t.key()
            if k in acc:
                acc[k] = replace(acc[k], alpha=acc[k].alpha + t.alpha)
            else:
                acc[k] = t
                order.append(k)
        return tuple(acc[k] for k in order if acc[k].alpha != 0)

    return replace(r, terms=merged(r.terms), constant_terms=merged(r.constant_terms))


def shift_inputs(r: LinearReduction, delta: int) -> LinearReduction:
    """Precompose every filter with x -> x + delta.

    Valid whenever the source score is shift-invariant; used to move data into
    a reduction's declared range.
    """
    if delta == 0:
        return r
    if not r.source.shift_invariant:
        raise DomainError(f"source {r.source.tag()} is not shift-invariant; cannot auto-shift")
    pre = sc.shift(delta)

    def sh(ts):
        return tuple(replace(t, f=pre.then(t.f), g=pre.then(t.g)) for t in ts)

    dom = None
    if r.domain is not None:
        lo, hi = r.domain
        dom = (lo - delta, None if hi is None else hi - delta)
    return replace(r, terms=sh(r.terms), constant_terms=sh(r.constant_terms), domain=dom)


# ---------------------------------------------------------------------------
# scalar and grid evaluation
# ---------------------------------------------------------------------------


def eval_reduction(r: LinearReduction, x, y) -> int:
    """Evaluate the reduction identity at a single (x, y)."""
    acc = Fraction(0)
    for t in r.all_terms:
        acc += t.alpha * eval_score(t.target, t.f(x), t.g(y))
    if acc.denominator != 1:
        raise ValueError(f"non-integer aggregate {acc} (catalog bug) in {r.name or r.source.tag()}")
    return int(acc)


def _common_denominator(r: LinearReduction) -> int:
    d = 1
    for t in r.all_terms:
        d = d * t.alpha.denominator // math.gcd(d, t.alpha.denominator)
    return d


def _grid_bound(r: LinearReduction, xr, yr, denom: int) -> int:
    total = 0
    for t in r.all_terms:
        if t.f.always_star or t.g.always_star:
            continue
        fr = t.f.interval(*xr)
        gr = t.g.interval(*yr)
        total += abs(int(t.alpha * denom)) * sc.score_abs_bound(t.target, fr, gr)
    return total


def reduction_grid(r: LinearReduction, xs, ys) -> np.ndarray:
    """Evaluate sum_i alpha_i * target_i(f_i(x), g_i(y)) over the grid xs x ys.

    Exact: uses int64 when a conservative interval bound certifies no
    overflow, and Python-int object arrays otherwise.
    """
    xs = np.asarray(list(xs), dtype=np.int64)
    ys = np.asarray(list(ys), dtype=np.int64)
    denom = _common_denominator(r)
    xr = (int(xs.min()), int(xs.max())) if len(xs) else (0, 0)
    yr = (int(ys.min()), int(ys.max())) if len(ys) else (0, 0)
    bound = _grid_bound(r, xr, yr, denom)
    use_obj = bound >= 2**62 or any(t.target.kind == "pw" for t in r.all_terms)
    if use_obj:
        xs = xs.astype(object)
        ys = ys.astype(object)
    acc = np.zeros((len(xs), len(ys)), dtype=object if use_obj else np.int64)
    ones_x = np.ones(len(xs), dtype=bool)
    ones_y = np.ones(len(ys), dtype=bool)
    for t in r.all_terms:
        if t.f.always_star or t.g.always_star:
            continue
        fx = t.f.on_array(xs, ones_x)
        gy = t.g.on_array(ys, ones_y)
        tab = sc.score_outer(t.target, fx, gy)
        coeff = int(t.alpha * denom)
        acc = acc + coeff * tab
    if denom != 1:
        rem = acc % denom
        if rem.any():
            raise ValueError(f"non-integer aggregate in grid evaluation of {r.name or r.source.tag()}")
        acc = acc // denom
    return acc


def source_grid(score: ScoreFunction, xs, ys) -> np.ndarray:
    """Direct score table, for comparing against reduction_grid."""
    return reduction_grid(identity_reduction(score), xs, ys)


# ---------------------------------------------------------------------------
# operator lifting
# ---------------------------------------------------------------------------


def oracle_backend(op: str, target: ScoreFunction, fa, gb):
    from .. import oracle

    if op == "vprod":
        return oracle.vprod_naive(target, fa, gb)
    if op == "conv":
        return oracle.conv_naive(target, fa, gb)
    if op == "mprod":
        return oracle.mprod_naive(target, fa, gb)
    raise PlanError(f"unknown operator {op!r}")


def _filter_matrix(f: Filter, A):
    return [apply_filter(f, row) for row in A]


def apply_reduction(r: LinearReduction, op: str, a, b, backend=oracle_backend, stats: dict | None = None):
    """Lift the reduction over an operator: op in {vprod, conv, mprod}.

    ``backend(op, target, fa, gb)`` must return the exact (+,target) product
    of the filtered inputs.  Results are combined with exact rational
    coefficients and the aggregate is asserted integral.
    """
    if op not in ("vprod", "conv", "mprod"):
        raise PlanError(f"unknown operator {op!r}")
    flat_a = [v for row in a for v in row] if op == "mprod" else a
    flat_b = [v for row in b for v in row] if op == "mprod" else b
    r.check_domain(flat_a)
    r.check_domain(flat_b)
    denom = _common_denominator(r)
    acc = None
    calls = 0
    for t in r.all_terms:
        if t.f.always_star or t.g.always_star:
            continue
        if op == "mprod":
            fa = _filter_matrix(t.f, a)
            gb = _filter_matrix(t.g, b)
        else:
            fa = apply_filter(t.f, a)
            gb = apply_filter(t.g, b)
        res = backend(op, t.target, fa, gb)
        calls += 1
        coeff = int(t.alpha * denom)
        piece = coeff * np.asarray(res, dtype=object)
        acc = piece if acc is None else acc + piece
    if stats is not None:
        stats["backend_calls"] = stats.get("backend_calls", 0) + calls
    if acc is None:
        if op == "vprod":
            return 0
        if op == "conv":
            return [0] * (len(a) + len(b) - 1)
        return [[0] * (len(b[0]) if b else 0) for _ in range(len(a))]
    if denom != 1:
        rem = acc % denom
        if np.any(rem):
            raise ValueError(f"non-integer aggregate (catalog bug) in {r.name or r.source.tag()}")
        acc = acc // denom
    if op == "vprod":
        return int(acc)
    if op == "conv":
        return [int(v) for v in acc]
    return [[int(v) for v in row] for row in acc]


# ---------------------------------------------------------------------------
# serialization (consumed by the CLI "reduce --emit" command)
# ---------------------------------------------------------------------------


def serialize_reduction(r: LinearReduction) -> str:
    lines = [f"reduction {r.source.tag() if r.source.kind != 'pw' else 'pw'}"]
    if r.domain is not None:
        hi = "inf" if r.domain[1] is None else str(r.domain[1])
        lines.append(f"domain {r.domain[0]} {hi}")
    for kind, ts in (("term", r.terms), ("const", r.constant_terms)):
        for t in ts:
            tgt = t.target.tag() if t.target.kind != "pw" else "pw"
            lines.append(
                f"{kind} {t.alpha.numerator} {t.alpha.denominator} {tgt} "
                f"{sc.serialize_filter(t.f)} {sc.serialize_filter(t.g)}"
            )
    return "\n".join(lines) + "\n"


def parse_reduction(text: str) -> LinearReduction:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("reduction "):
        raise ValueError("missing reduction header")
    source = sc.parse_score(lines[0].split()[1])
    domain = None
    terms: list[ReductionTerm] = []
    const: list[ReductionTerm] = []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "domain":
            domain = (int(parts[1]), None if parts[2] == "inf" else int(parts[2]))
            continue
        kind, num, den, tgt, ffs, gfs = parts
        t = term(Fraction(int(num), int(den)), sc.parse_score(tgt), sc.parse_filter(ffs), sc.parse_filter(gfs))
        (terms if kind == "term" else const).append(t)
    return LinearReduction(source, tuple(terms), tuple(const), domain)
