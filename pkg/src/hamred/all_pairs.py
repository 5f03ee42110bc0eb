"""All-pairs solvers.

``apham_via_expansion`` renames entries per coordinate into dense ranks,
expands both vector families into 0/1 matrices whose product counts aligned
matches, and recovers Hamming distances as (both-relevant count) - matches.
The expansion product runs through the sparse multiplier after truncating the
inner dimension to the heaviest min(d^2, N) indices; the tail is accumulated
by direct pair enumeration and checked against the m1*m2/width bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import scores as sc
from .numerics import SparseBinaryMatrix, inner_order, matmul_dense, sparse_matmul
from .oracle import vprod_naive
from .reductions.engine import LinearReduction, PlanError
from .reductions.planner import plan_for_data
from .scores import STAR, ScoreFunction


@dataclass(frozen=True)
class ApInstance:
    left: tuple
    right: tuple
    score: ScoreFunction
    bound: int | None = None

    def __post_init__(self):
        dims = {len(v) for v in self.left} | {len(v) for v in self.right}
        if len(dims) > 1:
            raise ValueError(f"inconsistent vector dimensions {sorted(dims)}")

    @classmethod
    def of(cls, left, right, score: ScoreFunction, bound: int | None = None) -> "ApInstance":
        return cls(tuple(tuple(v) for v in left), tuple(tuple(v) for v in right), score, bound)

    @property
    def dim(self) -> int:
        return len(self.left[0]) if self.left else (len(self.right[0]) if self.right else 0)


def ap_naive(inst: ApInstance) -> list:
    """O[i][j] = vprod of left_i against right_j, literally."""
    return [[vprod_naive(inst.score, list(u), list(v)) for v in inst.right] for u in inst.left]


# ---------------------------------------------------------------------------
# 0/1 expansion
# ---------------------------------------------------------------------------


def expansion_matrices(left, right) -> tuple[SparseBinaryMatrix, SparseBinaryMatrix]:
    """Per-coordinate rank expansion: A[i, j + rank*d] = 1 iff left[i][j] has
    that rank among the coordinate's values; B is the transposed analogue for
    the right family.  STAR entries produce no nonzero."""
    n1, n2 = len(left), len(right)
    d = len(left[0]) if n1 else (len(right[0]) if n2 else 0)
    width = d * (n1 + n2) if d else 1
    a_coords = []
    b_coords = []
    for j in range(d):
        values = sorted({v[j] for v in left if v[j] is not STAR} | {v[j] for v in right if v[j] is not STAR})
        rank = {v: r for r, v in enumerate(values)}
        for i, u in enumerate(left):
            if u[j] is not STAR:
                a_coords.append((i, j + rank[u[j]] * d))
        for i, u in enumerate(right):
            if u[j] is not STAR:
                b_coords.append((j + rank[u[j]] * d, i))
    return (
        SparseBinaryMatrix.from_coords(n1, width, a_coords),
        SparseBinaryMatrix.from_coords(width, n2, b_coords),
    )


def mask_matrices(left, right) -> tuple[SparseBinaryMatrix, SparseBinaryMatrix]:
    n1, n2 = len(left), len(right)
    d = len(left[0]) if n1 else (len(right[0]) if n2 else 0)
    a = [(i, j) for i, u in enumerate(left) for j in range(d) if u[j] is not STAR]
    b = [(j, i) for i, u in enumerate(right) for j in range(d) if u[j] is not STAR]
    return SparseBinaryMatrix.from_coords(n1, max(d, 1), a), SparseBinaryMatrix.from_coords(max(d, 1), n2, b)


def _select_inner(A: SparseBinaryMatrix, B: SparseBinaryMatrix, keep) -> tuple[SparseBinaryMatrix, SparseBinaryMatrix]:
    remap = {int(i): pos for pos, i in enumerate(keep)}
    a = [(r, remap[c]) for r, c in A.nonzeros if c in remap]
    b = [(remap[r], c) for r, c in B.nonzeros if r in remap]
    return (
        SparseBinaryMatrix.from_coords(A.rows, max(len(keep), 1), a),
        SparseBinaryMatrix.from_coords(max(len(keep), 1), B.cols, b),
    )


def truncated_product(A: SparseBinaryMatrix, B: SparseBinaryMatrix, width: int | None, stats: dict | None = None) -> np.ndarray:
    """A x B with the inner dimension truncated to the ``width`` heaviest
    indices; the remaining indices are accumulated pair by pair and their
    count is checked against the ceil(m1*m2/width) ordering bound."""
    if width is None or width >= A.cols:
        return np.array(sparse_matmul(A, B, stats=stats), dtype=np.int64)
    width = max(1, width)
    order = inner_order(A, B)
    head, tail = order[:width], order[width:]
    Ah, Bh = _select_inner(A, B, head)
    C = np.array(sparse_matmul(Ah, Bh, stats=stats), dtype=np.int64)
    a_by_col = A.rows_by_col()
    b_by_row = B.cols_by_row()
    pairs = 0
    for i in tail:
        ra = a_by_col.get(int(i))
        cb = b_by_row.get(int(i))
        if not ra or not cb:
            continue
        pairs += len(ra) * len(cb)
        cb_idx = np.array(cb, dtype=np.int64)
        for r in ra:
            C[r, cb_idx] += 1
    tail_bound = -(-A.nnz * B.nnz // width)
    if pairs > tail_bound:
        raise RuntimeError(f"truncation tail pairs {pairs} exceed bound {tail_bound}")
    if stats is not None:
        stats["truncate_width"] = int(width)
        stats["tail_pairs"] = pairs
    return C


def apham_via_expansion(inst: ApInstance, truncate: int | None = None, stats: dict | None = None) -> list:
    """Exact all-pairs Hamming distances through the 0/1 expansion product."""
    if inst.score.kind != "ham":
        raise PlanError("apham_via_expansion requires the Hamming score")
    n1, n2 = len(inst.left), len(inst.right)
    if n1 == 0 or n2 == 0:
        return [[0] * n2 for _ in range(n1)]
    d = inst.dim
    A, B = expansion_matrices(inst.left, inst.right)
    if truncate is None:
        truncate = min(d * d, A.cols) if d else None
    matches = truncated_product(A, B, truncate, stats)
    Am, Bm = mask_matrices(inst.left, inst.right)
    d_eff = np.array(sparse_matmul(Am, Bm), dtype=np.int64)
    out = d_eff - matches
    return [[int(v) for v in row] for row in out]


# ---------------------------------------------------------------------------
# generic reduce-then-solve pipeline
# ---------------------------------------------------------------------------


def _filter_family(f: sc.Filter, family) -> tuple:
    return tuple(tuple(f(v) for v in vec) for vec in family)


def ap_plan(inst: ApInstance) -> LinearReduction:
    flat = [v for vec in inst.left for v in vec] + [v for vec in inst.right for v in vec]
    return plan_for_data(inst.score, flat)


def generic_ap(inst: ApInstance, plan: LinearReduction, stats: dict | None = None) -> list:
    """One all-pairs backend call per plan term on filtered vector families."""
    if plan.source != inst.score:
        raise PlanError(f"plan is for {plan.source.tag()}, instance has {inst.score.tag()}")
    for vec in inst.left + inst.right:
        plan.check_domain(vec)
    n1, n2 = len(inst.left), len(inst.right)
    denom = 1
    for t in plan.all_terms:
        denom = denom * t.alpha.denominator // math.gcd(denom, t.alpha.denominator)
    acc = np.zeros((n1, n2), dtype=object)
    calls = 0
    for t in plan.all_terms:
        fl = _filter_family(t.f, inst.left)
        gr = _filter_family(t.g, inst.right)
        kind = t.target.kind
        if kind == "ham":
            res = np.array(apham_via_expansion(ApInstance(fl, gr, sc.HAM)), dtype=object)
        elif kind == "eq":
            A, B = expansion_matrices(fl, gr)
            res = truncated_product(A, B, None).astype(object)
        elif kind == "mult":
            la = [[0 if v is STAR else v for v in vec] for vec in fl]
            rb = [[0 if v is STAR else v for v in vec] for vec in gr]
            rb_t = [[rb[i][k] for i in range(n2)] for k in range(inst.dim)]
            res = np.array(matmul_dense(la, rb_t), dtype=object)
        else:
            raise PlanError(f"no all-pairs backend for target {kind!r}")
        calls += 1
        acc += int(t.alpha * denom) * res
    if denom != 1:
        if np.any(acc % denom):
            raise ValueError("non-integer aggregate (catalog bug)")
        acc = acc // denom
    if stats is not None:
        stats["backend_calls"] = stats.get("backend_calls", 0) + calls
        stats["terms"] = plan.term_count
    return [[int(v) for v in row] for row in acc]
