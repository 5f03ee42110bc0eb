"""Pattern-matching solvers.

All solvers compute O[i] = sum_j score(P[j], T[i+j]) over full-overlap
alignments i in [0, n-m] and return exactly pm_naive's output.  The bucketed
Hamming solver splits pattern symbols into frequent (one binary convolution
each) and infrequent (direct occurrence enumeration), with the ignore mark
removed up front by the two-instance star elimination.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from . import scores as sc
from .numerics import conv_mult
from .reductions.engine import LinearReduction, PlanError
from .reductions.planner import plan_for_data
from .scores import STAR, ScoreFunction


@dataclass(frozen=True)
class PmInstance:
    text: list
    pattern: list
    score: ScoreFunction
    bound: int | None = None

    def __post_init__(self):
        if len(self.pattern) > len(self.text):
            raise ValueError(f"pattern length {len(self.pattern)} exceeds text length {len(self.text)}")
        if len(self.pattern) == 0:
            raise ValueError("empty pattern")

    @property
    def out_len(self) -> int:
        return len(self.text) - len(self.pattern) + 1


def _to_arrays(seq, dtype) -> tuple[np.ndarray, np.ndarray]:
    vals = np.array([0 if v is STAR else v for v in seq], dtype=dtype)
    mask = np.array([v is not STAR for v in seq], dtype=bool)
    return vals, mask


def pm_naive(inst: PmInstance) -> list:
    """Definitional sliding-window evaluation (the solver-grade reference)."""
    n, m = len(inst.text), len(inst.pattern)
    ints = [v for v in inst.text if v is not STAR] + [v for v in inst.pattern if v is not STAR]
    dtype: object = np.int64
    if ints:
        r = (min(ints), max(ints))
        if m * sc.score_abs_bound(inst.score, r, r) >= 2**62 or inst.score.kind == "pw":
            dtype = object
    tv, tm = _to_arrays(inst.text, dtype)
    pv, pm = _to_arrays(inst.pattern, dtype)
    out = []
    for i in range(n - m + 1):
        row = sc.score_elementwise(inst.score, (pv, pm), (tv[i : i + m], tm[i : i + m]))
        out.append(int(row.sum()))
    return out


def _corr(pattern_vals: list, text_vals: list) -> np.ndarray:
    """Cross-correlation sum_j p[j]*t[i+j] on full-overlap offsets."""
    m, n = len(pattern_vals), len(text_vals)
    c = conv_mult(list(reversed(pattern_vals)), text_vals)
    return np.array(c[m - 1 : n], dtype=object)


def default_threshold(m: int) -> int:
    """Frequency cutoff sqrt(m log m) balancing convolution vs enumeration."""
    return math.ceil(math.sqrt(m * math.log2(m + 1)))


def match_count_pm(pattern: list, text: list, threshold: int | None = None, stats: dict | None = None) -> np.ndarray:
    """Count aligned equal non-STAR pairs per full-overlap offset.

    Symbols with more than ``threshold`` pattern occurrences contribute one
    binary convolution each; the rest are enumerated per matching text
    position.
    """
    m, n = len(pattern), len(text)
    out = np.zeros(n - m + 1, dtype=object)
    occ: dict = {}
    for j, v in enumerate(pattern):
        if v is not STAR:
            occ.setdefault(v, []).append(j)
    if threshold is None:
        threshold = default_threshold(m)
    tpos: dict = {}
    for t, v in enumerate(text):
        if v is not STAR and v in occ:
            tpos.setdefault(v, []).append(t)
    convolutions = 0
    steps = 0
    for v, pj in occ.items():
        tj = tpos.get(v)
        if not tj:
            continue
        if len(pj) > threshold:
            pa = [1 if pattern[j] is not STAR and pattern[j] == v else 0 for j in range(m)]
            ta = [1 if text[t] is not STAR and text[t] == v else 0 for t in range(n)]
            out += _corr(pa, ta)
            convolutions += 1
        else:
            steps += len(pj) * len(tj)
            idx = (np.array(tj)[:, None] - np.array(pj)[None, :]).ravel()
            idx = idx[(idx >= 0) & (idx <= n - m)]
            np.add.at(out, idx, 1)
    if stats is not None:
        stats["convolutions"] = stats.get("convolutions", 0) + convolutions
        stats["enumeration_steps"] = stats.get("enumeration_steps", 0) + steps
        stats.setdefault("frequent_symbols", []).append(convolutions)
        stats["threshold"] = threshold
    return out


def ham_pm_bucketed(inst: PmInstance, threshold: int | None = None, stats: dict | None = None) -> list:
    """Exact star-aware Hamming pattern matching.

    Inputs are shifted to nonnegative, the ignore mark is eliminated into two
    pure-integer instances (STAR -> 0 against t -> t+1, corrected by the 0/1
    collapse), and each instance is solved by frequent/infrequent match
    counting.
    """
    if inst.score.kind != "ham":
        raise PlanError("ham_pm_bucketed requires the Hamming score")
    ints = [v for v in inst.text if v is not STAR] + [v for v in inst.pattern if v is not STAR]
    if not ints:
        return [0] * inst.out_len
    delta = -min(min(ints), 0)

    def fmap(v):
        return 0 if v is STAR else v + delta + 1

    def gmap(v):
        return 0 if v is STAR else 1

    ft = [fmap(v) for v in inst.text]
    fp = [fmap(v) for v in inst.pattern]
    gt = [gmap(v) for v in inst.text]
    gp = [gmap(v) for v in inst.pattern]
    matches_f = match_count_pm(fp, ft, threshold, stats)
    matches_g = match_count_pm(gp, gt, threshold, stats)
    return [int(v) for v in (matches_g - matches_f)]


def l2p_pm_fft(inst: PmInstance, stats: dict | None = None) -> list:
    """Even-power score via binomial expansion into 2p+1 convolutions."""
    if inst.score.kind != "l2p" or inst.score.p is None or inst.score.p < 1:
        raise PlanError("l2p_pm_fft requires an even power score with p >= 1")
    if any(v is STAR for v in inst.text) or any(v is STAR for v in inst.pattern):
        raise ValueError("l2p_pm_fft does not accept STAR entries; use the reduction route")
    e = 2 * inst.score.p
    out = np.zeros(inst.out_len, dtype=object)
    convolutions = 0
    for r in range(e + 1):
        coef = math.comb(e, r) * (-1) ** r
        pa = [coef * v ** (e - r) for v in inst.pattern]
        ta = [v**r for v in inst.text]
        out += _corr(pa, ta)
        convolutions += 1
    if stats is not None:
        stats["convolutions"] = stats.get("convolutions", 0) + convolutions
    return [int(v) for v in out]


def sparse_lessthan_pm(inst: PmInstance, k: int | None = None, stats: dict | None = None) -> list:
    """Dominance pattern matching tuned to the relevant-entry counts.

    Relevant pattern entries are ranked by (value, position) into k buckets;
    whole dominated buckets are credited by one binary convolution per
    bucket, and each relevant text element settles its own (partial) bucket
    by direct comparison.
    """
    if inst.score.kind != "dom":
        raise PlanError("sparse_lessthan_pm requires the dominance score")
    T, P = inst.text, inst.pattern
    n, m = len(T), len(P)
    out_len = inst.out_len
    rel_p = sorted(((P[j], j) for j in range(m) if P[j] is not STAR), key=lambda vj: (vj[0], vj[1]))
    rel_t = [t for t in range(n) if T[t] is not STAR]
    s_p, s_t = len(rel_p), len(rel_t)
    if s_p == 0 or s_t == 0:
        return [0] * out_len
    if k is None:
        k = max(1, math.ceil(math.sqrt(s_t * s_p / (n * math.log2(max(m, 2))))))
    k = min(k, s_p)
    q = -(-s_p // k)
    sorted_vals = [v for v, _ in rel_p]
    ranks_of_text = {}
    buckets_of_text: dict[int, list[int]] = {}
    for t in rel_t:
        r = bisect_right(sorted_vals, T[t])
        ranks_of_text[t] = r
        if r > 0:
            buckets_of_text.setdefault((r - 1) // q, []).append(t)
    out = np.zeros(out_len, dtype=object)
    convolutions = 0
    for i in range(k):
        tlist = buckets_of_text.get(i)
        if not tlist:
            continue
        hi = min((i + 1) * q, s_p)
        pa = [0] * m
        for _, j in rel_p[:hi]:
            pa[j] = 1
        ta = [0] * n
        for t in tlist:
            ta[t] = 1
        out += _corr(pa, ta)
        convolutions += 1
    comparisons = 0
    for t in rel_t:
        r = ranks_of_text[t]
        if r == 0:
            continue
        i = (r - 1) // q
        lo, hi = i * q, min((i + 1) * q, s_p)
        comparisons += hi - lo
        for rank in range(r, hi):
            a = t - rel_p[rank][1]
            if 0 <= a < out_len:
                out[a] -= 1
    if comparisons > s_t * q:
        raise RuntimeError("intra-bucket comparison budget exceeded (bucketing bug)")
    if stats is not None:
        stats["convolutions"] = stats.get("convolutions", 0) + convolutions
        stats["buckets"] = k
        stats["comparisons"] = comparisons
    return [int(v) for v in out]


def weighted_ham_pm(inst: PmInstance, w: list, stats: dict | None = None) -> list:
    """Position-weighted mismatch count via bit-filtered Hamming instances."""
    if inst.score.kind != "ham":
        raise PlanError("weighted_ham_pm requires the Hamming score")
    m = len(inst.pattern)
    if len(w) != m:
        raise ValueError("weight vector length must match the pattern")
    if any(wi < 0 for wi in w):
        raise ValueError("negative position weights")
    W = max(w, default=0)
    out = np.zeros(inst.out_len, dtype=object)
    calls = 0
    for i in range(int(W).bit_length()):
        pat = [inst.pattern[j] if (w[j] >> i) & 1 else STAR for j in range(m)]
        sub = PmInstance(inst.text, pat, sc.HAM)
        out += (1 << i) * np.array(ham_pm_bucketed(sub, stats=stats), dtype=object)
        calls += 1
    if stats is not None:
        stats["ham_calls"] = calls
    return [int(v) for v in out]


# ---------------------------------------------------------------------------
# generic reduce-then-solve pipeline
# ---------------------------------------------------------------------------


def _pm_mult(pattern: list, text: list) -> np.ndarray:
    pa = [0 if v is STAR else v for v in pattern]
    ta = [0 if v is STAR else v for v in text]
    return _corr(pa, ta)


def pm_plan(inst: PmInstance) -> LinearReduction:
    """Fully lowered plan for this instance's score over its data range."""
    return plan_for_data(inst.score, inst.text, inst.pattern)


def generic_pm(inst: PmInstance, plan: LinearReduction, stats: dict | None = None) -> list:
    """Run one lowered backend call per plan term on filtered copies of the
    pattern (first argument) and text (second argument)."""
    if plan.source != inst.score:
        raise PlanError(f"plan is for {plan.source.tag()}, instance has {inst.score.tag()}")
    plan.check_domain(inst.text)
    plan.check_domain(inst.pattern)
    denom = 1
    for t in plan.all_terms:
        denom = denom * t.alpha.denominator // math.gcd(denom, t.alpha.denominator)
    acc = np.zeros(inst.out_len, dtype=object)
    calls = 0
    for t in plan.all_terms:
        fp = sc.apply_filter(t.f, inst.pattern)
        gt = sc.apply_filter(t.g, inst.text)
        kind = t.target.kind
        if kind == "ham":
            res = np.array(ham_pm_bucketed(PmInstance(gt, fp, sc.HAM), stats=stats), dtype=object)
        elif kind == "eq":
            res = match_count_pm(fp, gt, stats=stats)
        elif kind == "mult":
            res = _pm_mult(fp, gt)
        else:
            raise PlanError(f"no pattern-matching backend for target {kind!r}")
        calls += 1
        acc += int(t.alpha * denom) * res
    if denom != 1:
        if np.any(acc % denom):
            raise ValueError("non-integer aggregate (catalog bug)")
        acc = acc // denom
    if stats is not None:
        stats["backend_calls"] = stats.get("backend_calls", 0) + calls
        stats["terms"] = plan.term_count
    return [int(v) for v in acc]
