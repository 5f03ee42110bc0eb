"""Monomial dominance: x^a y^b * 1[x < y] unwound into equality terms.

The scaling recursion halves both inputs, trading one level of magnitude for
a weighted-equality correction and lower-degree instances restricted by
parity:

    MDom[a,b](x,y) = 2^(a+b) * MDom[a,b](x//2, y//2)
                   + MEq[a+b](even(x), odd(y)-1)
                   + P(x,y)*1[odd(x) < even(y)] + Q(x,y)*1[even(x) < odd(y)]
                   + R(x,y)*1[odd(x) < odd(y)]

with P = x^a y^b - (x-1)^a y^b, Q = x^a y^b - x^a (y-1)^b and
R = x^a y^b - (x-1)^a (y-1)^b, all of degree < a+b.  Weighted equalities
split into powers of two over bit filters, so the fully unwound form consists
of star-aware equality terms only.  Flattening is memoized per (a, b, level);
the emitted count is checked against the closed-form recursion bound.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .. import scores as sc
from ..scores import EQ, Filter, Poly2
from .engine import LinearReduction, merge_terms, term

# raw terms are (alpha:int, f_steps, g_steps) with an implicit EQ target

_EVEN = ("even",)
_ODD = ("odd",)


@lru_cache(maxsize=None)
def _pqr(a: int, b: int) -> tuple[Poly2, Poly2, Poly2]:
    mono = Poly2.from_monomials([(a, b, 1)])
    p = mono - mono.compose_affine(1, -1, 1, 0)
    q = mono - mono.compose_affine(1, 0, 1, -1)
    r = mono - mono.compose_affine(1, -1, 1, -1)
    return p, q, r


@lru_cache(maxsize=None)
def _meq_raw(k: int, m: int) -> tuple:
    """u^k * 1[u=v] for u, v in [0, 2^m) as bit-filtered equality terms."""
    if k == 0:
        return ((1, (), ()),)
    w = sc.power_weight(k)
    bits = ((2**m - 1) ** k).bit_length()
    return tuple((2**i, (("bit", w, i),), (("bit", w, i),)) for i in range(bits))


def _merge_raw(raw) -> tuple:
    acc: dict = {}
    order = []
    for al, fs, gs in raw:
        fs2, dead = sc.canonical_steps(fs)
        if dead:
            continue
        gs2, dead = sc.canonical_steps(gs)
        if dead:
            continue
        k = (fs2, gs2)
        if k in acc:
            acc[k] += al
        else:
            acc[k] = al
            order.append(k)
    return tuple((acc[k], k[0], k[1]) for k in order if acc[k] != 0)


@lru_cache(maxsize=None)
def _mdom_raw(a: int, b: int, m: int) -> tuple:
    """Flattened terms of MDom[a,b] on [0, 2^m), merged per (a, b, level).

    Merging inside the memoized cells keeps intermediate lists at their
    collapsed size; parity-contradictory chains drop out as identically-zero.
    """
    if m <= 0:
        return ()
    out = []
    scale = 2 ** (a + b)
    half = (("floordiv", 2),)
    for al, fs, gs in _mdom_raw(a, b, m - 1):
        out.append((al * scale, half + fs, half + gs))
    meq_g = (_ODD, ("affine", 1, -1))
    for al, fs, gs in _meq_raw(a + b, m):
        out.append((al, (_EVEN,) + fs, meq_g + gs))
    p, q, r = _pqr(a, b)
    for pref_f, pref_g, poly in ((_ODD, _EVEN, p), (_EVEN, _ODD, q), (_ODD, _ODD, r)):
        for i, j, c in poly.monomials():
            for al, fs, gs in _mdom_raw(i, j, m):
                out.append((al * c, (pref_f,) + fs, (pref_g,) + gs))
    return _merge_raw(out)


@lru_cache(maxsize=None)
def mdom_term_count(a: int, b: int, m: int) -> int:
    """Emitted term count of the unwound recursion (before merging)."""
    if m <= 0:
        return 0
    total = mdom_term_count(a, b, m - 1) + _meq_count(a + b, m)
    for poly in _pqr(a, b):
        for i, j, _ in poly.monomials():
            total += mdom_term_count(i, j, m)
    return total


def _meq_count(k: int, m: int) -> int:
    return 1 if k == 0 else ((2**m - 1) ** k).bit_length()


#: recorded constant for the closed-form count bound below
MDOM_BOUND_CONSTANT = 4


def mdom_count_bound(a: int, b: int, m: int) -> int:
    """C * m * (a+b) * multinomial(a+b+m; a, b, m) * 4^(a+b), floored at the
    degree-0 cost of one equality term per level."""
    multinom = math.comb(a + b + m, a) * math.comb(b + m, b)
    return MDOM_BOUND_CONSTANT * max(1, m) * max(1, a + b) * multinom * 4 ** (a + b)


def mdom_pp(a: int, b: int) -> sc.PiecewisePolynomial:
    return sc.PiecewisePolynomial.of(sc.HalfplaneTerm(Poly2.from_monomials([(a, b, 1)]), -1, 1, 0))


@lru_cache(maxsize=None)
def reduce_mdom_to_ham(a: int, b: int, lo: int, hi: int) -> LinearReduction:
    """x^a y^b * 1[x < y] for integer x, y in [lo, hi) as equality terms.

    Negative ranges are handled by the shift expansion
    x^a y^b = sum over (i,j) of binom coefficients * (x+D)^i (y+D)^j * (-D)^(a+b-i-j),
    each piece a nonnegative-domain instance.
    """
    if a < 0 or b < 0:
        raise ValueError("monomial degrees must be nonnegative")
    if hi <= lo:
        raise ValueError("empty domain")
    delta = max(0, -lo)
    top = hi - 1 + delta
    m = top.bit_length()
    pieces: list[tuple[int, int, int]] = []
    if delta == 0:
        pieces.append((a, b, 1))
    else:
        for i in range(a + 1):
            for j in range(b + 1):
                c = math.comb(a, i) * math.comb(b, j) * (-delta) ** (a - i) * (-delta) ** (b - j)
                pieces.append((i, j, c))
    pre = (("affine", 1, delta),) if delta else ()
    terms = []
    for i, j, c in pieces:
        if c == 0:
            continue
        for al, fs, gs in _mdom_raw(i, j, m):
            terms.append(term(Fraction(c * al), EQ, Filter.of(*(pre + fs)), Filter.of(*(pre + gs))))
    r = merge_terms(
        LinearReduction(sc.piecewise(mdom_pp(a, b)), tuple(terms), domain=(lo, hi), name=f"mdom[{a},{b}]")
    )
    if delta == 0 and len(r.terms) > mdom_count_bound(a, b, m):
        raise RuntimeError(f"mdom term count {len(r.terms)} exceeds recursion bound (catalog bug)")
    return r
